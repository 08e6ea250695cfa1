#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wsscatter/diagnostics.hpp"
#include "wsscatter/spectral.hpp"

using namespace wss;

namespace {

std::vector<double> log_times(double lo, double hi, int per_octave) {
  std::vector<double> t;
  int m = int(std::round(per_octave * std::log2(hi / lo)));
  for (int j = 0; j <= m; ++j) t.push_back(lo * std::pow(2.0, double(j) / per_octave));
  return t;
}

DecaySeries power_series(const std::vector<double>& t, double c, double p, const std::string& label = "s") {
  DecaySeries s{t, {}, label};
  for (double x : t) s.values.push_back(c * std::pow(x, p));
  return s;
}

}  // namespace

// ---- fitting ----

TEST(Fit, ExactPowerLaw) {
  auto f = fit_decay(power_series(log_times(1, 64, 4), 2.5, -1.5));
  EXPECT_NEAR(f.exponent, -1.5, 1e-10);
  EXPECT_NEAR(f.prefactor, 2.5, 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Fit, ConstantSeries) {
  auto f = fit_decay(power_series(log_times(1, 8, 2), 3.0, 0.0));
  EXPECT_NEAR(f.exponent, 0.0, 1e-14);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(Fit, TwoTermSeries) {
  DecaySeries s{log_times(10, 100, 16), {}, "two"};
  for (double t : s.times) s.values.push_back(1 / t + 1 / (t * t));
  auto f = fit_decay(s);
  EXPECT_GT(f.exponent, -1.2);
  EXPECT_LT(f.exponent, -1.0);
}

TEST(Fit, ZerosAreFlooredWithWarning) {
  auto s = power_series(log_times(1, 8, 2), 1.0, -1.0);
  s.values[2] = 0.0;
  auto f = fit_decay(s);
  EXPECT_FALSE(f.warning.empty());
  EXPECT_TRUE(std::isfinite(f.exponent));
}

TEST(Fit, ScaleEquivariantAndReproducible) {
  auto s = power_series(log_times(2, 50, 8), 1.0, -0.7);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= 1.0 + 0.1 * std::sin(double(i));
  auto a = fit_decay(s);
  auto s2 = s;
  for (auto& v : s2.values) v *= 7.0;
  auto b = fit_decay(s2);
  EXPECT_NEAR(a.exponent, b.exponent, 1e-12);
  EXPECT_NEAR(b.prefactor, 7.0 * a.prefactor, 1e-12 * b.prefactor);
  auto c = fit_decay(s);
  EXPECT_EQ(a.exponent, c.exponent);
  EXPECT_EQ(a.prefactor, c.prefactor);
}

TEST(Fit, WindowAndValidation) {
  auto s = power_series(log_times(1, 64, 4), 1.0, -2.0);
  auto f = fit_decay_after(s, 8.0);
  EXPECT_EQ(f.t_lo, 8.0);
  EXPECT_EQ(f.points, 13);
  EXPECT_THROW(fit_decay(s, 100.0, 200.0), DomainError);
  DecaySeries bad{{1, 1}, {1, 1}, "bad"};
  EXPECT_THROW(fit_decay(bad), DomainError);
  DecaySeries early{{0.5, 2}, {1, 1}, "early"};
  EXPECT_THROW(fit_decay(early), DomainError);
}

// ---- space-time norms ----

TEST(SpacetimeNorm, ConstantFieldIsItsSpaceNorm) {
  Grid g(16, 8.0);
  auto f = sample<cplx>(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  std::vector<double> t{3.0, 3.25, 3.5, 3.75, 4.0};
  std::vector<ComplexField> fs(t.size(), f);
  EXPECT_NEAR(spacetime_norm(t, fs, 4.0, 4.0, 3.0, 4.0), lebesgue_norm(f, 4.0), 1e-14);
  std::vector<ComplexField> z(t.size(), ComplexField(g));
  EXPECT_EQ(spacetime_norm(t, z, 4.0, 4.0, 3.0, 4.0), 0.0);
}

TEST(SpacetimeNorm, PowerLawMatchesClosedForm) {
  // ||f(s)||_4 = s^{-3/4}, q = 8/3: int_t^{2t} s^{-2} ds = 1/(2t)
  for (double t : {2.0, 8.0, 32.0}) {
    auto s = power_series(log_times(t, 2 * t, 16), 1.0, -0.75);
    const double exact = std::pow(1.0 / (2 * t), 3.0 / 8.0);
    EXPECT_NEAR(spacetime_norm(s, 8.0 / 3.0, t, 2 * t) / exact, 1.0, 1e-3);
  }
}

TEST(SpacetimeNorm, SupAndWindowRules) {
  auto s = power_series(log_times(1, 16, 4), 1.0, -1.0);
  EXPECT_DOUBLE_EQ(spacetime_norm(s, kInfinity, 2.0, 16.0), 0.5);
  double prev = 0.0;
  for (double hi : {4.0, 6.0, 10.0, 16.0}) {
    const double v = spacetime_norm(s, 2.0, 2.0, hi);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_GE(spacetime_norm(s, 2.0, 1.5, 16.0), spacetime_norm(s, 2.0, 2.0, 16.0));
  EXPECT_THROW(spacetime_norm(s, 2.0, 0.5, 4.0), DomainError);
  EXPECT_THROW(spacetime_norm(s, 2.0, 2.0, 32.0), DomainError);
  EXPECT_THROW(spacetime_norm(s, 0.5, 2.0, 4.0), DomainError);
}

// ---- dyadic estimate ----

TEST(Dyadic, ConstantFormula) {
  EXPECT_NEAR(dyadic_constant(4.0, 1, 3.0 / 8.0, 0.0, 0.25), std::pow(1.0 - std::pow(2.0, -0.5), -0.25), 1e-12);
  EXPECT_EQ(dyadic_constant(kInfinity, 2, 0.5, 0.0, 0.0), 1.0);
  EXPECT_THROW(dyadic_constant(4.0, 1, 0.1, 0.0, 0.25), DomainError);
}

TEST(Dyadic, SingleExactPowerLaw) {
  // f = s^{-a} in L^q: lambda = a - 1/q, the bound is tight up to the constant
  const double q = 4.0, a = 0.625;
  auto r = dyadic_norm_bound({{[&](double s) { return std::pow(s, -a); }, q}}, q, 0.0, a - 1 / q, 2.0, 4096.0);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.direct, r.estimate);
  EXPECT_GE(r.direct / r.estimate, 0.3);
  EXPECT_EQ(r.mu, 0.0);
}

TEST(Dyadic, RandomPowerLawProducts) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int held = 0;
  for (int c = 0; c < 20; ++c) {
    const int n = 1 + c % 3;
    const double q = 1.0 + 3.0 * U(rng);
    std::vector<DyadicFactor> fs;
    double lambda = 1e9;
    for (int k = 0; k < n; ++k) {
      const double qk = c % 5 == 0 && k == 0 ? kInfinity : n * q * (1.0 + U(rng));
      const double a = 1.0 / (std::isinf(qk) ? 1e300 : qk) + 0.1 + 0.6 * U(rng);
      const double amp = 0.5 + U(rng), osc = 0.3 * U(rng);
      fs.push_back({[=](double s) { return amp * std::pow(s, -a) * (1.0 + osc * std::sin(3.0 * std::log(s))); }, qk});
      lambda = std::min(lambda, a - (std::isinf(qk) ? 0.0 : 1.0 / qk));
    }
    double mu = 1.0 / q;
    for (const auto& f : fs) mu -= std::isinf(f.q) ? 0.0 : 1.0 / f.q;
    // keep n lambda + rho > mu
    const double rho = std::max(0.3 * U(rng), mu - n * lambda + 0.05);
    auto r = dyadic_norm_bound(fs, q, rho, lambda, 1.0 + 4.0 * U(rng), 2000.0, 32);
    EXPECT_LE(r.direct, r.estimate) << "case " << c;
    held += r.holds;
  }
  EXPECT_EQ(held, 20);
}

TEST(Dyadic, Preconditions) {
  auto f = [](double s) { return 1.0 / s; };
  // 1/q - 1/q1 < 0
  EXPECT_THROW(dyadic_norm_bound({{f, 2.0}}, 4.0, 0.0, 0.5, 1.0, 100.0), DomainError);
  // n lambda + rho <= mu
  EXPECT_THROW(dyadic_norm_bound({{f, 8.0}}, 2.0, 0.0, 0.1, 1.0, 100.0), DomainError);
  EXPECT_THROW(dyadic_norm_bound({}, 2.0, 0.0, 0.5, 1.0, 100.0), DomainError);
}

// ---- Strichartz ----

TEST(Strichartz, Admissibility) {
  EXPECT_TRUE(strichartz_admissible(kInfinity, 2.0));
  EXPECT_TRUE(strichartz_admissible(8.0 / 3.0, 4.0));
  EXPECT_TRUE(strichartz_admissible(2.0, 6.0));
  EXPECT_FALSE(strichartz_admissible(2.0, 4.0));
  EXPECT_FALSE(strichartz_admissible(1.0, 12.0));
  Grid g(16, 16.0);
  EXPECT_THROW(strichartz_check(random_packets(g, 1, 1), 2.0, 4.0, 1.0), DomainError);
}

TEST(Strichartz, UnitarityGivesExactlyOne) {
  Grid g(32, 32.0);
  auto r = strichartz_check(random_packets(g, 3, 5), kInfinity, 2.0, 2.0, 2.0, 16);
  EXPECT_NEAR(r.ratio, 1.0, 1e-12);
  EXPECT_NEAR(r.ratio_enlarged, 1.0, 1e-12);
}

TEST(Strichartz, EightThirdsFourIsStableUnderDoubling) {
  Grid g(32, 48.0);
  auto r = strichartz_check(random_packets(g, 2, 3), 8.0 / 3.0, 4.0, 3.0, 2.0, 24);
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_LE(r.growth, 1.2);
}

TEST(Strichartz, PacketsAreSeededAndNormalized) {
  Grid g(16, 16.0);
  auto a = random_packets(g, 2, 9), b = random_packets(g, 2, 9), c = random_packets(g, 2, 10);
  EXPECT_NEAR(lebesgue_norm(a[0], 2.0), 1.0, 1e-12);
  EXPECT_EQ(a[1][123], b[1][123]);
  EXPECT_NE(a[1][123], c[1][123]);
}

TEST(WaveStrichartz, ZeroSourceGivesZero) {
  Grid g(16, 16.0);
  auto r = wave_strichartz_check(g, [&](double) { return RealField(g); }, 1.0, 2.0, 10);
  EXPECT_EQ(r.ratio_l4, 0.0);
  EXPECT_EQ(r.ratio_energy, 0.0);
}

TEST(WaveStrichartz, GaussianPulse) {
  Grid g(32, 32.0);
  auto src = [&](double t) {
    return sample<double>(g, [&](double x, double y, double z) {
      return std::exp(-(t - 1.5) * (t - 1.5)) * std::exp(-(x * x + y * y + z * z) / 2.0);
    });
  };
  // the window has to hold the whole pulse, otherwise doubling adds source rather than tail
  auto r = wave_strichartz_check(g, src, 5.0, 2.0, 50);
  EXPECT_GT(r.ratio_energy, 0.1);
  EXPECT_LE(r.ratio_energy, 1.05);
  EXPECT_LE(r.ratio_energy_enlarged, 1.05);
  EXPECT_GT(r.ratio_l4, 0.0);
  EXPECT_LE(r.ratio_l4_enlarged, 1.2 * r.ratio_l4);
}

TEST(WaveStrichartz, DuhamelMatchesFreePropagationOfImpulse) {
  // a source concentrated in one step acts like initial velocity: compare with the free wave
  Grid g(16, 16.0);
  const double dt = 0.05;
  RealField bump = sample<double>(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  auto src = [&](double t) {
    RealField f = bump;
    const double s = t < dt ? 1.0 / dt : 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= s;
    return f;
  };
  auto r = wave_strichartz_check(g, src, 1.0, 1.0, 20);
  WaveState w;
  w.a = RealField(g);
  w.a_dot = bump;
  WaveState e = wave_propagate(w, 1.0);
  const double expected = std::max(std::sqrt(gradient_norm_sq(e.a)), lebesgue_norm(e.a_dot, 2.0));
  const double expected0 = lebesgue_norm(bump, 2.0);
  EXPECT_NEAR(r.lhs_energy, std::max(expected, expected0), 0.05 * expected0);
}

// ---- free wave decay ----

TEST(FreeWaveDecay, Endpoints) {
  RadialFreeWave fw(GaussPoly({3.0}, 0.5 / 1.44), GaussPoly(), {0, 0, 0});
  auto t = log_times(8, 64, 8);
  EXPECT_NEAR(free_wave_decay_check(fw, kInfinity, 0, t).exponent, -1.0, 0.15);
  EXPECT_NEAR(free_wave_decay_check(fw, 2.0, 0, t).exponent, 0.0, 0.05);
  EXPECT_NEAR(free_wave_decay_check(fw, 4.0, 0, t).exponent, -0.5, 0.15);
  EXPECT_LE(free_wave_decay_check(fw, 4.0, 1, t).exponent, -0.5 + 0.15);
  EXPECT_THROW(free_wave_norms(fw, 2.0, 2, t), DomainError);
}

TEST(FreeWaveDecay, NormMatchesGrid) {
  // radial closed-form L^4 norm against the spectral grid field
  RadialFreeWave fw(GaussPoly({1.0}, 0.5), GaussPoly({0.5}, 0.5), {0, 0, 0});
  Grid g(64, 32.0);
  auto s = free_wave_norms(fw, 4.0, 0, {3.0});
  WaveState w = fw.sample(g, 3.0);
  EXPECT_NEAR(s.values[0], lebesgue_norm(w.a, 4.0), 1e-6 * s.values[0]);
  auto sup = free_wave_norms(fw, kInfinity, 0, {3.0});
  EXPECT_NEAR(sup.values[0], lebesgue_norm(w.a, kInfinity), 2e-3 * sup.values[0]);
}

// ---- verdicts ----

TEST(Verdicts, StatusAndJson) {
  auto a = verdict_le("x", 1.0, 2.0), b = verdict_in("y", 3.0, 0.0, 1.0), c = verdict_skip("z", "missing");
  auto d = verdict_ge("nan", std::nan(""), 0.0);
  EXPECT_EQ(a.status, "pass");
  EXPECT_EQ(b.status, "fail");
  EXPECT_EQ(c.status, "skip");
  EXPECT_EQ(d.status, "fail");
  const std::string js = verdicts_json({a, b, c});
  EXPECT_NE(js.find("\"status\": \"skip\""), std::string::npos);
  EXPECT_NE(js.find("\"threshold\": [\n"), std::string::npos);
}
