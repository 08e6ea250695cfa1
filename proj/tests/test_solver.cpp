#include <gtest/gtest.h>

#include <cmath>

#include "wsscatter/solver.hpp"

using namespace wss;

namespace {

ProfileBundle bundle(const Grid& phys, double alpha = 0.12, double amp = 3.0) {
  Grid prof(32, 20.0);
  auto rp = RadialProfile::hermite_gaussian(alpha, 0.6);
  RadialFreeWave fw(GaussPoly({amp}, 0.5 / 1.44), GaussPoly(), {0, 0, 0});
  return build_bundle(make_state(prof, phys, rp, fw), 64.0, 256, true, 300.0);
}

const Grid& small_phys() {
  static const Grid g(32, 40.0);
  return g;
}

SystemState gaussian_state(const Grid& g, double eps, double wave_amp) {
  SystemState s;
  s.time = 3.0;
  s.u = sample<cplx>(g, [&](double x, double y, double z) {
    double r2 = x * x + y * y + z * z;
    return eps * std::exp(-r2 / 4.0) * std::polar(1.0, 0.3 * x);
  });
  s.wave.a = sample<double>(g, [&](double x, double y, double z) {
    return wave_amp * std::exp(-((x - 1) * (x - 1) + y * y + z * z) / 3.0);
  });
  s.wave.a_dot = sample<double>(g, [&](double x, double y, double z) {
    return 0.5 * wave_amp * z * std::exp(-(x * x + y * y + z * z) / 3.0);
  });
  s.wave.time = s.time;
  return s;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

// ---- radial basis ----

TEST(Radial, SineTransformRoundTripAndParseval) {
  RadialGrid g(256, 30.0);
  std::vector<double> f(g.n());
  for (int j = 0; j < g.n(); ++j) f[j] = g.r(j) * std::exp(-g.r(j) * g.r(j) / 8.0);
  auto c = sine_analysis(g, f);
  auto back = sine_synthesis(g, c);
  double e = 0, lhs = 0, rhs = 0;
  for (int j = 0; j < g.n(); ++j) {
    e = std::max(e, std::abs(back[j] - f[j]));
    lhs += g.weight(j) * f[j] * f[j];
    rhs += 0.5 * g.radius() * c[j] * c[j];
  }
  EXPECT_LT(e, 1e-13);
  EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
}

TEST(Radial, ModesAreQuarterPeriodShifted) {
  RadialGrid g(64, 8.0);
  EXPECT_DOUBLE_EQ(g.k(0), 0.5 * M_PI / 8.0);
  // a single mode synthesizes sin(k r) exactly
  std::vector<double> c(g.n(), 0.0);
  c[5] = 1.0;
  auto f = sine_synthesis(g, c);
  for (int j = 0; j < g.n(); ++j) EXPECT_NEAR(f[j], std::sin(g.k(5) * g.r(j)), 1e-13);
  EXPECT_THROW(RadialGrid(4, 1.0), DomainError);
  EXPECT_THROW(sine_analysis(g, std::vector<double>(3)), ShapeError);
}

TEST(Radial, WaveDerivativeMatchesClosedForm) {
  // r A = sin(k r) gives A_r = (k r cos(k r) - sin(k r)) / r^2
  RadialGrid g(128, 10.0);
  RadialState s;
  s.grid = g;
  s.psi.assign(g.n(), 0.0);
  s.phi_hat.assign(g.n(), 0.0);
  s.phid_hat.assign(g.n(), 0.0);
  s.phi_hat[3] = 1.0;
  auto w = radial_wave(s);
  const double k = g.k(3);
  for (int j = 0; j < g.n() - 1; ++j) {
    const double r = g.r(j);
    EXPECT_NEAR(w.a_r[j], (k * r * std::cos(k * r) - std::sin(k * r)) / (r * r), 1e-12);
  }
}

TEST(Radial, ZeroDataGivesZeroTrajectory) {
  auto b = bundle(small_phys(), 0.0, 0.0);
  ExperimentOptions opt;
  opt.per_octave = 2;
  opt.radial_n = 1024;
  opt.radial_R = 256;
  auto rec = scattering_experiment(b, 4.0, 8.0, opt);
  for (std::size_t i = 0; i < rec.sample_times.size(); ++i) {
    EXPECT_EQ(rec.l2[i], 0.0);
    EXPECT_EQ(rec.energy[i], 0.0);
    EXPECT_EQ(rec.v_l2[i] + rec.b_l4[i] + rec.grad_b_l2[i] + rec.dt_b_l2[i], 0.0);
  }
}

TEST(Radial, WithoutSchrodingerPartTheFieldIsTheFreeWave) {
  // w_+ = 0: u stays 0, A must follow the closed-form free wave, so B = 0 up to discretization
  auto b = bundle(small_phys(), 0.0);
  ExperimentOptions opt;
  opt.per_octave = 2;
  auto rec = scattering_experiment(b, 4.0, 16.0, opt);
  EXPECT_EQ(rec.geometry, "radial");
  for (std::size_t i = 0; i < rec.sample_times.size(); ++i) {
    EXPECT_EQ(rec.v_l2[i], 0.0);
    EXPECT_LT(rec.b_l4[i], 1e-10);
    EXPECT_LT(rec.dt_b_l2[i], 1e-10);
    EXPECT_LT(rec.grad_b_l2[i], 1e-7);
  }
}

TEST(Radial, StepIsReversibleAndConservative) {
  auto b = bundle(small_phys());
  RadialGrid g(2048, 512.0);
  auto s = radial_initial_state(b, 16.0, g);
  auto c0 = radial_conserved(s);
  RadialState f = s;
  for (int i = 0; i < 40; ++i) f = radial_step(f, -0.05);
  auto c1 = radial_conserved(f);
  EXPECT_NEAR(f.time, 14.0, 1e-12);
  EXPECT_NEAR(c1.l2, c0.l2, 1e-12 * c0.l2);
  EXPECT_NEAR(c1.energy, c0.energy, 1e-7 * c0.energy);
  for (int i = 0; i < 40; ++i) f = radial_step(f, 0.05);
  EXPECT_LT(max_diff(f.psi, s.psi), 1e-13);
}

TEST(Radial, NonFiniteStateIsReported) {
  RadialGrid g(64, 8.0);
  RadialState s;
  s.grid = g;
  s.psi.assign(g.n(), 0.0);
  s.psi[7] = std::nan("");
  s.phi_hat.assign(g.n(), 0.0);
  s.phid_hat.assign(g.n(), 0.0);
  EXPECT_THROW(radial_step(s, 0.1), NumericalError);
  EXPECT_THROW(radial_step(s, std::nan("")), DomainError);
}

TEST(Radial, SecondOrderInTime) {
  auto b = bundle(small_phys());
  auto o = radial_order_test(b, 16.0, 0.4, 0.1);
  EXPECT_NEAR(o.ratio_1, 4.0, 1.0);
  EXPECT_NEAR(o.ratio_2, 4.0, 1.0);
}

// ---- experiment driver ----

TEST(Experiment, SamplesAreExactAndIncreasing) {
  auto b = bundle(small_phys());
  ExperimentOptions opt;
  opt.per_octave = 3;
  auto rec = scattering_experiment(b, 4.0, 16.0, opt);
  ASSERT_EQ(rec.sample_times.size(), 7u);
  for (std::size_t j = 0; j < rec.sample_times.size(); ++j)
    EXPECT_NEAR(rec.sample_times[j], 4.0 * std::pow(2.0, j / 3.0), 1e-9);
  // the perturbation starts at 0 at t0
  EXPECT_LT(rec.v_l2.back(), 1e-15);
  EXPECT_GT(rec.v_l2.front(), 0.0);
  for (std::size_t j = 1; j < rec.l2.size(); ++j) EXPECT_NEAR(rec.l2[j], rec.l2[0], 1e-10 * rec.l2[0]);
}

TEST(Experiment, RejectsBadInput) {
  auto b = bundle(small_phys());
  EXPECT_THROW(scattering_experiment(b, 4.0, 4.0), DomainError);
  EXPECT_THROW(scattering_experiment(b, 0.5, 8.0), DomainError);
  ExperimentOptions opt;
  opt.radial_R = 4096;  // needs the table to reach R / T = 1024
  EXPECT_THROW(scattering_experiment(b, 4.0, 8.0, opt), DomainError);
  DtSchedule bad{0.0, 0.05};
  EXPECT_THROW(bad.dt(5.0), DomainError);
  DtSchedule sch;
  EXPECT_DOUBLE_EQ(sch.dt(2.0), 0.01);
  EXPECT_DOUBLE_EQ(sch.dt(100.0), 0.05);
}

TEST(Experiment, T0StudyConverges) {
  auto b = bundle(small_phys());
  ExperimentOptions opt;
  opt.per_octave = 4;
  auto st = t0_convergence_study(b, 4.0, {8.0, 16.0, 32.0}, opt);
  ASSERT_EQ(st.pairs.size(), 2u);
  EXPECT_TRUE(st.monotone);
  EXPECT_LT(st.fit.exponent, -0.3);
  EXPECT_GT(st.pairs[0].b_l4l4, 0.0);
  EXPECT_THROW(t0_convergence_study(b, 4.0, {16.0, 8.0}, opt), DomainError);
  TrajectoryRecord plain;
  EXPECT_THROW(compare_runs(plain, st.runs[0]), DomainError);
}

TEST(Experiment, SeminormsTakeTheWeightedSup) {
  TrajectoryRecord r;
  r.sample_times = {4.0, 16.0};
  r.v_l2 = {0.5, 0.5};
  r.v_l4 = {1.0, 0.0};
  r.b_l4 = r.grad_b_l2 = r.dt_b_l2 = {0.0, 0.0};
  auto s = h_seminorms(r);
  EXPECT_DOUBLE_EQ(s.v_l2, 2.0);
  EXPECT_DOUBLE_EQ(s.v_l4, 2.0);
}

TEST(Experiment, L2BalanceOfLinearProblem) {
  auto b = bundle(small_phys());
  ExperimentOptions opt;
  opt.radial_n = 4096;
  opt.radial_R = 512;
  auto bal = l2_balance(b, 4.0, 16.0, opt);
  EXPECT_GT(bal.change, 0.0);
  EXPECT_NEAR(bal.flux, bal.change, 1e-3 * bal.change);
}

// ---- 3D periodic ----

TEST(Grid3D, WithoutSchrodingerPartIsFreeWave) {
  Grid g(32, 20.0);
  SystemState s = gaussian_state(g, 0.0, 1.0);
  SystemState out = step(s, 0.3);
  WaveState ref = wave_propagate(s.wave, 0.3);
  double e = 0;
  for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(out.wave.a[i] - ref.a[i]));
  EXPECT_LT(e, 1e-13);
  EXPECT_EQ(lebesgue_norm(out.u, 2.0), 0.0);
}

TEST(Grid3D, WeakCouplingIsFreeSchrodinger) {
  // the field generated by |u|^2 is O(eps^2): the phase it imprints is invisible at 1e-9
  Grid g(32, 20.0);
  SystemState s = gaussian_state(g, 1e-5, 0.0);
  SystemState out = step(step(s, 0.2), 0.2);
  ComplexField ref = free_schrodinger(s.u, 0.4);
  ComplexField d = out.u;
  d -= ref;
  EXPECT_LT(lebesgue_norm(d, 2.0), 1e-9 * lebesgue_norm(ref, 2.0));
}

TEST(Grid3D, ReversibleAndConservative) {
  Grid g(32, 20.0);
  SystemState s = gaussian_state(g, 1.0, 1.0);
  auto c0 = conserved_quantities(s);
  SystemState f = s;
  for (int i = 0; i < 20; ++i) f = step(f, -0.05);
  auto c1 = conserved_quantities(f);
  EXPECT_NEAR(c1.l2, c0.l2, 1e-12 * c0.l2);
  EXPECT_NEAR(c1.energy, c0.energy, 1e-4 * std::abs(c0.energy));
  for (int i = 0; i < 20; ++i) f = step(f, 0.05);
  ComplexField d = f.u;
  d -= s.u;
  EXPECT_LT(lebesgue_norm(d, 2.0), 1e-12);
  // energy error of the splitting is O(dt^2), not a drift
  SystemState h = s;
  for (int i = 0; i < 40; ++i) h = step(h, -0.025);
  const double ratio = (c1.energy - c0.energy) / (conserved_quantities(h).energy - c0.energy);
  EXPECT_NEAR(ratio, 4.0, 0.4);
}

TEST(Grid3D, SecondOrderInTime) {
  Grid g(32, 20.0);
  auto o = grid_order_test(gaussian_state(g, 1.0, 1.0), 0.4, 0.1);
  EXPECT_NEAR(o.ratio_1, 4.0, 1.0);
  EXPECT_NEAR(o.ratio_2, 4.0, 1.0);
}

TEST(Grid3D, AgreesWithRadialSolver) {
  // short window where the 3D box still holds u: the Schrodinger side must agree.
  // B is not compared: A_1 decays like 1/|x| and is not periodic.
  Grid phys(64, 48.0);
  auto b = bundle(phys);
  ExperimentOptions opt;
  opt.per_octave = 8;
  opt.geometry = Geometry::Grid;
  auto g = scattering_experiment(b, 7.0, 8.0, opt);
  opt.geometry = Geometry::Radial;
  auto r = scattering_experiment(b, 7.0, 8.0, opt);
  ASSERT_EQ(g.sample_times.size(), r.sample_times.size());
  EXPECT_EQ(g.geometry, "grid");
  for (std::size_t i = 0; i + 1 < g.sample_times.size(); ++i) {
    EXPECT_NEAR(g.v_l2[i], r.v_l2[i], 1e-3 * r.v_l2[i]);
    EXPECT_NEAR(g.l2[i], r.l2[i], 1e-6 * r.l2[i]);
    EXPECT_NEAR(g.energy[i], r.energy[i], 1e-5 * r.energy[i]);
  }
}
