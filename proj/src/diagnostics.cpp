#include "wsscatter/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "quad.hpp"
#include "wave_flow.hpp"
#include "wsscatter/spectral.hpp"

namespace wss {

void DecaySeries::check() const {
  if (times.size() != values.size()) throw ShapeError("series '" + label + "': times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 1.0)) throw DomainError("series '" + label + "': times must be >= 1");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("series '" + label + "': times must increase");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw DomainError("series '" + label + "': values must be finite and nonnegative");
  }
}

DecayFit fit_decay(const DecaySeries& s, double t_lo, double t_hi) {
  s.check();
  DecayFit f;
  f.t_lo = t_lo;
  f.t_hi = t_hi;
  std::vector<double> x, y;
  int floored = 0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] < t_lo || s.times[i] > t_hi) continue;
    double v = s.values[i];
    if (v < kFitFloor) {
      v = kFitFloor;
      ++floored;
    }
    x.push_back(std::log(s.times[i]));
    y.push_back(std::log(v));
  }
  f.points = int(x.size());
  if (x.size() < 2) throw DomainError("fit_decay: fewer than two samples in window for '" + s.label + "'");
  if (floored) f.warning = std::to_string(floored) + " zero value(s) floored at 1e-30 in '" + s.label + "'";
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  // flat data: perfect fit by convention
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

DecayFit fit_decay(const DecaySeries& s) {
  if (s.times.empty()) throw DomainError("fit_decay: empty series '" + s.label + "'");
  return fit_decay(s, s.times.front(), s.times.back());
}

DecayFit fit_decay_after(const DecaySeries& s, double t_min) {
  if (s.times.empty()) throw DomainError("fit_decay: empty series '" + s.label + "'");
  return fit_decay(s, t_min, s.times.back());
}

// ---------------- space-time norms ----------------

namespace {

constexpr double kPi = std::numbers::pi;

double inv(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

void check_exponent(double q, const char* what) {
  if (!(q >= 1.0)) throw DomainError(std::string(what) + ": exponent must be in [1, infinity]");
}

}  // namespace

double spacetime_norm(const std::vector<double>& times, const std::vector<double>& norms, double q,
                      double t_lo, double t_hi) {
  check_exponent(q, "spacetime_norm");
  if (times.size() != norms.size()) throw ShapeError("spacetime_norm: times and norms differ in length");
  if (times.empty()) throw DomainError("spacetime_norm: no samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("spacetime_norm: times must increase");
  const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (!(t_lo <= t_hi) || t_lo < times.front() - slack || t_hi > times.back() + slack)
    throw DomainError("spacetime_norm: window outside the sampled range");
  t_lo = std::max(t_lo, times.front());
  t_hi = std::min(t_hi, times.back());
  auto at = [&](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return norms.back();
    if (it == times.begin()) return norms.front();
    const std::size_t i = it - times.begin();
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * norms[i - 1] + w * norms[i];
  };
  std::vector<double> s{t_lo}, n{at(t_lo)};
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] > t_lo && times[i] < t_hi) {
      s.push_back(times[i]);
      n.push_back(norms[i]);
    }
  if (t_hi > t_lo) {
    s.push_back(t_hi);
    n.push_back(at(t_hi));
  }
  if (std::isinf(q)) return *std::max_element(n.begin(), n.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    acc += 0.5 * (std::pow(n[i], q) + std::pow(n[i + 1], q)) * (s[i + 1] - s[i]);
  return std::pow(acc, 1.0 / q);
}

double spacetime_norm(const DecaySeries& norms, double q, double t_lo, double t_hi) {
  norms.check();
  return spacetime_norm(norms.times, norms.values, q, t_lo, t_hi);
}

double spacetime_norm(const std::vector<double>& times, const std::vector<ComplexField>& fields, double q,
                      double r, double t_lo, double t_hi) {
  check_exponent(r, "spacetime_norm");
  if (times.size() != fields.size()) throw ShapeError("spacetime_norm: times and fields differ in length");
  std::vector<double> n;
  n.reserve(fields.size());
  for (const auto& f : fields) n.push_back(lebesgue_norm(f, r));
  return spacetime_norm(times, n, q, t_lo, t_hi);
}

// ---------------- dyadic estimate ----------------

double dyadic_constant(double q, int n, double lambda, double rho, double mu) {
  check_exponent(q, "dyadic_constant");
  const double e = n * lambda + rho - mu;
  if (!(e > 0.0)) throw DomainError("dyadic_constant: need n lambda + rho > mu");
  if (std::isinf(q)) return 1.0;
  return std::pow(1.0 - std::pow(2.0, -q * e), -1.0 / q);
}

namespace {

// discrete L^p on nodes [i0, i1] with trapezoid weights of the intervals inside
double node_norm(const std::vector<double>& s, const std::vector<double>& g, double p, std::size_t i0,
                 std::size_t i1) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) m = std::max(m, std::abs(g[i]));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = i0; i < i1; ++i)
    acc += 0.5 * (std::pow(std::abs(g[i]), p) + std::pow(std::abs(g[i + 1]), p)) * (s[i + 1] - s[i]);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

DyadicResult dyadic_norm_bound(const std::vector<DyadicFactor>& factors, double q, double rho, double lambda,
                               double t, double t_max, int per_octave) {
  check_exponent(q, "dyadic_norm_bound");
  if (factors.empty()) throw DomainError("dyadic_norm_bound: need at least one factor");
  if (!(t >= 1.0) || !(t_max > t)) throw DomainError("dyadic_norm_bound: need 1 <= t < t_max");
  if (!(rho >= 0.0)) throw DomainError("dyadic_norm_bound: rho must be >= 0");
  if (per_octave < 1) throw DomainError("dyadic_norm_bound: per_octave must be >= 1");
  DyadicResult res;
  double mu = inv(q);
  for (const auto& f : factors) {
    check_exponent(f.q, "dyadic_norm_bound");
    mu -= inv(f.q);
  }
  if (mu < -1e-14) throw DomainError("dyadic_norm_bound: mu = 1/q - sum 1/q_k must be >= 0");
  mu = std::max(mu, 0.0);
  res.mu = mu;
  const int n = int(factors.size());
  res.constant = dyadic_constant(q, n, lambda, rho, mu);

  // nodes t 2^{i / per_octave}, the last one clipped to t_max
  std::vector<double> s;
  for (int i = 0;; ++i) {
    const double x = t * std::pow(2.0, double(i) / per_octave);
    if (x >= t_max * (1.0 - 1e-14)) break;
    s.push_back(x);
  }
  s.push_back(t_max);
  const std::size_t N = s.size();
  std::vector<std::vector<double>> fv(n, std::vector<double>(N));
  std::vector<double> prod(N), weight(N);
  for (std::size_t i = 0; i < N; ++i) {
    double p = std::pow(s[i], -rho);
    weight[i] = p;
    for (int k = 0; k < n; ++k) {
      fv[k][i] = factors[k].f(s[i]);
      p *= fv[k][i];
    }
    prod[i] = p;
  }
  res.direct = node_norm(s, prod, q, 0, N - 1);

  // N_k: sup over t' of the tail norm in units of h(t') = t'^{-lambda}
  res.n_k.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const double qk = factors[k].q;
    double acc = 0.0;
    for (std::size_t m = N - 1; m-- > 0;) {
      const double a = std::abs(fv[k][m]), b = std::abs(fv[k][m + 1]);
      acc = std::isinf(qk) ? std::max({acc, a, b})
                           : acc + 0.5 * (std::pow(a, qk) + std::pow(b, qk)) * (s[m + 1] - s[m]);
      const double tail = std::isinf(qk) ? acc : std::pow(acc, 1.0 / qk);
      res.n_k[k] = std::max(res.n_k[k], tail * std::pow(s[m], lambda));
    }
  }

  // block sum
  const double pw = mu > 0.0 ? 1.0 / mu : kInfinity;
  double bsum = 0.0;
  for (std::size_t i0 = 0; i0 + 1 < N; i0 += per_octave) {
    const std::size_t i1 = std::min(i0 + per_octave, N - 1);
    double term = node_norm(s, weight, pw, i0, i1);
    for (int k = 0; k < n; ++k) term *= node_norm(s, fv[k], factors[k].q, i0, i1);
    bsum = std::isinf(q) ? std::max(bsum, term) : bsum + std::pow(term, q);
  }
  res.blocks = std::isinf(q) ? bsum : std::pow(bsum, 1.0 / q);

  double np = 1.0;
  for (double v : res.n_k) np *= v;
  res.estimate = res.constant * np * std::pow(t, -n * lambda) * std::pow(t, mu - rho);
  const double tol = 1e-12;
  res.holds = res.direct <= res.blocks * (1 + tol) && res.blocks <= res.estimate * (1 + tol);
  return res;
}

// ---------------- Strichartz ----------------

std::vector<ComplexField> random_packets(const Grid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double L = g.box_length();
  std::uniform_real_distribution<double> centre(-L / 16, L / 16), width(1.0, 2.0), mom(-1.0, 1.0);
  std::vector<ComplexField> out;
  for (int c = 0; c < count; ++c) {
    const double cx = centre(rng), cy = centre(rng), cz = centre(rng), w = width(rng);
    const double kx = mom(rng), ky = mom(rng), kz = mom(rng);
    auto f = sample<cplx>(g, [&](double x, double y, double z) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz);
      return std::exp(-r2 / (2 * w * w)) * std::polar(1.0, kx * x + ky * y + kz * z);
    });
    const double nrm = lebesgue_norm(f, 2.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= nrm;
    out.push_back(std::move(f));
  }
  return out;
}

bool strichartz_admissible(double q, double r) {
  if (!(q >= 1.0) || !(r >= 1.0)) return false;
  const double lhs = 2.0 * inv(q), rhs = 1.5 - 3.0 * inv(r);
  return std::abs(lhs - rhs) < 1e-12 && lhs >= 0.0 && lhs <= 1.0 + 1e-12;
}

StrichartzResult strichartz_check(const std::vector<ComplexField>& u0, double q, double r, double window,
                                  double factor, int samples) {
  if (!strichartz_admissible(q, r)) throw DomainError("strichartz_check: (q, r) is not admissible");
  if (!(window > 0.0) || !(factor >= 1.0) || samples < 2) throw DomainError("strichartz_check: bad window");
  if (u0.empty()) throw DomainError("strichartz_check: empty batch");
  const int M = int(std::lround(samples * factor));
  const double dt = window / samples;
  std::vector<double> times(M + 1);
  for (int i = 0; i <= M; ++i) times[i] = i * dt;
  StrichartzResult res;
  for (const auto& u : u0) {
    const double n0 = lebesgue_norm(u, 2.0);
    if (!(n0 > 0.0)) throw DomainError("strichartz_check: zero initial datum");
    std::vector<double> nr(M + 1);
    for (int i = 0; i <= M; ++i) nr[i] = lebesgue_norm(i == 0 ? u : free_schrodinger(u, times[i]), r);
    res.ratio = std::max(res.ratio, spacetime_norm(times, nr, q, 0.0, window) / n0);
    res.ratio_enlarged = std::max(res.ratio_enlarged, spacetime_norm(times, nr, q, 0.0, times.back()) / n0);
  }
  res.growth = res.ratio_enlarged / res.ratio;
  return res;
}

WaveStrichartzResult wave_strichartz_check(const Grid& g, const std::function<RealField(double)>& source,
                                           double window, double factor, int steps) {
  if (!(window > 0.0) || !(factor >= 1.0) || steps < 2) throw DomainError("wave_strichartz_check: bad window");
  const int n = g.n(), nh = n / 2 + 1;
  const std::size_t hs = std::size_t(n) * n * nh;
  const int M = int(std::lround(steps * factor));
  const double dt = window / steps;
  avector<cplx> B(hs, 0.0), V(hs, 0.0), S(hs);
  RealField b(g), v(g);
  std::vector<double> times(M + 1), b4(M + 1), en(M + 1), f43(M + 1), f2(M + 1);
  auto record = [&](int i) {
    times[i] = i * dt;
    const RealField F = source(times[i]);
    f43[i] = lebesgue_norm(F, 4.0 / 3.0);
    f2[i] = lebesgue_norm(F, 2.0);
    b4[i] = lebesgue_norm(b, 4.0);
    en[i] = std::max(std::sqrt(gradient_norm_sq(b)), lebesgue_norm(v, 2.0));
  };
  record(0);
  const double scale = 1.0 / double(g.size());
  for (int i = 0; i < M; ++i) {
    RealField F = source((i + 0.5) * dt);
    fft_r2c(g, F.data(), S.data());
    for (int a = 0; a < n; ++a) {
      const double kx = g.wavenumber(a);
      for (int c = 0; c < n; ++c) {
        const double ky = g.wavenumber(c);
        for (int d = 0; d < nh; ++d) {
          const double kz = g.wavenumber(d);
          const double om = std::sqrt(kx * kx + ky * ky + kz * kz);
          const auto w = detail::wave_coeffs(om, dt);
          const std::size_t idx = (std::size_t(a) * n + c) * nh + d;
          const cplx x = B[idx], xd = V[idx], f = S[idx];
          B[idx] = w.c * x + w.sn * xd + w.oc * f;
          V[idx] = -om * om * w.sn * x + w.c * xd + w.sn * f;
        }
      }
    }
    // c2r destroys its input: transform copies
    avector<cplx> tb(B.begin(), B.end()), tv(V.begin(), V.end());
    fft_c2r(g, tb.data(), b.data());
    fft_c2r(g, tv.data(), v.data());
    for (std::size_t j = 0; j < b.size(); ++j) {
      b[j] *= scale;
      v[j] *= scale;
    }
    record(i + 1);
  }
  WaveStrichartzResult res;
  auto ratio = [](double l, double r) { return r > 0.0 ? l / r : 0.0; };
  auto eval = [&](double T, double& l4, double& r43, double& le, double& r12) {
    l4 = spacetime_norm(times, b4, 4.0, 0.0, T);
    r43 = spacetime_norm(times, f43, 4.0 / 3.0, 0.0, T);
    le = spacetime_norm(times, en, kInfinity, 0.0, T);
    r12 = spacetime_norm(times, f2, 1.0, 0.0, T);
  };
  eval(window, res.lhs_l4, res.rhs_l43, res.lhs_energy, res.rhs_l1l2);
  res.ratio_l4 = ratio(res.lhs_l4, res.rhs_l43);
  res.ratio_energy = ratio(res.lhs_energy, res.rhs_l1l2);
  double a, b2, c, d;
  eval(times.back(), a, b2, c, d);
  res.ratio_l4_enlarged = ratio(a, b2);
  res.ratio_energy_enlarged = ratio(c, d);
  return res;
}

// ---------------- free-wave decay ----------------

DecaySeries free_wave_norms(const RadialFreeWave& fw, double r, int k, const std::vector<double>& times) {
  check_exponent(r, "free_wave_norms");
  if (k != 0 && k != 1) throw DomainError("free_wave_norms: k must be 0 or 1");
  DecaySeries out{times, {}, "A0_W" + std::to_string(k) + "_" + (std::isinf(r) ? std::string("inf") : std::to_string(r))};
  const double sc = fw.scale(), reach = 16.0 * sc;
  for (double t : times) {
    const double hi = t + reach, mid = std::max(0.0, t - reach);
    double total = 0.0;
    for (int d = 0; d <= k; ++d) {
      auto val = [&](double rho) {
        const auto v = fw.eval(rho, t);
        return std::abs(d == 0 ? v.a : v.a_r);
      };
      if (std::isinf(r)) {
        // dense scan, then golden-section refinement around the best node
        const double h = sc / 64.0;
        double best = 0.0, arg = 0.0;
        for (double rho = 0.0; rho <= hi; rho += h) {
          const double x = val(rho);
          if (x > best) best = x, arg = rho;
        }
        double lo = std::max(0.0, arg - h), up = arg + h;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 60; ++it) {
          const double x1 = up - gr * (up - lo), x2 = lo + gr * (up - lo);
          if (val(x1) > val(x2)) up = x2; else lo = x1;
        }
        total += std::max(best, val(0.5 * (lo + up)));
      } else {
        auto integrand = [&](double rho) { return rho * rho * std::pow(val(rho), r); };
        double acc = 0.0;
        if (mid > 0.0) acc += detail::integrate(0.0, mid, std::max(4, int(mid / sc)), integrand);
        acc += detail::integrate(mid, hi, int(std::ceil((hi - mid) / sc)) * 2, integrand);
        total += std::pow(4.0 * kPi * acc, 1.0 / r);
      }
    }
    out.values.push_back(total);
  }
  return out;
}

DecayFit free_wave_decay_check(const RadialFreeWave& fw, double r, int k, const std::vector<double>& times) {
  return fit_decay(free_wave_norms(fw, r, k, times));
}

// ---------------- verdicts ----------------

namespace {

Verdict make(const std::string& name, double value, const char* cmp, double lo, double hi, bool ok,
             std::string note) {
  Verdict v;
  v.name = name;
  v.value = value;
  v.comparison = cmp;
  v.lo = lo;
  v.hi = hi;
  v.status = ok ? "pass" : "fail";
  v.note = std::move(note);
  return v;
}

}  // namespace

// NaN never passes
Verdict verdict_le(const std::string& name, double value, double bound, std::string note) {
  return make(name, value, "<=", bound, bound, value <= bound, std::move(note));
}
Verdict verdict_ge(const std::string& name, double value, double bound, std::string note) {
  return make(name, value, ">=", bound, bound, value >= bound, std::move(note));
}
Verdict verdict_in(const std::string& name, double value, double lo, double hi, std::string note) {
  return make(name, value, "in", lo, hi, value >= lo && value <= hi, std::move(note));
}
Verdict verdict_skip(const std::string& name, std::string note) {
  Verdict v;
  v.name = name;
  v.value = std::nan("");
  v.status = "skip";
  v.note = std::move(note);
  return v;
}

std::string verdicts_json(const std::vector<Verdict>& vs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : vs) {
    nlohmann::json j;
    j["name"] = v.name;
    j["value"] = std::isfinite(v.value) ? nlohmann::json(v.value) : nlohmann::json(nullptr);
    j["comparison"] = v.comparison;
    if (v.comparison == "in") j["threshold"] = {v.lo, v.hi};
    else if (!v.comparison.empty()) j["threshold"] = v.lo;
    else j["threshold"] = nullptr;
    j["status"] = v.status;
    j["pass"] = v.status == "pass";
    if (!v.note.empty()) j["note"] = v.note;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace wss
