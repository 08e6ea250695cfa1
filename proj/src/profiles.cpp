#include "wsscatter/profiles.hpp"

#include "quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wss {

using detail::gauss_legendre;
using detail::integrate;

// ---------------- radial profile ----------------

RadialProfile RadialProfile::hermite_gaussian(double alpha, double sigma, std::vector<double> coeffs) {
  if (!(sigma > 0.0)) throw DomainError("profile width must be positive");
  std::vector<double> p(2 * coeffs.size(), 0.0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) p[2 * n] = alpha * coeffs[n] / std::pow(sigma, 2.0 * n);
  if (alpha == 0.0) p.clear();
  RadialProfile r;
  r.sigma = sigma;
  r.w = GaussPoly(p, 0.5 / (sigma * sigma));
  r.w1 = r.w.derivative();
  r.w2 = r.w1.derivative();
  r.w3 = r.w2.derivative();
  r.lap = r.w2 + r.w1.divide_z() * 2.0;
  r.lap1 = r.lap.derivative();
  return r;
}

double RadialProfile::sup() const {
  double m = 0.0;
  for (int i = 0; i <= 20000; ++i) m = std::max(m, std::abs(w(i * 1e-3 * sigma)));
  return m;
}

double RadialProfile::support_radius(double threshold) const {
  if (is_zero()) return 0.0;
  double m = sup(), last = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    double r = i * 1e-3 * sigma;
    if (std::abs(w(r)) > threshold * m) last = r;
  }
  return last;
}

double RadialProfile::norm(double p) const {
  if (is_zero()) return 0.0;
  double s = integrate(0.0, 40.0 * sigma, 400, [&](double r) {
    return 4.0 * std::numbers::pi * r * r * std::pow(std::abs(w(r)), p);
  });
  return std::pow(s, 1.0 / p);
}

// ---------------- state ----------------

AsymptoticState make_state(const Grid& profile_grid, const Grid& physical_grid, RadialProfile w,
                           RadialFreeWave free_wave, double support_threshold) {
  AsymptoticState s;
  s.profile_grid = profile_grid;
  s.physical_grid = physical_grid;
  s.w = std::move(w);
  s.free_wave = std::move(free_wave);
  const GaussPoly& wp = s.w.w;
  s.w_plus = sample<cplx>(profile_grid, [&](double x, double y, double z) {
    return cplx(wp(std::sqrt(x * x + y * y + z * z)), 0.0);
  });
  s.a_plus = s.free_wave.sample_data(physical_grid);
  s.a_dot_plus = s.free_wave.sample_data_dot(physical_grid);
  s.c4 = lebesgue_norm(s.w_plus, 4.0);
  s.support_radius = s.w.support_radius(support_threshold);
  return s;
}

// ---------------- nu quadrature ----------------

std::vector<QuadNode> nu_quadrature(double nu_max, int node_count, bool tail) {
  if (!(nu_max >= 4.0)) throw DomainError("nu_quadrature: nu_max must be >= 4");
  if (node_count < 64) throw DomainError("nu_quadrature: node_count must be >= 64");
  const int per = 16;
  const int panels = node_count / per;
  std::vector<double> gx, gw;
  gauss_legendre(per, gx, gw);
  std::vector<QuadNode> out;
  const double smax = std::log(nu_max), d = smax / panels;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < per; ++i) {
      double s = p * d + 0.5 * d * (gx[i] + 1.0);
      double nu = std::exp(s);
      out.push_back({nu, gw[i] * 0.5 * d * nu});
    }
  if (tail) {
    // nu = nu_max / s on s in (0, 1]
    const int tp = 8;
    const double dt = 1.0 / tp;
    for (int p = 0; p < tp; ++p)
      for (int i = 0; i < per; ++i) {
        double s = p * dt + 0.5 * dt * (gx[i] + 1.0);
        out.push_back({nu_max / s, gw[i] * 0.5 * dt * nu_max / (s * s)});
      }
  }
  return out;
}

// ---------------- radial potential ----------------

RadialPotential::RadialPotential(const GaussPoly& g, const std::vector<QuadNode>& nodes, double r_max,
                                 double h) {
  for (double r = 0.0;; r += std::max(h, 0.01 * r)) {
    r_.push_back(r);
    if (r >= r_max) break;
  }
  J_.assign(r_.size(), {});
  K_.assign(r_.size(), {});
  if (g.is_zero()) return;

  // D[m] = (z g)^(m)
  std::array<GaussPoly, 5> D;
  D[0] = g.times_z();
  for (int m = 1; m < 5; ++m) D[m] = D[m - 1].derivative();

  for (std::size_t i = 0; i < r_.size(); ++i) {
    const double r = r_[i];
    std::array<double, 6> J{};
    std::array<double, 4> K{};
    for (const auto& q : nodes) {
      const double nu = q.nu, inv = 1.0 / nu;
      const double a = (r + nu - 1.0) * inv, b = (r - nu + 1.0) * inv;
      double da[5], db[5];
      for (int m = 0; m < 5; ++m) {
        da[m] = D[m](a);
        db[m] = D[m](b);
      }
      double pw = q.weight * inv;  // weight * nu^{-1}
      J[0] += pw * (g.primitive_z(a) - g.primitive_z(b));
      for (int k = 1; k < 6; ++k) {
        pw *= inv;
        J[k] += pw * (da[k - 1] - db[k - 1]);
      }
      pw = q.weight * inv * inv;
      for (int k = 0; k < 4; ++k) {
        K[k] += pw * (da[k] + db[k]);
        pw *= inv;
      }
    }
    J_[i] = J;
    K_[i] = K;
  }
}

namespace {

// quintic Hermite on [0,1] with end values, first and second derivatives (already scaled by d)
inline double quintic(double t, double f0, double d0, double s0, double f1, double d1, double s1) {
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  double h01 = t - 6 * t3 + 8 * t4 - 3 * t5;
  double h02 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  double h10 = 10 * t3 - 15 * t4 + 6 * t5;
  double h11 = -4 * t3 + 7 * t4 - 3 * t5;
  double h12 = 0.5 * t3 - t4 + 0.5 * t5;
  return f0 * h00 + d0 * h01 + s0 * h02 + f1 * h10 + d1 * h11 + s1 * h12;
}

}  // namespace

double RadialPotential::interp_J(double r, int k, std::size_t lo) const {
  double d = r_[lo + 1] - r_[lo], t = (r - r_[lo]) / d;
  const auto& A = J_[lo];
  const auto& B = J_[lo + 1];
  return quintic(t, A[k], d * A[k + 1], d * d * A[k + 2], B[k], d * B[k + 1], d * d * B[k + 2]);
}

double RadialPotential::interp_K(double r, int k, std::size_t lo) const {
  double d = r_[lo + 1] - r_[lo], t = (r - r_[lo]) / d;
  const auto& A = K_[lo];
  const auto& B = K_[lo + 1];
  return quintic(t, A[k], d * A[k + 1], d * d * A[k + 2], B[k], d * B[k + 1], d * d * B[k + 2]);
}

RadialPotential::Values RadialPotential::eval(double r) const {
  Values v;
  if (r < 0.0) r = -r;
  if (r > r_.back()) throw DomainError("RadialPotential: radius beyond table");
  if (r < r_[1]) {
    // odd Taylor series of J and K at the origin
    const double J1 = J_[0][1], J3 = J_[0][3], J5 = J_[0][5];
    const double K1 = K_[0][1], K3 = K_[0][3];
    const double r2 = r * r;
    v.a = -J1 / 2 - J3 * r2 / 12 - J5 * r2 * r2 / 240;
    v.a_r = -J3 * r / 6 - J5 * r2 * r / 60;
    v.a_rr = -J3 / 6 - J5 * r2 / 20;
    v.a_rrr = -J5 * r / 10;
    v.lap = -J3 / 2 - J5 * r2 / 12;
    v.lap_r = -J5 * r / 6;
    v.att = K1 / 2 + K3 * r2 / 12;
    return v;
  }
  std::size_t lo = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin() - 1;
  if (lo >= r_.size() - 1) lo = r_.size() - 2;
  const double J0 = interp_J(r, 0, lo), J1 = interp_J(r, 1, lo), J2 = interp_J(r, 2, lo),
               J3 = interp_J(r, 3, lo);
  const double K0 = interp_K(r, 0, lo);
  const double ir = 1.0 / r, ir2 = ir * ir, ir3 = ir2 * ir, ir4 = ir3 * ir;
  v.a = -0.5 * J0 * ir;
  v.a_r = -0.5 * J1 * ir + 0.5 * J0 * ir2;
  v.a_rr = -0.5 * J2 * ir + J1 * ir2 - J0 * ir3;
  v.a_rrr = -0.5 * J3 * ir + 1.5 * J2 * ir2 - 3.0 * J1 * ir3 + 3.0 * J0 * ir4;
  v.lap = -0.5 * J2 * ir;
  v.lap_r = -0.5 * J3 * ir + 0.5 * J2 * ir2;
  v.att = 0.5 * K0 * ir;
  return v;
}

namespace {
template <class F>
double radial_sup(const std::vector<double>& r, F&& f) {
  double best = 0.0;
  std::size_t bi = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    for (int k = 0; k < 8; ++k) {
      double x = r[i] + (r[i + 1] - r[i]) * k / 8.0, v = std::abs(f(x));
      if (v > best) { best = v; bi = i; }
    }
  // golden section refine around the best interval
  double lo = r[bi > 0 ? bi - 1 : 0], hi = r[std::min(bi + 2, r.size() - 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  for (int it = 0; it < 100; ++it) {
    if (std::abs(f(c)) > std::abs(f(d))) hi = d; else lo = c;
    c = hi - gr * (hi - lo);
    d = lo + gr * (hi - lo);
  }
  return std::max(best, std::abs(f(0.5 * (lo + hi))));
}
}  // namespace

double RadialPotential::sup_abs() const {
  return radial_sup(r_, [&](double r) { return eval(r).a; });
}

double RadialPotential::sup_grad() const {
  return radial_sup(r_, [&](double r) { return eval(r).a_r; });
}

double RadialPotential::sup_att() const {
  return radial_sup(r_, [&](double r) { return eval(r).att; });
}

// ---------------- bundle ----------------

namespace {

std::shared_ptr<RadialPotential> make_potential(const AsymptoticState& s, const std::vector<QuadNode>& nodes,
                                                double r_max = 0.0) {
  const double Lmax = std::max(s.physical_grid.box_length(), s.profile_grid.box_length());
  if (r_max <= 0.0) r_max = 0.5 * std::sqrt(3.0) * Lmax * 1.02 + 1.0;
  GaussPoly g = s.w.w * s.w.w;
  return std::make_shared<RadialPotential>(g, nodes, r_max, s.w.sigma / 40.0);
}

RealField sample_radial(const Grid& g, const std::function<double(double)>& f) {
  return sample<double>(g, [&](double x, double y, double z) { return f(std::sqrt(x * x + y * y + z * z)); });
}

}  // namespace

ProfileBundle build_bundle(const AsymptoticState& state, double nu_max, int node_count, bool include_tail,
                           double r_max) {
  ProfileBundle b;
  b.state = state;
  b.nu_max = nu_max;
  b.tail_included = include_tail;
  b.quadrature_nodes = nu_quadrature(nu_max, node_count, include_tail);
  b.potential = make_potential(state, b.quadrature_nodes, r_max);
  const auto& P = *b.potential;
  b.a1_tilde = sample_radial(state.profile_grid, [&](double r) { return P.eval(r).a; });
  b.a1_tilde_tilde = sample_radial(state.profile_grid, [&](double r) { return P.eval(r).att; });
  GaussPoly zg = (state.w.w * state.w.w).times_z();
  double m = 0.0;
  for (int i = 0; i < 20000; ++i) m = std::max(m, std::abs(zg(i * 1e-3 * state.w.sigma)));
  b.tail_bound = m / nu_max;
  return b;
}

namespace {

RealField grid_route(const AsymptoticState& s, double nu_max, int node_count, bool tilde_tilde, double thr) {
  const Grid& g = s.profile_grid;
  RealField w2(g);
  for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = std::norm(s.w_plus[i]);
  ComplexField acc(g);
  for (const auto& q : nu_quadrature(nu_max, node_count, false)) {
    const double nu = q.nu, tau = nu - 1.0;
    RealField d;
    try {
      d = dilate(w2, nu, Interp::Trigonometric, thr);
    } catch (const AliasingError& e) {
      throw AliasingError(std::string(e.what()) + " (quadrature node nu = " + std::to_string(nu) + ")",
                          e.mass_fraction);
    }
    ComplexField m = apply_multiplier(to_complex(d), [&](double a, double b, double c) {
      double om = std::sqrt(a * a + b * b + c * c);
      if (tilde_tilde) return cplx(std::cos(om * tau), 0.0);
      return cplx(om == 0.0 ? tau : std::sin(om * tau) / om, 0.0);
    });
    const double wt = (tilde_tilde ? 1.0 : -1.0) * q.weight / (nu * nu * nu);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += wt * m[i];
  }
  return real_part(acc);
}

}  // namespace

RealField build_a1_tilde(const AsymptoticState& s, double nu_max, int node_count, Route route, double thr) {
  if (route == Route::Grid) return grid_route(s, nu_max, node_count, false, thr);
  auto P = make_potential(s, nu_quadrature(nu_max, node_count, true));
  return sample_radial(s.profile_grid, [&](double r) { return P->eval(r).a; });
}

RealField build_a1_tilde_tilde(const AsymptoticState& s, double nu_max, int node_count, Route route,
                               double thr) {
  if (route == Route::Grid) return grid_route(s, nu_max, node_count, true, thr);
  auto P = make_potential(s, nu_quadrature(nu_max, node_count, true));
  return sample_radial(s.profile_grid, [&](double r) { return P->eval(r).att; });
}

RealField phase(const ProfileBundle& b, double t) {
  if (!(t >= 1.0)) throw DomainError("phase: t must be >= 1");
  RealField out = b.a1_tilde;
  out *= std::log(t);
  return out;
}

ProfilePoint profile_at(const ProfileBundle& b, double r) {
  const auto& w = b.state.w;
  return {w.w(r), w.w1(r), w.w2(r), w.w3(r), w.lap(r), w.lap1(r), b.potential->eval(r)};
}

cplx u_a_point(const ProfileBundle& b, double t, double rho) {
  if (!(t >= 1.0)) throw DomainError("u_a_point: t must be >= 1");
  const double r = rho / t;
  const double w = b.state.w.w(r);
  if (w == 0.0) return 0.0;
  if (r > b.potential->r_max()) {
    if (std::abs(w) < 1e-300) return 0.0;
    throw DomainError("u_a_point: profile radius beyond the A1~ table");
  }
  const double ph = -0.75 * std::numbers::pi + rho * rho / (2.0 * t) - std::log(t) * b.potential->eval(r).a;
  return std::polar(std::pow(t, -1.5) * w, ph);
}

WavePoint a_a_point(const ProfileBundle& b, double t, double rho) {
  if (!(t >= 1.0)) throw DomainError("a_a_point: t must be >= 1");
  const auto& c = b.state.free_wave.center();
  if (c[0] != 0.0 || c[1] != 0.0 || c[2] != 0.0) throw DomainError("a_a_point: A_+ must be centred");
  const auto f = b.state.free_wave.eval(rho, t);
  const auto A = b.potential->eval(rho / t);
  return {f.a + A.a / t, f.a_r + A.a_r / (t * t), f.a_t + A.att / (t * t)};
}

// ---------------- physical-grid evaluators ----------------

namespace {

// visit every point with x, y = x/t, r = |y|
template <class F>
void for_points(const Grid& g, double t, F&& f) {
  const int n = g.n();
  const double it = 1.0 / t;
  for (int i = 0; i < n; ++i) {
    const double x0 = g.coord(i);
    for (int j = 0; j < n; ++j) {
      const double x1 = g.coord(j);
      for (int k = 0; k < n; ++k) {
        const double x2 = g.coord(k);
        const double x2s = x0 * x0 + x1 * x1 + x2 * x2;
        const double y[3] = {x0 * it, x1 * it, x2 * it};
        f(g.index(i, j, k), x2s, y, std::sqrt(x2s) * it);
      }
    }
  }
}

void check_t(double t, const char* who) {
  if (!(t >= 1.0)) throw DomainError(std::string(who) + ": t must be >= 1");
}

// MD e^{-i phi} applied to a profile value: (it)^{-3/2} e^{i|x|^2/2t} e^{-i ln t A1~(y)}
inline cplx md_phase(double t, double lnt, double x2s, double a) {
  return std::polar(std::pow(t, -1.5), -0.75 * std::numbers::pi + x2s / (2.0 * t) - lnt * a);
}

}  // namespace

ComplexField u_a(const ProfileBundle& b, double t) { return u_a(b, t, b.state.physical_grid); }

ComplexField u_a(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "u_a");
  ComplexField out(g);
  if (b.state.w.is_zero()) return out;
  const double lnt = std::log(t);
  const auto& P = *b.potential;
  const auto& w = b.state.w.w;
  for_points(g, t, [&](std::size_t idx, double x2s, const double*, double r) {
    out[idx] = md_phase(t, lnt, x2s, P.eval(r).a) * w(r);
  });
  return out;
}

WaveState a0(const AsymptoticState& s, double t) {
  WaveState w{s.a_plus, s.a_dot_plus, 0.0};
  if (t == 0.0) return w;
  return wave_propagate(w, t);
}

RealField a1(const ProfileBundle& b, double t) { return a1(b, t, b.state.physical_grid); }

RealField a1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "a1");
  RealField out(g);
  const auto& P = *b.potential;
  for_points(g, t, [&](std::size_t idx, double, const double*, double r) { out[idx] = P.eval(r).a / t; });
  return out;
}

RealField a1_dot(const ProfileBundle& b, double t) { return a1_dot(b, t, b.state.physical_grid); }

RealField a1_dot(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "a1_dot");
  RealField out(g);
  const auto& P = *b.potential;
  for_points(g, t, [&](std::size_t idx, double, const double*, double r) { out[idx] = P.eval(r).att / (t * t); });
  return out;
}

std::array<RealField, 3> grad_a1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "grad_a1");
  std::array<RealField, 3> out{RealField(g), RealField(g), RealField(g)};
  const auto& P = *b.potential;
  for_points(g, t, [&](std::size_t idx, double, const double* y, double r) {
    if (r == 0.0) return;
    const double s = P.eval(r).a_r / (t * t * r);
    for (int d = 0; d < 3; ++d) out[d][idx] = s * y[d];
  });
  return out;
}

RealField lap_a1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "lap_a1");
  RealField out(g);
  const auto& P = *b.potential;
  for_points(g, t, [&](std::size_t idx, double, const double*, double r) { out[idx] = P.eval(r).lap / (t * t * t); });
  return out;
}

std::array<ComplexField, 3> grad_u_a(const ProfileBundle& b, double t) { return grad_u_a(b, t, b.state.physical_grid); }

std::array<ComplexField, 3> grad_u_a(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "grad_u_a");
  std::array<ComplexField, 3> out{ComplexField(g), ComplexField(g), ComplexField(g)};
  if (b.state.w.is_zero()) return out;
  const double lnt = std::log(t);
  const auto& P = *b.potential;
  const auto& W = b.state.w;
  const cplx I(0.0, 1.0);
  for_points(g, t, [&](std::size_t idx, double x2s, const double* y, double r) {
    const auto A = P.eval(r);
    const double w = W.w(r);
    const cplx base = md_phase(t, lnt, x2s, A.a);
    // i y w + y^ (t^-1 w' - i t^-1 ln t A1~' w)
    const cplx radial = r > 0.0 ? (W.w1(r) - I * lnt * A.a_r * w) / (t * r) : cplx(0.0);
    for (int d = 0; d < 3; ++d) out[d][idx] = base * (I * y[d] * w + y[d] * radial);
  });
  return out;
}

ComplexField dt_u_a(const ProfileBundle& b, double t) { return dt_u_a(b, t, b.state.physical_grid); }

ComplexField dt_u_a(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "dt_u_a");
  ComplexField out(g);
  if (b.state.w.is_zero()) return out;
  const double lnt = std::log(t), it = 1.0 / t;
  const auto& P = *b.potential;
  const auto& W = b.state.w;
  const cplx I(0.0, 1.0);
  for_points(g, t, [&](std::size_t idx, double x2s, const double*, double r) {
    const auto A = P.eval(r);
    const double w = W.w(r);
    // the bracket is i d_t u_a; see the ledger
    const cplx br = 0.5 * r * r * w - I * it * (r * W.w1(r) + 1.5 * w) + it * A.a * w - it * lnt * r * A.a_r * w;
    out[idx] = -I * md_phase(t, lnt, x2s, A.a) * br;
  });
  return out;
}

}  // namespace wss
