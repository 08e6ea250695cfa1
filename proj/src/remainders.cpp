#include "wsscatter/remainders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quad.hpp"

namespace wss {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

void check_t(double t, const char* who) {
  if (!(t >= 1.0)) throw DomainError(std::string(who) + ": t must be >= 1");
}

inline cplx md_phase(double t, double lnt, double x2s, double a) {
  return std::polar(std::pow(t, -1.5), -0.75 * kPi + x2s / (2.0 * t) - lnt * a);
}

// R1~ at profile radius r together with its r- and t-derivatives
struct Tilde {
  cplx R, R_r, R_t;
};

Tilde tilde_at(const ProfilePoint& p, double t, double L) {
  const auto& A = p.A;
  const double c = 0.5 / (t * t);
  const double lin = 2.0 * A.a_r * p.w1 + A.lap * p.w;
  const double quad = A.a_r * A.a_r * p.w;
  Tilde o;
  o.R = c * (p.lap - I * L * lin - L * L * quad);
  const double lin_r = 2.0 * A.a_rr * p.w1 + 2.0 * A.a_r * p.w2 + A.lap_r * p.w + A.lap * p.w1;
  const double quad_r = 2.0 * A.a_r * A.a_rr * p.w + A.a_r * A.a_r * p.w1;
  o.R_r = c * (p.lap1 - I * L * lin_r - L * L * quad_r);
  o.R_t = -2.0 / t * o.R + c * (-I / t * lin - 2.0 * L / t * quad);
  return o;
}

// i d_t of MD e^{-i phi} f, stripped of the MD e^{-i phi} factor, is bracket(f) + i d_t f
inline cplx bracket(double r, double t, double L, const RadialPotential::Values& A, cplx f, cplx f_r) {
  return 0.5 * r * r * f - I / t * (r * f_r + 1.5 * f) + A.a / t * f - L / t * r * A.a_r * f;
}

// radial component of grad (MD e^{-i phi} f), same stripping
inline cplx radial_grad(double r, double t, double L, const RadialPotential::Values& A, cplx f, cplx f_r) {
  return I * r * f + (f_r - I * L * A.a_r * f) / t;
}

WaveState a0_on(const ProfileBundle& b, double t, const Grid& g) {
  if (g == b.state.physical_grid) return a0(b.state, t);
  WaveState w{b.state.free_wave.sample_data(g), b.state.free_wave.sample_data_dot(g), 0.0};
  return t == 0.0 ? w : wave_propagate(w, t);
}

// visit every grid point with its profile radius and direction
template <class F>
void for_points(const Grid& g, double t, F&& f) {
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    const double x0 = g.coord(i);
    for (int j = 0; j < n; ++j) {
      const double x1 = g.coord(j);
      for (int k = 0; k < n; ++k) {
        const double x2 = g.coord(k);
        const double x2s = x0 * x0 + x1 * x1 + x2 * x2;
        const double rho = std::sqrt(x2s);
        const double dir[3] = {rho > 0 ? x0 / rho : 0.0, rho > 0 ? x1 / rho : 0.0, rho > 0 ? x2 / rho : 0.0};
        f(g.index(i, j, k), x2s, dir, rho / t);
      }
    }
  }
}

}  // namespace

ComplexField r1_tilde(const ProfileBundle& b, double t) {
  check_t(t, "r1_tilde");
  const Grid& g = b.state.profile_grid;
  ComplexField out(g);
  if (b.state.w.is_zero()) return out;
  const double L = std::log(t);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double x = g.coord(i), y = g.coord(j), z = g.coord(k);
        out(i, j, k) = tilde_at(profile_at(b, std::sqrt(x * x + y * y + z * z)), t, L).R;
      }
  return out;
}

ComplexField r1(const ProfileBundle& b, double t) { return r1(b, t, b.state.physical_grid); }

ComplexField r1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "r1");
  ComplexField out(g);
  if (b.state.w.is_zero()) return out;
  const double L = std::log(t);
  const WaveState A0 = a0_on(b, t, g);
  for_points(g, t, [&](std::size_t idx, double x2s, const double*, double r) {
    const ProfilePoint p = profile_at(b, r);
    const Tilde T = tilde_at(p, t, L);
    out[idx] = md_phase(t, L, x2s, p.A.a) * (T.R - A0.a[idx] * p.w);
  });
  return out;
}

std::array<ComplexField, 3> grad_r1(const ProfileBundle& b, double t) { return grad_r1(b, t, b.state.physical_grid); }

std::array<ComplexField, 3> grad_r1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "grad_r1");
  std::array<ComplexField, 3> out{ComplexField(g), ComplexField(g), ComplexField(g)};
  if (b.state.w.is_zero()) return out;
  const double L = std::log(t);
  const WaveState A0 = a0_on(b, t, g);
  const auto dA0 = gradient(A0.a);
  for_points(g, t, [&](std::size_t idx, double x2s, const double* dir, double r) {
    const ProfilePoint p = profile_at(b, r);
    const Tilde T = tilde_at(p, t, L);
    const cplx md = md_phase(t, L, x2s, p.A.a);
    const double a = A0.a[idx];
    const cplx radial = radial_grad(r, t, L, p.A, T.R, T.R_r) - a * radial_grad(r, t, L, p.A, p.w, p.w1);
    for (int d = 0; d < 3; ++d) out[d][idx] = md * (dir[d] * radial - dA0[d][idx] * p.w);
  });
  return out;
}

ComplexField dt_r1(const ProfileBundle& b, double t) { return dt_r1(b, t, b.state.physical_grid); }

ComplexField dt_r1(const ProfileBundle& b, double t, const Grid& g) {
  check_t(t, "dt_r1");
  ComplexField out(g);
  if (b.state.w.is_zero()) return out;
  const double L = std::log(t);
  const WaveState A0 = a0_on(b, t, g);
  for_points(g, t, [&](std::size_t idx, double x2s, const double*, double r) {
    const ProfilePoint p = profile_at(b, r);
    const Tilde T = tilde_at(p, t, L);
    const cplx md = md_phase(t, L, x2s, p.A.a);
    const cplx dR = -I * bracket(r, t, L, p.A, T.R, T.R_r) + T.R_t;
    const cplx du = -I * bracket(r, t, L, p.A, p.w, p.w1);
    out[idx] = md * (dR - A0.a_dot[idx] * p.w - A0.a[idx] * du);
  });
  return out;
}

ComplexField r1_identity(const ProfileBundle& b, double t, const Grid& g, double h) {
  check_t(t - 2.0 * h, "r1_identity");
  ComplexField u = u_a(b, t, g);
  ComplexField p1 = u_a(b, t + h, g), p2 = u_a(b, t + 2 * h, g);
  ComplexField m1 = u_a(b, t - h, g), m2 = u_a(b, t - 2 * h, g);
  ComplexField lap = laplacian(u);
  const WaveState A0 = a0_on(b, t, g);
  const RealField A1 = a1(b, t, g);
  ComplexField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx dt = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
    out[i] = I * dt + 0.5 * lap[i] - (A0.a[i] + A1[i]) * u[i];
  }
  return out;
}

double r2_residual(const ProfileBundle& b, double t, double rel_step) {
  check_t(t, "r2_residual");
  const Grid& g = b.state.physical_grid;
  const double h = rel_step * t;
  check_t(t - h, "r2_residual");
  auto A = [&](double s) {
    RealField f = a0(b.state, s).a;
    f += a1(b, s, g);
    return f;
  };
  const RealField c = A(t), p = A(t + h), m = A(t - h), ph = A(t + 0.5 * h), mh = A(t - 0.5 * h);
  RealField lap0 = laplacian(a0(b.state, t).a);
  RealField lap1 = lap_a1(b, t, g);
  ComplexField ua = u_a(b, t, g);
  RealField res(g);
  for (std::size_t i = 0; i < res.size(); ++i) {
    const double D1 = (p[i] - 2.0 * c[i] + m[i]) / (h * h);
    const double D2 = (ph[i] - 2.0 * c[i] + mh[i]) / (0.25 * h * h);
    const double att = (4.0 * D2 - D1) / 3.0;
    res[i] = att - lap0[i] - lap1[i] + std::norm(ua[i]);
  }
  return lebesgue_norm(res, 4.0 / 3.0);
}

double r2_source_norm(const ProfileBundle& b, double t) {
  ComplexField ua = u_a(b, t);
  RealField s(ua.grid());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::norm(ua[i]);
  return lebesgue_norm(s, 4.0 / 3.0);
}

cplx r1_point(const ProfileBundle& b, double t, double rho) {
  check_t(t, "r1_point");
  if (!radial_path_available(b)) throw DomainError("r1_point: A_+ must be centred");
  const double r = rho / t;
  if (b.state.w.is_zero() || b.state.w.w(r) == 0.0) return 0.0;
  const double L = std::log(t);
  const ProfilePoint p = profile_at(b, r);
  const Tilde T = tilde_at(p, t, L);
  const double a = b.state.free_wave.eval(rho, t).a;
  return md_phase(t, L, rho * rho, p.A.a) * (T.R - a * p.w);
}

bool radial_path_available(const ProfileBundle& b) {
  const auto& c = b.state.free_wave.center();
  return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0;
}

RemainderNorms remainder_norms(const ProfileBundle& b, double t) {
  check_t(t, "remainder_norms");
  if (!radial_path_available(b)) return remainder_norms_grid(b, t);
  RemainderNorms out;
  out.radial = true;
  if (b.state.w.is_zero()) return out;
  const double L = std::log(t);
  const auto& fw = b.state.free_wave;
  const double sigma = b.state.w.sigma;
  const double r_w = std::min(b.state.w.support_radius(1e-18), b.potential->r_max());

  // breakpoints: origin, the light-cone shell r ~ 1 where A_0 lives, end of the profile support
  const double c = fw.is_zero() ? 0.0 : 12.0 * fw.scale() / t;
  std::vector<double> bp{0.0, r_w};
  if (c > 0.0) {
    bp.push_back(std::clamp(1.0 - c, 0.0, r_w));
    bp.push_back(std::clamp(1.0 + c, 0.0, r_w));
  }
  std::sort(bp.begin(), bp.end());

  double s2 = 0, s4 = 0, sg = 0, st = 0;
  auto integrand = [&](double r) {
    const ProfilePoint p = profile_at(b, r);
    const Tilde T = tilde_at(p, t, L);
    const RadialFreeWave::Value A0 = fw.eval(t * r, t);
    const cplx P = T.R - A0.a * p.w;
    const cplx Q = radial_grad(r, t, L, p.A, T.R, T.R_r) -
                   (A0.a_r * p.w + A0.a * radial_grad(r, t, L, p.A, p.w, p.w1));
    const cplx S = -I * bracket(r, t, L, p.A, T.R, T.R_r) + T.R_t - A0.a_t * p.w -
                   A0.a * (-I * bracket(r, t, L, p.A, p.w, p.w1));
    return std::array<double, 4>{std::norm(P), std::norm(P) * std::norm(P), std::norm(Q), std::norm(S)};
  };
  const auto& [gx, gw] = detail::gl16();
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double lo = bp[k], hi = bp[k + 1];
    if (hi <= lo) continue;
    const bool shell = c > 0.0 && lo >= 1.0 - c - 1e-12 && hi <= 1.0 + c + 1e-12;
    const double width = shell ? fw.scale() / (4.0 * t) : sigma / 8.0;
    const int panels = std::max(1, int(std::ceil((hi - lo) / width)));
    const double d = (hi - lo) / panels;
    for (int q = 0; q < panels; ++q)
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double r = lo + q * d + 0.5 * d * (gx[i] + 1.0);
        const double wt = gw[i] * 0.5 * d * r * r;
        const auto v = integrand(r);
        s2 += wt * v[0];
        s4 += wt * v[1];
        sg += wt * v[2];
        st += wt * v[3];
      }
  }
  const double fp = 4.0 * kPi;
  // |R_1(t, x)| = t^{-3/2} |P(|x|/t)| and d^3x = t^3 d^3y
  out.r1_l2 = std::sqrt(fp * s2);
  out.r1_l4 = std::pow(fp * s4 * std::pow(t, -3.0), 0.25);
  out.grad_r1_l2 = std::sqrt(fp * sg);
  out.dt_r1_l2 = std::sqrt(fp * st);
  return out;
}

RemainderNorms remainder_norms_grid(const ProfileBundle& b, double t) {
  RemainderNorms out;
  ComplexField R = r1(b, t);
  out.r1_l2 = lebesgue_norm(R, 2.0);
  out.r1_l4 = lebesgue_norm(R, 4.0);
  out.grad_r1_l2 = l2_norm(grad_r1(b, t));
  out.dt_r1_l2 = lebesgue_norm(dt_r1(b, t), 2.0);
  return out;
}

StrichartzR1 strichartz_r1_norm(const ProfileBundle& b, double t_lo, double t_max, int per_octave) {
  check_t(t_lo, "strichartz_r1_norm");
  if (!(t_max > t_lo)) throw DomainError("strichartz_r1_norm: need t_max > t_lo");
  StrichartzR1 out;
  DecaySeries s;
  s.label = "r1_l4";
  const int steps = std::max(2, int(std::ceil(per_octave * std::log2(t_max / t_lo))));
  for (int j = 0; j <= steps; ++j) {
    const double tt = t_lo * std::pow(t_max / t_lo, double(j) / steps);
    s.times.push_back(tt);
    s.values.push_back(remainder_norms(b, tt).r1_l4);
  }
  const double q = 8.0 / 3.0;
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < s.times.size(); ++j) {
    // trapezoid in ln s of s ||R_1(s)||_4^q
    const double f0 = s.times[j] * std::pow(s.values[j], q), f1 = s.times[j + 1] * std::pow(s.values[j + 1], q);
    integral += 0.5 * (f0 + f1) * std::log(s.times[j + 1] / s.times[j]);
  }
  if (integral == 0.0) return out;
  out.pointwise = fit_decay(s);
  const double e = 1.0 + q * out.pointwise.exponent;
  if (!(e < 0.0)) throw NumericalError("strichartz_r1_norm: fitted decay too slow for a finite tail");
  out.tail = std::pow(out.pointwise.prefactor, q) * std::pow(t_max, e) / (-e);
  out.value = std::pow(integral + out.tail, 1.0 / q);
  return out;
}

RemainderReport remainder_report(const ProfileBundle& b, const std::vector<double>& times,
                                 const std::vector<double>& r2_times, double fit_from) {
  RemainderReport rep;
  rep.times = times;
  for (double t : times) {
    auto n = remainder_norms(b, t);
    rep.r1_l2.push_back(n.r1_l2);
    rep.grad_r1_l2.push_back(n.grad_r1_l2);
    rep.dt_r1_l2.push_back(n.dt_r1_l2);
    rep.r1_l4.push_back(n.r1_l4);
    rep.radial = n.radial;
  }
  rep.r2_times = r2_times;
  for (double t : r2_times) {
    rep.r2_residual_l43.push_back(r2_residual(b, t));
    rep.r2_source_l43.push_back(r2_source_norm(b, t));
  }
  auto add = [&](const std::string& name, const std::vector<double>& v) {
    DecaySeries s{times, v, name};
    int in = 0;
    for (double t : times) in += t >= fit_from;
    if (in >= 2) rep.fits[name] = fit_decay_after(s, fit_from);
  };
  add("r1_l2", rep.r1_l2);
  add("grad_r1_l2", rep.grad_r1_l2);
  add("dt_r1_l2", rep.dt_r1_l2);
  add("r1_l4", rep.r1_l4);
  return rep;
}

}  // namespace wss
