#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wsscatter/diagnostics.hpp"
#include "wsscatter/profiles.hpp"

namespace wss {

// R1~ = (2t^2)^-1 (lap w - i ln t (2 A1~' w' + lap A1~ w) - (ln t)^2 A1~'^2 w), on the profile grid.
// Derivatives are the analytic radial ones of the profile and the A1~ table.
ComplexField r1_tilde(const ProfileBundle& b, double t);

// R_1 = MD e^{-i phi} R1~ - A_0 u_a and its derivatives. A_0 is the spectral free wave on g.
ComplexField r1(const ProfileBundle& b, double t);
ComplexField r1(const ProfileBundle& b, double t, const Grid& g);
std::array<ComplexField, 3> grad_r1(const ProfileBundle& b, double t);
std::array<ComplexField, 3> grad_r1(const ProfileBundle& b, double t, const Grid& g);
ComplexField dt_r1(const ProfileBundle& b, double t);
ComplexField dt_r1(const ProfileBundle& b, double t, const Grid& g);

// R_1(t, x) at |x| = rho with the closed-form A_0 (A_+ centred)
cplx r1_point(const ProfileBundle& b, double t, double rho);

// Right side of the defining identity, i d_t u_a + (1/2) lap u_a - A_a u_a, evaluated independently:
// fourth-order centred difference in t with step h, spectral Laplacian, A_a = spectral A_0 + A_1.
ComplexField r1_identity(const ProfileBundle& b, double t, const Grid& g, double h = 2e-3);

// Discrete L^{4/3} norm of box A_a + |u_a|^2 on the physical grid. d_t^2 by centred differences with
// step h = rel_step * t, Richardson-extrapolated.
double r2_residual(const ProfileBundle& b, double t, double rel_step = 1e-3);
// ||u_a(t)|^2||_{4/3} on the same grid, the scale r2_residual is judged against
double r2_source_norm(const ProfileBundle& b, double t);

struct RemainderNorms {
  double r1_l2 = 0, grad_r1_l2 = 0, dt_r1_l2 = 0, r1_l4 = 0;
  bool radial = false;  // true when computed by exact radial quadrature
};
// The radial path applies when A_+ is centred at the origin (w_+ always is): the norms reduce to
// one-dimensional integrals in r = |x|/t with the closed-form A_0. Otherwise the physical grid is used.
bool radial_path_available(const ProfileBundle& b);
RemainderNorms remainder_norms(const ProfileBundle& b, double t);
RemainderNorms remainder_norms_grid(const ProfileBundle& b, double t);

// (int_{t_lo}^inf ||R_1(s)||_4^{8/3} ds)^{3/8}: log-trapezoid on [t_lo, t_max] plus the tail of a
// power law fitted to the samples
struct StrichartzR1 {
  double value = 0;
  double tail = 0;  // tail contribution to the integral (before the root)
  DecayFit pointwise;
};
StrichartzR1 strichartz_r1_norm(const ProfileBundle& b, double t_lo, double t_max, int per_octave = 16);

struct RemainderReport {
  std::vector<double> times;
  std::vector<double> r1_l2, grad_r1_l2, dt_r1_l2, r1_l4;
  bool radial = false;
  std::vector<double> r2_times;
  std::vector<double> r2_residual_l43, r2_source_l43;
  std::map<std::string, DecayFit> fits;
};

// norms at `times`, R_2 at `r2_times`; fits over t >= fit_from
RemainderReport remainder_report(const ProfileBundle& b, const std::vector<double>& times,
                                 const std::vector<double>& r2_times, double fit_from = 8.0);

}  // namespace wss
