#pragma once

#include <array>
#include <memory>
#include <vector>

#include "wsscatter/free_wave.hpp"
#include "wsscatter/gauss_poly.hpp"
#include "wsscatter/grid.hpp"
#include "wsscatter/spectral.hpp"

namespace wss {

// Isotropic centred profile w(r) = alpha sum_n c_n (r/sigma)^{2n} exp(-r^2 / 2 sigma^2).
struct RadialProfile {
  GaussPoly w, w1, w2, w3;  // w and radial derivatives
  GaussPoly lap, lap1;      // w'' + 2w'/r and its radial derivative
  double sigma = 1.0;

  static RadialProfile hermite_gaussian(double alpha, double sigma, std::vector<double> coeffs = {1.0});
  bool is_zero() const { return w.is_zero(); }
  // radius beyond which |w| <= threshold * max |w|
  double support_radius(double threshold) const;
  double norm(double r) const;  // exact L^r norm over R^3, r < inf
  double sup() const;
};

struct AsymptoticState {
  Grid profile_grid;   // where w_+, A1~ and A1~~ are stored as fields
  Grid physical_grid;  // where A_+ lives and the solver runs
  RadialProfile w;
  RadialFreeWave free_wave;
  ComplexField w_plus;
  RealField a_plus, a_dot_plus;
  double c4 = 0.0;
  double support_radius = 0.0;
};

AsymptoticState make_state(const Grid& profile_grid, const Grid& physical_grid, RadialProfile w,
                           RadialFreeWave free_wave, double support_threshold = 1e-6);

struct QuadNode {
  double nu;
  double weight;
};

// Gauss-Legendre in ln(nu) over [1, nu_max], panels of 16 nodes. With tail = true a second
// rule covers [nu_max, inf) through nu = nu_max / s.
std::vector<QuadNode> nu_quadrature(double nu_max, int node_count, bool tail);

// A1~ and A1~~ of a radial |w|^2, tabulated in r with their derivatives.
// Writing A1~ = -J(r)/(2r) and A1~~ = K(r)/(2r), with H(z) = int_0^z s g(s) ds,
//   J(r) = int nu^-1 [H(a) - H(b)],   K(r) = int nu^-2 [a g(a) + b g(b)],
//   a = (r + nu - 1)/nu, b = (r - nu + 1)/nu.
class RadialPotential {
 public:
  RadialPotential(const GaussPoly& g, const std::vector<QuadNode>& nodes, double r_max, double h);

  struct Values {
    double a = 0, a_r = 0, a_rr = 0, a_rrr = 0;  // A1~ and derivatives
    double lap = 0, lap_r = 0;                   // Laplacian of A1~ and its radial derivative
    double att = 0;                              // A1~~
  };
  Values eval(double r) const;
  double r_max() const { return r_.back(); }
  // sup over r of |A1~| and |A1~'|, by dense search on the table
  double sup_abs() const;
  double sup_grad() const;
  double sup_att() const;  // of |A1~~|

 private:
  std::vector<double> r_;
  std::vector<std::array<double, 6>> J_;  // J^(0..5)
  std::vector<std::array<double, 4>> K_;  // K^(0..3)
  double interp_J(double r, int order, std::size_t lo) const;
  double interp_K(double r, int order, std::size_t lo) const;
};

struct ProfileBundle {
  AsymptoticState state;
  std::shared_ptr<const RadialPotential> potential;
  RealField a1_tilde;        // on the profile grid
  RealField a1_tilde_tilde;  // on the profile grid
  double nu_max = 64.0;
  std::vector<QuadNode> quadrature_nodes;
  bool tail_included = true;
  double tail_bound = 0.0;  // bound on |A1~| contribution of nu > nu_max
};

// r_max: extent of the A1~ table in profile radius; 0 picks one that covers both grids
ProfileBundle build_bundle(const AsymptoticState& state, double nu_max = 64.0, int node_count = 256,
                           bool include_tail = true, double r_max = 0.0);

enum class Route { Radial, Grid };
// Route::Grid is the literal construction: dilate |w_+|^2 spectrally at every node and apply
// the wave multiplier on the profile grid. It has no tail and needs a box large enough for nu_max.
// support_threshold is passed to the dilation check of the grid route.
RealField build_a1_tilde(const AsymptoticState& state, double nu_max, int node_count,
                         Route route = Route::Radial, double support_threshold = 1e-12);
RealField build_a1_tilde_tilde(const AsymptoticState& state, double nu_max, int node_count,
                               Route route = Route::Radial, double support_threshold = 1e-12);

// (ln t) A1~ on the profile grid
RealField phase(const ProfileBundle& b, double t);

// Profile fields at time t on a physical grid (defaults to the state's physical grid).
ComplexField u_a(const ProfileBundle& b, double t);
ComplexField u_a(const ProfileBundle& b, double t, const Grid& g);
WaveState a0(const AsymptoticState& s, double t);  // spectral free propagation of (A_+, dA_+)
RealField a1(const ProfileBundle& b, double t);
RealField a1(const ProfileBundle& b, double t, const Grid& g);
RealField a1_dot(const ProfileBundle& b, double t);
RealField a1_dot(const ProfileBundle& b, double t, const Grid& g);
std::array<RealField, 3> grad_a1(const ProfileBundle& b, double t, const Grid& g);
RealField lap_a1(const ProfileBundle& b, double t, const Grid& g);
std::array<ComplexField, 3> grad_u_a(const ProfileBundle& b, double t);
std::array<ComplexField, 3> grad_u_a(const ProfileBundle& b, double t, const Grid& g);
ComplexField dt_u_a(const ProfileBundle& b, double t);
ComplexField dt_u_a(const ProfileBundle& b, double t, const Grid& g);

// profile-coordinate evaluation helpers shared with the remainder module
struct ProfilePoint {
  double w, w1, w2, w3, lap, lap1;
  RadialPotential::Values A;
};
ProfilePoint profile_at(const ProfileBundle& b, double r);

// Pointwise values at physical radius rho (w_+ is centred; A_a needs A_+ centred as well).
// Beyond the table u_a is zero when w_+ has underflowed there, otherwise DomainError.
cplx u_a_point(const ProfileBundle& b, double t, double rho);
struct WavePoint {
  double a = 0, a_r = 0, a_t = 0;
};
WavePoint a_a_point(const ProfileBundle& b, double t, double rho);

}  // namespace wss
