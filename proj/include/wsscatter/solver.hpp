#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wsscatter/diagnostics.hpp"
#include "wsscatter/profiles.hpp"

namespace wss {

// ---- 3D periodic system ----

struct SystemState {
  ComplexField u;
  WaveState wave;  // A and dA on the same grid as u
  double time = 0.0;
};

// One symmetric Strang step P(dt/2) K(dt) P(dt/2). P is the exactly solvable potential/wave flow
// with the source -|u|^2 frozen (|u| is invariant under it), K the free Schrodinger drift.
// dt may be negative.
SystemState step(const SystemState& s, double dt);

struct Conserved {
  double l2 = 0.0;      // ||u||_2
  double energy = 0.0;  // int (1/2)(|grad u|^2 + dA^2 + |grad A|^2) + A |u|^2
};
Conserved conserved_quantities(const SystemState& s);

// ---- radial system ----
// For radially symmetric data the 3D problem reduces exactly to psi = r u, phi = r A on [0, R]:
//   i psi_t = -(1/2) psi'' + A psi,   phi_tt = phi'' - |psi|^2 / r.
// Basis sin(k_m r), k_m = (m + 1/2) pi / R: odd at the origin, phi' = 0 at R (r A tends to a
// constant because of the 1/r tail of the long-range field).
class RadialGrid {
 public:
  RadialGrid() = default;
  RadialGrid(int n, double R);
  int n() const { return n_; }
  double radius() const { return R_; }
  double spacing() const { return R_ / n_; }
  double r(int j) const { return (j + 1) * spacing(); }
  double k(int m) const;
  // quadrature weight for int_0^R f dr (half weight at r = R)
  double weight(int j) const { return j == n_ - 1 ? 0.5 * spacing() : spacing(); }
  bool operator==(const RadialGrid& o) const { return n_ == o.n_ && R_ == o.R_; }

 private:
  int n_ = 0;
  double R_ = 0.0;
};

struct RadialState {
  RadialGrid grid;
  std::vector<cplx> psi;          // r u at r_j
  std::vector<double> phi_hat;    // sine coefficients of r A
  std::vector<double> phid_hat;   // sine coefficients of r dA
  double time = 0.0;
};

RadialState radial_step(const RadialState& s, double dt);
Conserved radial_conserved(const RadialState& s);
// A, dA, dA/dr at the nodes
struct RadialWave {
  std::vector<double> a, a_t, a_r;
};
RadialWave radial_wave(const RadialState& s);

// sine coefficients of samples f_j and back
std::vector<double> sine_analysis(const RadialGrid& g, const std::vector<double>& f);
std::vector<double> sine_synthesis(const RadialGrid& g, const std::vector<double>& c);

// ---- time stepping and experiments ----

struct DtSchedule {
  double kappa = 5e-3;   // dt = min(dt_max, kappa t)
  double dt_max = 0.05;
  double dt(double t) const;
};

// quantities recorded at each sample time
struct TrajectoryRecord {
  std::string geometry;  // "radial" or "grid"
  double t0 = 0.0, T = 0.0;
  long steps = 0;
  std::vector<double> sample_times;
  std::vector<double> l2, energy;
  std::vector<double> v_l2, v_l4, b_l4, grad_b_l2, dt_b_l2;
  // optional snapshots of u and A at the samples; norms use quad_weights (|f|^p summed with them)
  bool has_snapshots = false;
  std::vector<std::vector<cplx>> u_snapshots;
  std::vector<std::vector<double>> a_snapshots;
  std::vector<double> quad_weights;
};

// thrown when a step produces non-finite values; carries everything recorded so far
struct IntegrationError : NumericalError {
  TrajectoryRecord partial;
  double time;
  IntegrationError(const std::string& what, TrajectoryRecord rec, double t)
      : NumericalError(what), partial(std::move(rec)), time(t) {}
};

enum class Geometry { Auto, Radial, Grid };

struct ExperimentOptions {
  DtSchedule schedule;
  int per_octave = 16;      // samples per factor 2 in t
  bool snapshots = false;
  Geometry geometry = Geometry::Auto;
  int radial_n = 8192;
  double radial_R = 1024.0;
};

// Start at t0 from (u_a, A_0 + A_1, d_t(A_0 + A_1)) and integrate backward to T, recording
// v = u - u_a and B = A - A_a at T 2^{j/per_octave} (and at t0).
TrajectoryRecord scattering_experiment(const ProfileBundle& b, double T, double t0,
                                       const ExperimentOptions& opt = {});

// Samples at the same times in both records are compared.
struct T0Difference {
  double t0_a = 0, t0_b = 0;
  double sup_u_l2 = 0;  // sup_t ||u_a(t) - u_b(t)||_2 over common samples
  double b_l4l4 = 0;    // L^4(L^4) norm of A_a - A_b over the common window
};
struct T0Study {
  std::vector<double> t0_list;
  std::vector<TrajectoryRecord> runs;
  std::vector<T0Difference> pairs;  // consecutive t0 pairs
  DecayFit fit;                     // sup_u_l2 against the smaller t0 of each pair
  bool monotone = false;
};
T0Study t0_convergence_study(const ProfileBundle& b, double T, const std::vector<double>& t0_list,
                             ExperimentOptions opt = {});
T0Difference compare_runs(const TrajectoryRecord& a, const TrajectoryRecord& b);

// sup over samples of t^{1/2} ||v||_2 and the like: the h(t) = t^{-1/2} normalized seminorms
struct Seminorms {
  double v_l2 = 0, v_l4 = 0, b_l4 = 0, grad_b_l2 = 0, dt_b_l2 = 0;
};
Seminorms h_seminorms(const TrajectoryRecord& r);

// Self-convergence of the splitting: constant steps dt, dt/2, dt/4 from the same state against a
// fine reference (dt/32 radial, dt/16 grid) over [t_start, t_start + span]; returns the two error ratios.
struct OrderResult {
  std::vector<double> dts, errors;
  double ratio_1 = 0, ratio_2 = 0;  // err(dt)/err(dt/2), err(dt/2)/err(dt/4)
};
OrderResult radial_order_test(const ProfileBundle& b, double t_start, double span, double dt,
                              const ExperimentOptions& opt = {});
OrderResult grid_order_test(const SystemState& s, double span, double dt);

// L^2 balance for the linear problem i v_t = -(1/2) lap v + A_a v + f with f = -R_1, v(t0) = 0:
// ||v(T)||^2 - ||v(t0)||^2 against int 2 Im <v, f> dt. Returns both sides.
struct BalanceResult {
  double change = 0, flux = 0;
};
BalanceResult l2_balance(const ProfileBundle& b, double T, double t0, const ExperimentOptions& opt = {});

// initial states built from the bundle
RadialState radial_initial_state(const ProfileBundle& b, double t0, const RadialGrid& g);
SystemState grid_initial_state(const ProfileBundle& b, double t0);

}  // namespace wss
