#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wsscatter/free_wave.hpp"
#include "wsscatter/grid.hpp"

namespace wss {

struct DecaySeries {
  std::vector<double> times;   // strictly increasing, >= 1
  std::vector<double> values;  // >= 0
  std::string label;
  void check() const;
};

// value ~ prefactor * t^exponent on [t_lo, t_hi]
struct DecayFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int points = 0;
  std::string warning;  // non-empty when zeros were floored
};

inline constexpr double kFitFloor = 1e-30;

// least squares on (ln t, ln value) over samples with t_lo <= t <= t_hi
DecayFit fit_decay(const DecaySeries& s, double t_lo, double t_hi);
DecayFit fit_decay(const DecaySeries& s);
// window [t_min, last sample]: drops the warm-up samples
DecayFit fit_decay_after(const DecaySeries& s, double t_min);

// ---- space-time norms ----

// (int_{t_lo}^{t_hi} n(s)^q ds)^{1/q} from samples n(s_i) = ||f(s_i)||_r, trapezoid in s with
// linear interpolation of n at window ends. q = infinity gives the sup.
double spacetime_norm(const std::vector<double>& times, const std::vector<double>& norms, double q,
                      double t_lo, double t_hi);
double spacetime_norm(const DecaySeries& norms, double q, double t_lo, double t_hi);
// fields sampled at `times`; spatial L^r norms first
double spacetime_norm(const std::vector<double>& times, const std::vector<ComplexField>& fields, double q,
                      double r, double t_lo, double t_hi);

// ---- dyadic block estimate ----
// || (prod f_k) s^{-rho}; L^q([t, t_max]) || against C (prod N_k) h(t)^n t^{mu - rho}, h(t) = t^{-lambda},
// N_k = sup_{t' >= t} ||f_k; L^{q_k}([t', t_max])|| / h(t'), blocks [t 2^j, t 2^{j+1}].
struct DyadicFactor {
  std::function<double(double)> f;  // scalar function of time
  double q = 2.0;                   // its Lebesgue exponent q_k (may be infinity)
};
struct DyadicResult {
  double direct = 0;    // the left side, computed directly
  double blocks = 0;    // l^q over blocks of prod ||f_k; L^{q_k}(I_j)|| ||s^{-rho}; L^{1/mu}(I_j)||
  double estimate = 0;  // right side with the constant
  double constant = 0;
  double mu = 0;
  std::vector<double> n_k;
  bool holds = false;  // direct <= blocks <= estimate (within 1e-12 relative)
};
double dyadic_constant(double q, int n, double lambda, double rho, double mu);
DyadicResult dyadic_norm_bound(const std::vector<DyadicFactor>& factors, double q, double rho, double lambda,
                               double t, double t_max, int per_octave = 64);

// ---- Strichartz spot checks ----

// Gaussian wave packets with random centre, width and momentum, unit L^2 norm
std::vector<ComplexField> random_packets(const Grid& g, int count, std::uint64_t seed);

struct StrichartzResult {
  double ratio = 0;          // max over the batch of ||U(t) u0; L^q([0, window], L^r)|| / ||u0||_2
  double ratio_enlarged = 0; // same over [0, factor * window]
  double growth = 0;         // ratio_enlarged / ratio
};
// admissible iff 0 <= 2/q = 3/2 - 3/r <= 1
bool strichartz_admissible(double q, double r);
StrichartzResult strichartz_check(const std::vector<ComplexField>& u0, double q, double r, double window,
                                  double factor = 2.0, int samples = 64);

// B from zero data with box B = F on [0, window] (and [0, factor * window]), by exact wave flow with
// the source frozen at step midpoints
struct WaveStrichartzResult {
  double lhs_l4 = 0, rhs_l43 = 0, ratio_l4 = 0;          // B in L^4 L^4 against F in L^{4/3} L^{4/3}
  double lhs_energy = 0, rhs_l1l2 = 0, ratio_energy = 0; // sup (||grad B|| v ||dB||) against F in L^1 L^2
  double ratio_l4_enlarged = 0, ratio_energy_enlarged = 0;
};
WaveStrichartzResult wave_strichartz_check(const Grid& g, const std::function<RealField(double)>& source,
                                           double window, double factor = 2.0, int steps = 200);

// ---- free-wave decay ----
// ||A_0(t)||_{W^{k,r}} (k = 0 or 1, r may be infinity) from the radial closed form, fitted over `times`
DecaySeries free_wave_norms(const RadialFreeWave& fw, double r, int k, const std::vector<double>& times);
DecayFit free_wave_decay_check(const RadialFreeWave& fw, double r, int k, const std::vector<double>& times);

// ---- verdicts ----
struct Verdict {
  std::string name;
  double value = 0;
  std::string comparison;  // "<=", ">=", "in"
  double lo = 0, hi = 0;   // threshold (hi only for "in")
  std::string status;      // "pass", "fail", "skip"
  std::string note;
};
Verdict verdict_le(const std::string& name, double value, double bound, std::string note = "");
Verdict verdict_ge(const std::string& name, double value, double bound, std::string note = "");
Verdict verdict_in(const std::string& name, double value, double lo, double hi, std::string note = "");
Verdict verdict_skip(const std::string& name, std::string note);
std::string verdicts_json(const std::vector<Verdict>& v);

}  // namespace wss
