#pragma once

#include <cmath>

namespace wss::detail {

// coefficients of the exact flow of  X'' = -k^2 X + S  (S constant) over tau:
//   X(tau)     = c X + sn X' + oc S
//   X'(tau)    = -k^2 sn X + c X' + sn S
//   int_0^tau X = sn X + oc X' + cu S
struct WaveCoeffs {
  double c, sn, oc, cu;
};

inline WaveCoeffs wave_coeffs(double k, double tau) {
  const double x = k * tau;
  WaveCoeffs w;
  w.c = std::cos(x);
  if (std::abs(x) < 1e-2) {
    // series: the closed forms cancel catastrophically here
    const double t2 = tau * tau, k2 = k * k;
    w.sn = tau * (1.0 - k2 * t2 / 6.0 + k2 * k2 * t2 * t2 / 120.0);
    w.oc = t2 * (0.5 - k2 * t2 / 24.0 + k2 * k2 * t2 * t2 / 720.0);
    w.cu = t2 * tau * (1.0 / 6.0 - k2 * t2 / 120.0 + k2 * k2 * t2 * t2 / 5040.0);
  } else {
    const double s = std::sin(x), h = std::sin(0.5 * x);
    w.sn = s / k;
    w.oc = 2.0 * h * h / (k * k);
    w.cu = (tau - w.sn) / (k * k);
  }
  return w;
}

}  // namespace wss::detail
