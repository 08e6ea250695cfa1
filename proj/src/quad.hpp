#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace wss::detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on P_m
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= m; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

inline const std::pair<std::vector<double>, std::vector<double>>& gl16() {
  static const auto rule = [] {
    std::pair<std::vector<double>, std::vector<double>> r;
    gauss_legendre(16, r.first, r.second);
    return r;
  }();
  return rule;
}

// composite 16-point rule on [lo, hi]
template <class F>
double integrate(double lo, double hi, int panels, F&& f) {
  const auto& [gx, gw] = gl16();
  double s = 0.0, d = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * d;
    for (std::size_t i = 0; i < gx.size(); ++i) s += gw[i] * 0.5 * d * f(a + 0.5 * d * (gx[i] + 1.0));
  }
  return s;
}

}  // namespace wss::detail
