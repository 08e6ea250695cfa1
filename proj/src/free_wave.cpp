#include "wsscatter/free_wave.hpp"

#include <algorithm>
#include <cmath>

namespace wss {

RadialFreeWave::RadialFreeWave(GaussPoly f, GaussPoly g, std::array<double, 3> center)
    : f_(std::move(f)), g_(std::move(g)), c_(center) {
  F0_ = f_.times_z();
  F1_ = F0_.derivative();
  F2_ = F1_.derivative();
  F3_ = F2_.derivative();
  F4_ = F3_.derivative();
  F5_ = F4_.derivative();
  Fg0_ = g_.times_z();
  Fg1_ = Fg0_.derivative();
  Fg2_ = Fg1_.derivative();
  Fg3_ = Fg2_.derivative();
  Fg4_ = Fg3_.derivative();
}

double RadialFreeWave::scale() const {
  double b = 0.0;
  if (!f_.is_zero()) b = std::max(b, f_.beta());
  if (!g_.is_zero()) b = std::max(b, g_.beta());
  return b > 0.0 ? 1.0 / std::sqrt(2.0 * b) : 1.0;
}

RadialFreeWave::Value RadialFreeWave::eval(double rho, double t) const {
  Value v;
  const double eps = 1e-4 * scale();
  if (!f_.is_zero()) {
    if (rho < eps) {
      double r2 = rho * rho;
      // odd Taylor series of F in rho, r^4 terms kept where they are cheap
      v.a += F1_(t) + F3_(t) * r2 / 6.0 + F5_(t) * r2 * r2 / 120.0;
      v.a_r += F3_(t) * rho / 3.0 + F5_(t) * r2 * rho / 30.0;
      v.a_t += F2_(t) + F4_(t) * r2 / 6.0;
      v.a_tt += F3_(t) + F5_(t) * r2 / 6.0;
    } else {
      double p = rho + t, m = rho - t;
      double U = (F0_(p) + F0_(m)) / (2.0 * rho);
      v.a += U;
      v.a_t += (F1_(p) - F1_(m)) / (2.0 * rho);
      v.a_r += (F1_(p) + F1_(m)) / (2.0 * rho) - U / rho;
      v.a_tt += (F2_(p) + F2_(m)) / (2.0 * rho);
    }
  }
  if (!g_.is_zero()) {
    if (rho < eps) {
      double r2 = rho * rho;
      v.a += Fg0_(t) + Fg2_(t) * r2 / 6.0 + Fg4_(t) * r2 * r2 / 120.0;
      v.a_r += Fg2_(t) * rho / 3.0 + Fg4_(t) * r2 * rho / 30.0;
      v.a_t += Fg1_(t) + Fg3_(t) * r2 / 6.0;
      v.a_tt += Fg2_(t) + Fg4_(t) * r2 / 6.0;
    } else {
      double p = rho + t, m = rho - t;
      double V = (g_.primitive_z(p) - g_.primitive_z(m)) / (2.0 * rho);
      v.a += V;
      v.a_t += (Fg0_(p) + Fg0_(m)) / (2.0 * rho);
      v.a_r += (Fg0_(p) - Fg0_(m)) / (2.0 * rho) - V / rho;
      v.a_tt += (Fg1_(p) - Fg1_(m)) / (2.0 * rho);
    }
  }
  return v;
}

WaveState RadialFreeWave::sample(const Grid& grid, double t) const {
  WaveState w{RealField(grid), RealField(grid), t};
  const int n = grid.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double dx = grid.coord(i) - c_[0], dy = grid.coord(j) - c_[1], dz = grid.coord(k) - c_[2];
        Value v = eval(std::sqrt(dx * dx + dy * dy + dz * dz), t);
        w.a(i, j, k) = v.a;
        w.a_dot(i, j, k) = v.a_t;
      }
  return w;
}

RealField RadialFreeWave::sample_data(const Grid& grid) const {
  return wss::sample<double>(grid, [&](double x, double y, double z) {
    double dx = x - c_[0], dy = y - c_[1], dz = z - c_[2];
    return f_(std::sqrt(dx * dx + dy * dy + dz * dz));
  });
}

RealField RadialFreeWave::sample_data_dot(const Grid& grid) const {
  return wss::sample<double>(grid, [&](double x, double y, double z) {
    double dx = x - c_[0], dy = y - c_[1], dz = z - c_[2];
    return g_(std::sqrt(dx * dx + dy * dy + dz * dz));
  });
}

}  // namespace wss
