#pragma once

#include <array>

#include "wsscatter/gauss_poly.hpp"
#include "wsscatter/grid.hpp"

namespace wss {

// Free wave with radial data A_+ = f(|x-c|), dA_+ = g(|x-c|), f and g even Gauss-polynomials.
// Evaluated in closed form via the radial d'Alembert formula
//   cos(wt) f  -> [F(r+t) + F(r-t)] / 2r,       F(z) = z f(z)
//   sin(wt)/w g -> [G(r+t) - G(r-t)] / 2r,      G' = z g
class RadialFreeWave {
 public:
  RadialFreeWave() = default;
  RadialFreeWave(GaussPoly f, GaussPoly g, std::array<double, 3> center = {0, 0, 0});

  struct Value {
    double a = 0;     // A_0
    double a_r = 0;   // radial derivative
    double a_t = 0;   // time derivative
    double a_tt = 0;  // second time derivative (= Laplacian)
  };
  Value eval(double rho, double t) const;

  const std::array<double, 3>& center() const { return c_; }
  bool is_zero() const { return f_.is_zero() && g_.is_zero(); }
  // width scale used for breakpoints in radial quadrature
  double scale() const;

  WaveState sample(const Grid& grid, double t) const;
  RealField sample_data(const Grid& grid) const;      // A_+
  RealField sample_data_dot(const Grid& grid) const;  // dA_+

 private:
  GaussPoly f_, g_;
  GaussPoly F0_, F1_, F2_, F3_, F4_, F5_;  // z f and derivatives
  GaussPoly Fg0_, Fg1_, Fg2_, Fg3_, Fg4_;  // z g and derivatives
  std::array<double, 3> c_{0, 0, 0};
};

}  // namespace wss
