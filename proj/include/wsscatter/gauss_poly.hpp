#pragma once

#include <vector>

namespace wss {

// f(z) = (sum_k p_k z^k) exp(-beta z^2). Closed under products and derivatives, which is
// all the radial profile machinery needs.
class GaussPoly {
 public:
  GaussPoly() = default;
  GaussPoly(std::vector<double> coeffs, double beta);

  double operator()(double z) const;
  GaussPoly derivative() const;
  GaussPoly operator*(const GaussPoly& o) const;
  GaussPoly operator*(double s) const;
  GaussPoly times_z() const;
  // f(z)/z; requires p_0 == 0
  GaussPoly divide_z() const;
  GaussPoly operator+(const GaussPoly& o) const;  // same beta required

  // antiderivative of z f(z) from 0; requires an even polynomial and beta > 0
  double primitive_z(double z) const;
  // value of primitive_z at infinity
  double primitive_z_inf() const;

  double beta() const { return beta_; }
  const std::vector<double>& coeffs() const { return p_; }
  bool is_zero() const;

 private:
  std::vector<double> p_;
  double beta_ = 0.0;
};

}  // namespace wss
