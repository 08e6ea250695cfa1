#include "wsscatter/gauss_poly.hpp"

#include <cmath>

#include "wsscatter/grid.hpp"

namespace wss {

GaussPoly::GaussPoly(std::vector<double> coeffs, double beta) : p_(std::move(coeffs)), beta_(beta) {
  while (!p_.empty() && p_.back() == 0.0) p_.pop_back();
}

double GaussPoly::operator()(double z) const {
  if (p_.empty()) return 0.0;
  double s = 0.0;
  for (auto it = p_.rbegin(); it != p_.rend(); ++it) s = s * z + *it;
  return s * std::exp(-beta_ * z * z);
}

GaussPoly GaussPoly::derivative() const {
  if (p_.empty()) return GaussPoly({}, beta_);
  // (p e^{-bz^2})' = (p' - 2 b z p) e^{-bz^2}
  std::vector<double> q(p_.size() + 1, 0.0);
  for (std::size_t k = 1; k < p_.size(); ++k) q[k - 1] += k * p_[k];
  for (std::size_t k = 0; k < p_.size(); ++k) q[k + 1] -= 2.0 * beta_ * p_[k];
  return GaussPoly(q, beta_);
}

GaussPoly GaussPoly::operator*(const GaussPoly& o) const {
  if (p_.empty() || o.p_.empty()) return GaussPoly({}, beta_ + o.beta_);
  std::vector<double> q(p_.size() + o.p_.size() - 1, 0.0);
  for (std::size_t a = 0; a < p_.size(); ++a)
    for (std::size_t b = 0; b < o.p_.size(); ++b) q[a + b] += p_[a] * o.p_[b];
  return GaussPoly(q, beta_ + o.beta_);
}

GaussPoly GaussPoly::operator*(double s) const {
  std::vector<double> q = p_;
  for (auto& v : q) v *= s;
  return GaussPoly(q, beta_);
}

GaussPoly GaussPoly::times_z() const {
  std::vector<double> q(p_.size() + 1, 0.0);
  for (std::size_t k = 0; k < p_.size(); ++k) q[k + 1] = p_[k];
  return GaussPoly(q, beta_);
}

GaussPoly GaussPoly::divide_z() const {
  if (p_.empty()) return *this;
  if (p_[0] != 0.0) throw DomainError("GaussPoly::divide_z: nonzero constant term");
  return GaussPoly(std::vector<double>(p_.begin() + 1, p_.end()), beta_);
}

GaussPoly GaussPoly::operator+(const GaussPoly& o) const {
  if (p_.empty()) return o;
  if (o.p_.empty()) return *this;
  if (beta_ != o.beta_) throw DomainError("GaussPoly: sum requires equal exponents");
  std::vector<double> q(std::max(p_.size(), o.p_.size()), 0.0);
  for (std::size_t k = 0; k < p_.size(); ++k) q[k] += p_[k];
  for (std::size_t k = 0; k < o.p_.size(); ++k) q[k] += o.p_[k];
  return GaussPoly(q, beta_);
}

bool GaussPoly::is_zero() const { return p_.empty(); }

namespace {

// normalised lower incomplete gamma P(m+1, Z) * m! = gamma(m+1, Z), integer m
double lower_gamma_int(int m, double Z) {
  double fact = 1.0;
  for (int k = 2; k <= m; ++k) fact *= k;
  if (Z <= 0.0) return 0.0;
  if (Z < m + 30.0) {
    // e^{-Z} sum_{k > m} Z^k / k!
    double term = std::exp(-Z);
    for (int k = 1; k <= m + 1; ++k) term *= Z / k;
    double s = 0.0;
    for (int k = m + 1; k < m + 400; ++k) {
      s += term;
      term *= Z / (k + 1);
      if (term < 1e-18 * s) break;
    }
    return fact * s;
  }
  double term = std::exp(-Z), s = 0.0;
  for (int k = 0; k <= m; ++k) {
    s += term;
    term *= Z / (k + 1);
  }
  return fact * (1.0 - s);
}

}  // namespace

double GaussPoly::primitive_z(double z) const {
  if (p_.empty()) return 0.0;
  if (!(beta_ > 0.0)) throw DomainError("GaussPoly::primitive_z: needs a decaying exponent");
  const double Z = beta_ * z * z;
  double s = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (p_[k] == 0.0) continue;
    if (k % 2 == 1) throw DomainError("GaussPoly::primitive_z: polynomial must be even");
    int m = int(k / 2);
    s += p_[k] * lower_gamma_int(m, Z) / (2.0 * std::pow(beta_, m + 1));
  }
  return s;
}

double GaussPoly::primitive_z_inf() const { return primitive_z(1e3 / std::sqrt(beta_)); }

}  // namespace wss
