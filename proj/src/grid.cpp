#include "wsscatter/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wss {

Grid::Grid(int n, double box_length) : n_(n), L_(box_length) {
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("grid: n_per_axis must be a power of two >= 2");
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw DomainError("grid: box_length must be positive");
}

double Grid::wavenumber(int m) const {
  int s = m < n_ / 2 ? m : m - n_;
  return 2.0 * std::numbers::pi / L_ * s;
}

RealField real_part(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

double imag_residue(const ComplexField& f) {
  double mx = 0.0, im = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mx = std::max(mx, std::abs(f[i]));
    im = std::max(im, std::abs(f[i].imag()));
  }
  return mx > 0.0 ? im / mx : 0.0;
}

void require_finite(const ComplexField& f, const std::string& where) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag()))
      throw NumericalError(where + ": non-finite sample");
}

void require_finite(const RealField& f, const std::string& where) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i])) throw NumericalError(where + ": non-finite sample");
}

}  // namespace wss
