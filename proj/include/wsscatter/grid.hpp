#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace wss {

using cplx = std::complex<double>;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// error kinds; callers match on type, messages are for humans
struct ShapeError : std::runtime_error { using std::runtime_error::runtime_error; };
struct DomainError : std::domain_error { using std::domain_error::domain_error; };
struct AliasingError : std::runtime_error {
  double mass_fraction;
  AliasingError(const std::string& what, double frac) : std::runtime_error(what), mass_fraction(frac) {}
};
struct NumericalError : std::runtime_error { using std::runtime_error::runtime_error; };

// 64-byte aligned storage so FFTW can use its SIMD codelets on any field
template <class T>
struct AlignedAlloc {
  using value_type = T;
  AlignedAlloc() = default;
  template <class U> AlignedAlloc(const AlignedAlloc<U>&) {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{64}));
  }
  void deallocate(T* p, std::size_t) { ::operator delete(p, std::align_val_t{64}); }
  template <class U> bool operator==(const AlignedAlloc<U>&) const { return true; }
};

template <class T>
using avector = std::vector<T, AlignedAlloc<T>>;

// Cubic periodic box [-L/2, L/2)^3 with n points per axis. Point i sits at (i - n/2) h,
// so the origin is a grid point.
class Grid {
 public:
  Grid() = default;
  Grid(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return L_; }
  double spacing() const { return L_ / n_; }
  std::size_t size() const { return std::size_t(n_) * n_ * n_; }
  double cell_volume() const { double h = spacing(); return h * h * h; }

  double coord(int i) const { return (i - n_ / 2) * spacing(); }
  // wavenumber of FFT index m (standard order, Nyquist at m = n/2 carries -pi n / L)
  double wavenumber(int m) const;
  std::size_t index(int i, int j, int k) const { return (std::size_t(i) * n_ + j) * n_ + k; }

  bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int n_ = 0;
  double L_ = 0.0;
};

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g, T value = T{}) : grid_(g), data_(g.size(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T& operator()(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }

  avector<T>& samples() { return data_; }
  const avector<T>& samples() const { return data_; }

  Field& operator+=(const Field& o) { check(o); for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i]; return *this; }
  Field& operator-=(const Field& o) { check(o); for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i]; return *this; }
  Field& operator*=(T s) { for (auto& v : data_) v *= s; return *this; }

  void check(const Field& o) const {
    if (o.grid_ != grid_ || o.size() != size()) throw ShapeError("field grid mismatch");
  }

 private:
  Grid grid_;
  avector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

template <class T>
Field<T> operator+(Field<T> a, const Field<T>& b) { a += b; return a; }
template <class T>
Field<T> operator-(Field<T> a, const Field<T>& b) { a -= b; return a; }

struct WaveState {
  RealField a;
  RealField a_dot;
  double time = 0.0;
};

// Fill a field from a function of the physical coordinates.
template <class T, class F>
Field<T> sample(const Grid& g, F&& f) {
  Field<T> out(g);
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    double x = g.coord(i);
    for (int j = 0; j < n; ++j) {
      double y = g.coord(j);
      for (int k = 0; k < n; ++k) out(i, j, k) = f(x, y, g.coord(k));
    }
  }
  return out;
}

RealField real_part(const ComplexField& f);
ComplexField to_complex(const RealField& f);
// largest |Im| relative to largest |f|
double imag_residue(const ComplexField& f);
void require_finite(const ComplexField& f, const std::string& where);
void require_finite(const RealField& f, const std::string& where);

}  // namespace wss
