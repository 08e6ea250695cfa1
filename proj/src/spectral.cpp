#include "wsscatter/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace wss {

namespace {

enum class Kind { Fwd, Bwd, R2C, C2R };

std::mutex plan_mutex;
int thread_count = 0;  // 0: not initialised

int env_threads() {
  const char* s = std::getenv("WS_SCATTER_THREADS");
  if (!s) return 1;
  int v = std::atoi(s);
  return v > 0 ? v : 1;
}

void init_threads_locked() {
  if (thread_count > 0) return;
  fftw_init_threads();
  thread_count = env_threads();
  fftw_plan_with_nthreads(thread_count);
}

// Plans are made with FFTW_ESTIMATE: measured plans are not reproducible run to run,
// which would break bit-identical outputs.
fftw_plan get_plan(int n, Kind kind, bool inplace) {
  static std::map<std::tuple<int, int, bool, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  init_threads_locked();
  auto key = std::make_tuple(n, int(kind), inplace, thread_count);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t nc = std::size_t(n) * n * n;
  std::size_t nh = std::size_t(n) * n * (n / 2 + 1);
  fftw_plan p = nullptr;
  unsigned flags = FFTW_ESTIMATE;
  switch (kind) {
    case Kind::Fwd:
    case Kind::Bwd: {
      auto* a = fftw_alloc_complex(nc);
      auto* b = inplace ? a : fftw_alloc_complex(nc);
      p = fftw_plan_dft_3d(n, n, n, a, b, kind == Kind::Fwd ? FFTW_FORWARD : FFTW_BACKWARD, flags);
      if (b != a) fftw_free(b);
      fftw_free(a);
      break;
    }
    case Kind::R2C: {
      auto* a = fftw_alloc_real(nc);
      auto* b = fftw_alloc_complex(nh);
      p = fftw_plan_dft_r2c_3d(n, n, n, a, b, flags);
      fftw_free(a);
      fftw_free(b);
      break;
    }
    case Kind::C2R: {
      auto* a = fftw_alloc_complex(nh);
      auto* b = fftw_alloc_real(nc);
      p = fftw_plan_dft_c2r_3d(n, n, n, a, b, flags);
      fftw_free(a);
      fftw_free(b);
      break;
    }
  }
  if (!p) throw NumericalError("fftw: plan creation failed");
  cache[key] = p;
  return p;
}

fftw_complex* fc(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* fc(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

}  // namespace

void set_fft_threads(int n) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  if (thread_count == 0) fftw_init_threads();
  thread_count = std::max(1, n);
  fftw_plan_with_nthreads(thread_count);
}

int fft_threads() {
  std::lock_guard<std::mutex> lock(plan_mutex);
  init_threads_locked();
  return thread_count;
}

void fft_forward(const Grid& g, const cplx* in, cplx* out) {
  fftw_execute_dft(get_plan(g.n(), Kind::Fwd, in == out), fc(in), fc(out));
}

void fft_backward(const Grid& g, const cplx* in, cplx* out) {
  fftw_execute_dft(get_plan(g.n(), Kind::Bwd, in == out), fc(in), fc(out));
}

void fft_r2c(const Grid& g, const double* in, cplx* out) {
  fftw_execute_dft_r2c(get_plan(g.n(), Kind::R2C, false), const_cast<double*>(in), fc(out));
}

void fft_c2r(const Grid& g, const cplx* in, double* out) {
  // c2r destroys its input
  thread_local avector<cplx> scratch;
  std::size_t nh = std::size_t(g.n()) * g.n() * (g.n() / 2 + 1);
  scratch.assign(in, in + nh);
  fftw_execute_dft_c2r(get_plan(g.n(), Kind::C2R, false), fc(scratch.data()), out);
}

void fft_r2r(int n, R2R kind, int howmany, const double* in, double* out) {
  static std::map<std::tuple<int, int, int, bool>, fftw_plan> cache;
  const bool inplace = in == out;
  fftw_plan p = nullptr;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    init_threads_locked();
    auto key = std::make_tuple(n, int(kind), howmany, inplace);
    auto it = cache.find(key);
    if (it != cache.end()) {
      p = it->second;
    } else {
      fftw_r2r_kind k = kind == R2R::DST2 ? FFTW_RODFT10 : kind == R2R::DST3 ? FFTW_RODFT01 : FFTW_REDFT10;
      auto* a = fftw_alloc_real(std::size_t(n) * howmany);
      auto* b = inplace ? a : fftw_alloc_real(std::size_t(n) * howmany);
      // short 1D transforms: threads only cost
      fftw_plan_with_nthreads(1);
      p = fftw_plan_many_r2r(1, &n, howmany, a, nullptr, howmany, 1, b, nullptr, howmany, 1, &k,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_plan_with_nthreads(thread_count);
      if (b != a) fftw_free(b);
      fftw_free(a);
      if (!p) throw NumericalError("fftw: r2r plan creation failed");
      cache[key] = p;
    }
  }
  fftw_execute_r2r(p, const_cast<double*>(in), out);
}

Spectrum forward_transform(const ComplexField& f) {
  Spectrum s{f.grid(), avector<cplx>(f.size())};
  fft_forward(f.grid(), f.data(), s.c.data());
  const double scale = 1.0 / std::sqrt(double(f.size()));
  for (auto& v : s.c) v *= scale;
  return s;
}

ComplexField inverse_transform(const Spectrum& s) {
  if (s.c.size() != s.grid.size()) throw ShapeError("inverse_transform: coefficient count does not match grid");
  ComplexField f(s.grid);
  fft_backward(s.grid, s.c.data(), f.data());
  const double scale = 1.0 / std::sqrt(double(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale;
  return f;
}

ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(double, double, double)>& m) {
  const Grid& g = f.grid();
  const int n = g.n();
  ComplexField out(g);
  fft_forward(g, f.data(), out.data());
  const double scale = 1.0 / double(g.size());
  for (int i = 0; i < n; ++i) {
    double kx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      double ky = g.wavenumber(j);
      for (int k = 0; k < n; ++k) out(i, j, k) *= m(kx, ky, g.wavenumber(k)) * scale;
    }
  }
  fft_backward(g, out.data(), out.data());
  return out;
}

ComplexField free_schrodinger(const ComplexField& u, double t) {
  if (!std::isfinite(t)) throw DomainError("free_schrodinger: t must be finite");
  if (t == 0.0) return u;
  return apply_multiplier(u, [t](double a, double b, double c) {
    double k2 = a * a + b * b + c * c;
    return std::polar(1.0, -0.5 * t * k2);
  });
}

WaveState wave_propagate(const WaveState& w, double dt) {
  w.a.check(w.a_dot);
  if (!std::isfinite(dt)) throw DomainError("wave_propagate: dt must be finite");
  const Grid& g = w.a.grid();
  const int n = g.n();
  const int nh = n / 2 + 1;
  avector<cplx> A(std::size_t(n) * n * nh), V(A.size());
  fft_r2c(g, w.a.data(), A.data());
  fft_r2c(g, w.a_dot.data(), V.data());
  const double scale = 1.0 / double(g.size());
  for (int i = 0; i < n; ++i) {
    double kx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      double ky = g.wavenumber(j);
      for (int k = 0; k < nh; ++k) {
        double kz = g.wavenumber(k);
        double om = std::sqrt(kx * kx + ky * ky + kz * kz);
        double c = std::cos(om * dt);
        double sinc, msin;  // sin(om dt)/om and -om sin(om dt)
        if (om == 0.0) {
          sinc = dt;
          msin = 0.0;
        } else {
          double s = std::sin(om * dt);
          sinc = s / om;
          msin = -om * s;
        }
        std::size_t idx = (std::size_t(i) * n + j) * nh + k;
        cplx a = A[idx], v = V[idx];
        A[idx] = (c * a + sinc * v) * scale;
        V[idx] = (msin * a + c * v) * scale;
      }
    }
  }
  WaveState out{RealField(g), RealField(g), w.time + dt};
  fft_c2r(g, A.data(), out.a.data());
  fft_c2r(g, V.data(), out.a_dot.data());
  return out;
}

namespace {
// sum |k|^2 |F_k|^2 over a half-complex spectrum, counting mirrored modes twice
double half_spectrum_k2(const Grid& g, const avector<cplx>& F) {
  const int n = g.n(), nh = n / 2 + 1;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double kx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      double ky = g.wavenumber(j);
      for (int k = 0; k < nh; ++k) {
        double kz = g.wavenumber(k);
        double mult = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        s += mult * (kx * kx + ky * ky + kz * kz) * std::norm(F[(std::size_t(i) * n + j) * nh + k]);
      }
    }
  }
  return s * g.cell_volume() / double(g.size());
}
}  // namespace

double gradient_norm_sq(const RealField& f) {
  const Grid& g = f.grid();
  avector<cplx> F(std::size_t(g.n()) * g.n() * (g.n() / 2 + 1));
  fft_r2c(g, f.data(), F.data());
  return half_spectrum_k2(g, F);
}

double gradient_norm_sq(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  avector<cplx> F(f.size());
  fft_forward(g, f.data(), F.data());
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double kx = g.wavenumber(i), ky = g.wavenumber(j), kz = g.wavenumber(k);
        s += (kx * kx + ky * ky + kz * kz) * std::norm(F[g.index(i, j, k)]);
      }
  return s * g.cell_volume() / double(g.size());
}

double wave_energy(const WaveState& w) {
  double v = lebesgue_norm(w.a_dot, 2.0);
  return 0.5 * (v * v + gradient_norm_sq(w.a));
}

// ---- dilation ----

namespace {

// sparse rows: for each output index, list of (source index, weight)
struct AxisOp {
  std::vector<std::vector<std::pair<int, double>>> rows;
};

AxisOp axis_operator(const Grid& g, double t, Interp mode) {
  const int n = g.n();
  const double h = g.spacing();
  const double L = g.box_length();
  AxisOp op;
  op.rows.resize(n);
  for (int i = 0; i < n; ++i) {
    double xs = g.coord(i) / t;
    auto& row = op.rows[i];
    if (mode == Interp::Trigonometric) {
      // periodic interpolation kernel with the Nyquist mode split evenly (real kernel)
      for (int j = 0; j < n; ++j) {
        double d = xs - g.coord(j);
        double theta = 2.0 * std::numbers::pi * d / L;
        double s = 1.0;
        for (int m = 1; m < n / 2; ++m) s += 2.0 * std::cos(m * theta);
        s += std::cos(0.5 * n * theta);
        row.emplace_back(j, s / n);
      }
    } else {
      double p = xs / h + n / 2;
      int j0 = int(std::floor(p));
      double fr = p - j0;
      row.emplace_back(((j0 % n) + n) % n, 1.0 - fr);
      if (fr > 0.0) row.emplace_back((((j0 + 1) % n) + n) % n, fr);
    }
  }
  return op;
}

template <class T>
void apply_axis(const AxisOp& op, const Grid& g, const T* in, T* out, int axis) {
  const int n = g.n();
  std::vector<T> line(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto at = [&](int c) -> std::size_t {
        switch (axis) {
          case 0: return g.index(c, a, b);
          case 1: return g.index(a, c, b);
          default: return g.index(a, b, c);
        }
      };
      for (int c = 0; c < n; ++c) line[c] = in[at(c)];
      for (int c = 0; c < n; ++c) {
        T acc{};
        for (auto [j, w] : op.rows[c]) acc += w * line[j];
        out[at(c)] = acc;
      }
    }
}

template <class T>
void check_support(const Field<T>& f, double t, double threshold) {
  const Grid& g = f.grid();
  double mx = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mx = std::max(mx, std::abs(f[i]));
  if (mx == 0.0) return;
  const double half = 0.5 * g.box_length() / t + 1e-12 * g.box_length();
  const int n = g.n();
  double outside = 0.0, total = 0.0;
  bool violated = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double a = std::abs(f(i, j, k));
        total += a * a;
        bool out = std::abs(g.coord(i)) > half || std::abs(g.coord(j)) > half || std::abs(g.coord(k)) > half;
        if (out) {
          outside += a * a;
          if (a > threshold * mx) violated = true;
        }
      }
  if (violated) {
    double frac = outside / total;
    std::ostringstream os;
    os << "dilation aliasing: mass fraction " << frac << " lies outside the central box of side L/t at t = " << t;
    throw AliasingError(os.str(), frac);
  }
}

template <class T>
Field<T> dilate_impl(const Field<T>& f, double t, Interp mode, double threshold) {
  if (!(t >= 1.0)) throw DomainError("dilate: t must be >= 1");
  if (t == 1.0) return f;
  check_support(f, t, threshold);
  const Grid& g = f.grid();
  AxisOp op = axis_operator(g, t, mode);
  Field<T> a(g), b(g);
  apply_axis(op, g, f.data(), a.data(), 0);
  apply_axis(op, g, a.data(), b.data(), 1);
  apply_axis(op, g, b.data(), a.data(), 2);
  return a;
}

}  // namespace

RealField dilate(const RealField& f, double t, Interp mode, double thr) { return dilate_impl(f, t, mode, thr); }
ComplexField dilate(const ComplexField& f, double t, Interp mode, double thr) { return dilate_impl(f, t, mode, thr); }

cplx md_prefactor(double t) {
  return std::polar(std::pow(t, -1.5), -0.75 * std::numbers::pi);
}

ComplexField md_apply(const ComplexField& f, double t, Interp mode, double thr) {
  ComplexField out = dilate(f, t, mode, thr);
  const Grid& g = f.grid();
  const cplx pre = md_prefactor(t);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double r2 = g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j) + g.coord(k) * g.coord(k);
        out(i, j, k) *= pre * std::polar(1.0, r2 / (2.0 * t));
      }
  return out;
}

// ---- derivatives ----

std::array<ComplexField, 3> gradient(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  ComplexField F(g);
  fft_forward(g, f.data(), F.data());
  const double scale = 1.0 / double(g.size());
  std::array<ComplexField, 3> out{ComplexField(g), ComplexField(g), ComplexField(g)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // Nyquist derivative is dropped so real fields stay real
        double kk[3] = {i == n / 2 ? 0.0 : g.wavenumber(i), j == n / 2 ? 0.0 : g.wavenumber(j),
                        k == n / 2 ? 0.0 : g.wavenumber(k)};
        cplx v = F(i, j, k) * scale;
        for (int d = 0; d < 3; ++d) out[d](i, j, k) = cplx(0.0, kk[d]) * v;
      }
  for (auto& o : out) fft_backward(g, o.data(), o.data());
  return out;
}

std::array<RealField, 3> gradient(const RealField& f) {
  auto c = gradient(to_complex(f));
  return {real_part(c[0]), real_part(c[1]), real_part(c[2])};
}

ComplexField laplacian(const ComplexField& f) {
  return apply_multiplier(f, [](double a, double b, double c) { return cplx(-(a * a + b * b + c * c), 0.0); });
}

RealField laplacian(const RealField& f) { return real_part(laplacian(to_complex(f))); }

// ---- norms ----

namespace {
template <class T>
double lnorm(const Field<T>& f, double r) {
  if (!(r >= 1.0)) throw DomainError("lebesgue_norm: r must be >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double s = 0.0;
  if (r == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  } else if (r == 4.0) {
    for (std::size_t i = 0; i < f.size(); ++i) { double q = std::norm(f[i]); s += q * q; }
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), r);
  }
  return std::pow(s * f.grid().cell_volume(), 1.0 / r);
}
}  // namespace

double lebesgue_norm(const ComplexField& f, double r) { return lnorm(f, r); }
double lebesgue_norm(const RealField& f, double r) { return lnorm(f, r); }

double l2_norm(const std::array<ComplexField, 3>& f) {
  double s = 0.0;
  for (auto& c : f) { double v = lebesgue_norm(c, 2.0); s += v * v; }
  return std::sqrt(s);
}

double l2_norm(const std::array<RealField, 3>& f) {
  double s = 0.0;
  for (auto& c : f) { double v = lebesgue_norm(c, 2.0); s += v * v; }
  return std::sqrt(s);
}

}  // namespace wss
