#pragma once

#include <array>
#include <functional>

#include "wsscatter/grid.hpp"

namespace wss {

// Unitary DFT coefficients in FFTW's standard index order:
// sum |c|^2 == sum |f|^2 over the grid.
struct Spectrum {
  Grid grid;
  avector<cplx> c;
};

// Thread count for the FFT backend. Read once from WS_SCATTER_THREADS unless set explicitly.
void set_fft_threads(int n);
int fft_threads();

// Raw unnormalized transforms; in and out may alias. Used by hot loops that manage their own buffers.
void fft_forward(const Grid& g, const cplx* in, cplx* out);
void fft_backward(const Grid& g, const cplx* in, cplx* out);
// real <-> half-complex (n x n x (n/2+1)); c2r does not modify its input
void fft_r2c(const Grid& g, const double* in, cplx* out);
void fft_c2r(const Grid& g, const cplx* in, double* out);

// 1D real-to-real transforms (FFTW conventions, unnormalized) of length n on `howmany` interleaved
// sequences: element j of sequence q sits at in[j * howmany + q]. Used by the radial solver.
enum class R2R { DST2, DST3, DCT2 };
void fft_r2r(int n, R2R kind, int howmany, const double* in, double* out);

Spectrum forward_transform(const ComplexField& f);
ComplexField inverse_transform(const Spectrum& s);

// multiply the spectrum by m(kx, ky, kz)
ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(double, double, double)>& m);

ComplexField free_schrodinger(const ComplexField& u, double t);
WaveState wave_propagate(const WaveState& w, double dt);
// (1/2)(||dA||^2 + ||w A||^2) with the same |k| the propagator uses (Nyquist included)
double wave_energy(const WaveState& w);
// ||w f||_2^2 = sum |k|^2 |f_k|^2 (Parseval)
double gradient_norm_sq(const ComplexField& f);
double gradient_norm_sq(const RealField& f);

enum class Interp { Trigonometric, Trilinear };

// x -> f(x/t). Throws AliasingError when f is not negligible outside the central box of side L/t.
RealField dilate(const RealField& f, double t, Interp mode = Interp::Trigonometric,
                 double support_threshold = 1e-12);
ComplexField dilate(const ComplexField& f, double t, Interp mode = Interp::Trigonometric,
                    double support_threshold = 1e-12);
// M(t) D(t) f = (it)^{-3/2} e^{i|x|^2/2t} f(x/t)
ComplexField md_apply(const ComplexField& f, double t, Interp mode = Interp::Trigonometric,
                      double support_threshold = 1e-12);
// principal branch of (it)^{-3/2}
cplx md_prefactor(double t);

std::array<ComplexField, 3> gradient(const ComplexField& f);
std::array<RealField, 3> gradient(const RealField& f);
ComplexField laplacian(const ComplexField& f);
RealField laplacian(const RealField& f);

double lebesgue_norm(const ComplexField& f, double r);
double lebesgue_norm(const RealField& f, double r);
// sqrt(sum_j ||f_j||_2^2)
double l2_norm(const std::array<ComplexField, 3>& f);
double l2_norm(const std::array<RealField, 3>& f);

}  // namespace wss
