#include <gtest/gtest.h>

#include <cmath>

#include "wsscatter/gauss_poly.hpp"

using namespace wss;

namespace {
// plain composite Simpson, enough for smooth Gaussians
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}
}  // namespace

TEST(GaussPoly, EvalDerivativeProduct) {
  GaussPoly f({1.0, 0.0, -0.5, 0.0, 0.25}, 0.7);
  EXPECT_NEAR(f(0.0), 1.0, 1e-15);
  double z = 1.3;
  double ref = (1.0 - 0.5 * z * z + 0.25 * std::pow(z, 4)) * std::exp(-0.7 * z * z);
  EXPECT_NEAR(f(z), ref, 1e-14);

  GaussPoly d = f.derivative();
  for (double x : {-2.0, -0.3, 0.0, 0.9, 2.5}) {
    double h = 1e-5;
    EXPECT_NEAR(d(x), (f(x + h) - f(x - h)) / (2 * h), 1e-8);
  }
  GaussPoly g({0.0, 2.0}, 0.3);
  GaussPoly p = f * g;
  EXPECT_NEAR(p.beta(), 1.0, 1e-15);
  for (double x : {-1.0, 0.4, 3.0}) EXPECT_NEAR(p(x), f(x) * g(x), 1e-14);
  EXPECT_NEAR(f.times_z()(1.7), 1.7 * f(1.7), 1e-14);
  EXPECT_NEAR(g.divide_z()(1.7), g(1.7) / 1.7, 1e-14);
  EXPECT_THROW(f.divide_z(), std::exception);
  EXPECT_NEAR((f * 3.0)(0.5), 3.0 * f(0.5), 1e-14);
  GaussPoly s = f + GaussPoly({0.0, 1.0}, 0.7);
  EXPECT_NEAR(s(0.8), f(0.8) + 0.8 * std::exp(-0.7 * 0.64), 1e-14);
}

TEST(GaussPoly, PrimitiveMatchesQuadrature) {
  GaussPoly f({1.0, 0.0, -0.5, 0.0, 0.25}, 0.7);
  for (double z : {0.0, 0.5, 1.0, 2.0, 4.0, 9.0, 30.0, -1.5}) {
    double ref = simpson([&](double s) { return s * f(s); }, 0.0, z);
    EXPECT_NEAR(f.primitive_z(z), ref, 1e-11) << z;
  }
  double inf = simpson([&](double s) { return s * f(s); }, 0.0, 40.0, 80000);
  EXPECT_NEAR(f.primitive_z_inf(), inf, 1e-11);
  // a high power stresses the incomplete gamma branch switch
  GaussPoly h({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1.0}, 2.0);
  for (double z : {1.0, 3.0, 6.0}) {
    double ref = simpson([&](double s) { return s * h(s); }, 0.0, z);
    EXPECT_NEAR(h.primitive_z(z), ref, 1e-11 * std::max(1.0, std::abs(ref))) << z;
  }
}

TEST(GaussPoly, ZeroDetection) {
  EXPECT_TRUE(GaussPoly().is_zero());
  EXPECT_TRUE(GaussPoly({0.0, 0.0}, 1.0).is_zero());
  EXPECT_FALSE(GaussPoly({0.0, 1e-300}, 1.0).is_zero());
}
