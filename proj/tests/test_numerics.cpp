#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "reilly_lab/numerics.hpp"
#include "reilly_lab/operators.hpp"

using namespace reilly_lab;

TEST(Simpson, IntegratesCubicsExactlyForAnyNodeCount) {
  for (std::size_t n : {3u, 4u, 5u, 6u, 11u, 250u, 251u}) {
    Samples t = linspace(-1.0, 2.0, n);
    Samples w = simpson_weights(n, 3.0 / (n - 1));
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * (t[i] * t[i] * t[i] - 2 * t[i] + 1);
    // int_{-1}^{2} t^3 - 2t + 1 = (16-1)/4 - (4-1) + 3
    EXPECT_NEAR(s, 15.0 / 4, 1e-12) << n;
  }
}

TEST(Simpson, FourthOrderOnExponential) {
  double e1 = 0, e2 = 0;
  for (std::size_t n : {101u, 201u}) {
    Samples t = linspace(0, 1, n);
    Samples w = simpson_weights(n, 1.0 / (n - 1));
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::exp(t[i]);
    (n == 101 ? e1 : e2) = std::abs(s - (std::exp(1.0) - 1));
  }
  EXPECT_GT(std::log2(e1 / e2), 3.8);
}

TEST(FiniteDifference, FourthOrderStencilsExactOnQuartics) {
  const std::size_t n = 12;
  Samples t = linspace(0.0, 1.1, n);
  double h = 0.1;
  Samples u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 1 - t[i] + 2 * std::pow(t[i], 2) - 3 * std::pow(t[i], 3) + 0.5 * std::pow(t[i], 4);
  Samples d1 = fd4_first(u, h), d2 = fd4_second(u, h);
  for (std::size_t i = 0; i < n; ++i) {
    double x = t[i];
    EXPECT_NEAR(d1[i], -1 + 4 * x - 9 * x * x + 2 * x * x * x, 1e-11) << i;
    EXPECT_NEAR(d2[i], 4 - 18 * x + 6 * x * x, 1e-9) << i;
  }
}

TEST(SpectralDerivative, ExactOnTrigPolynomials) {
  const std::size_t m = 64;
  Samples th = uniform_angles(m), u(m);
  for (std::size_t k = 0; k < m; ++k) u[k] = std::cos(3 * th[k]) + 0.5 * std::sin(7 * th[k]);
  Samples d1 = spectral_derivative(u, 1), d2 = spectral_derivative(u, 2);
  for (std::size_t k = 0; k < m; ++k) {
    EXPECT_NEAR(d1[k], -3 * std::sin(3 * th[k]) + 3.5 * std::cos(7 * th[k]), 1e-12);
    EXPECT_NEAR(d2[k], -9 * std::cos(3 * th[k]) - 24.5 * std::sin(7 * th[k]), 1e-11);
  }
}

TEST(SpectralDerivative, MatrixAgreesWithFft) {
  const std::size_t m = 32;
  Samples th = uniform_angles(m), u(m);
  for (std::size_t k = 0; k < m; ++k) u[k] = std::exp(std::sin(th[k]));
  Eigen::MatrixXd D = fourier_diff_matrix(m);
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(u.data(), m);
  Eigen::VectorXd y = D * x;
  Samples d = spectral_derivative(u, 1);
  for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(y[k], d[k], 1e-12);
  EXPECT_LT((D + D.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FourierCoefficients, RecoverSeries) {
  const std::size_t m = 32;
  Samples th = uniform_angles(m), u(m);
  for (std::size_t k = 0; k < m; ++k) u[k] = 2 + 0.25 * std::cos(2 * th[k]) - 0.125 * std::sin(5 * th[k]);
  FourierCoefficients c = fourier_coefficients(u);
  EXPECT_NEAR(c.a[0], 2, 1e-14);
  EXPECT_NEAR(c.a[2], 0.25, 1e-14);
  EXPECT_NEAR(c.b[5], -0.125, 1e-14);
  EXPECT_NEAR(c.a[3], 0, 1e-14);
}

TEST(Tridiagonal, PivotingSolverMatchesDense) {
  SeededRng rng(7);
  const std::size_t n = 40;
  Samples a(n, 0), d(n), c(n, 0), b(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = rng.uniform(-1, 1);  // not diagonally dominant: forces pivoting
    A(i, i) = d[i];
    if (i > 0) A(i, i - 1) = a[i] = rng.uniform(-2, 2);
    if (i + 1 < n) A(i, i + 1) = c[i] = rng.uniform(-2, 2);
    b[i] = rng.uniform(-1, 1);
  }
  Samples x = detail::gtsv(a, d, c, b);
  Eigen::VectorXd bx = Eigen::Map<Eigen::VectorXd>(b.data(), n);
  Eigen::VectorXd ref = A.fullPivLu().solve(bx);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-9 * (1 + std::abs(ref[i])));
}

TEST(Rng, ReproducibleStreams) {
  SeededRng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Convergence, ObservedOrders) {
  auto p = observed_orders({0.1, 0.05, 0.025}, {1e-2, 2.5e-3, 6.25e-4});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0], 2.0, 1e-12);
  EXPECT_NEAR(p[1], 2.0, 1e-12);
}
