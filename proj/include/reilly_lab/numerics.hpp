#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "errors.hpp"

namespace reilly_lab {

using Samples = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---- quadrature ----

// Composite Simpson on a uniform grid; the last three intervals use the
// 3/8 rule when the interval count is odd.
inline Samples simpson_weights(std::size_t n, double h) {
  if (n < 2) throw DomainError("quadrature needs at least two nodes");
  Samples w(n, 0.0);
  std::size_t intervals = n - 1;
  if (intervals == 1) {
    w[0] = w[1] = h / 2;
    return w;
  }
  std::size_t simpson_end = intervals;
  if (intervals % 2 == 1) {
    if (intervals == 3) simpson_end = 0;
    else simpson_end = intervals - 3;
  }
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3;
    w[i + 1] += 4 * h / 3;
    w[i + 2] += h / 3;
  }
  if (simpson_end != intervals) {
    std::size_t i = simpson_end;
    w[i] += 3 * h / 8;
    w[i + 1] += 9 * h / 8;
    w[i + 2] += 9 * h / 8;
    w[i + 3] += 3 * h / 8;
  }
  return w;
}

inline double dot(const Samples& a, const Samples& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sum(const Samples& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}

inline double max_abs(const Samples& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// ---- non-periodic finite differences (4th order, one-sided at ends) ----

inline Samples fd4_first(const Samples& u, double h) {
  const std::size_t n = u.size();
  if (n < 6) throw DomainError("fd4 needs at least six nodes");
  Samples d(n);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * h);
  d[0] = (-25 * u[0] + 48 * u[1] - 36 * u[2] + 16 * u[3] - 3 * u[4]) / (12 * h);
  d[1] = (-3 * u[0] - 10 * u[1] + 18 * u[2] - 6 * u[3] + u[4]) / (12 * h);
  d[n - 1] = -(-25 * u[n - 1] + 48 * u[n - 2] - 36 * u[n - 3] + 16 * u[n - 4] - 3 * u[n - 5]) / (12 * h);
  d[n - 2] = -(-3 * u[n - 1] - 10 * u[n - 2] + 18 * u[n - 3] - 6 * u[n - 4] + u[n - 5]) / (12 * h);
  return d;
}

inline Samples fd4_second(const Samples& u, double h) {
  const std::size_t n = u.size();
  if (n < 6) throw DomainError("fd4 needs at least six nodes");
  const double h2 = 12 * h * h;
  Samples d(n);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-u[i - 2] + 16 * u[i - 1] - 30 * u[i] + 16 * u[i + 1] - u[i + 2]) / h2;
  auto left0 = [&](auto at) {
    return (45 * at(0) - 154 * at(1) + 214 * at(2) - 156 * at(3) + 61 * at(4) - 10 * at(5)) / h2;
  };
  auto left1 = [&](auto at) {
    return (10 * at(0) - 15 * at(1) - 4 * at(2) + 14 * at(3) - 6 * at(4) + at(5)) / h2;
  };
  d[0] = left0([&](std::size_t k) { return u[k]; });
  d[1] = left1([&](std::size_t k) { return u[k]; });
  d[n - 1] = left0([&](std::size_t k) { return u[n - 1 - k]; });
  d[n - 2] = left1([&](std::size_t k) { return u[n - 1 - k]; });
  return d;
}

// ---- periodic differentiation on theta_k = 2 pi k / m ----

inline Samples periodic_fd4_first(const Samples& u, double h) {
  const std::size_t m = u.size();
  Samples d(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto at = [&](long off) { return u[(k + m + off) % m]; };
    d[k] = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h);
  }
  return d;
}

inline Samples periodic_fd4_second(const Samples& u, double h) {
  const std::size_t m = u.size();
  Samples d(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto at = [&](long off) { return u[(k + m + off) % m]; };
    d[k] = (-at(-2) + 16 * at(-1) - 30 * at(0) + 16 * at(1) - at(2)) / (12 * h * h);
  }
  return d;
}

// Derivative of the trigonometric interpolant of order 1 or 2. The Nyquist
// mode is dropped for odd orders.
inline Samples spectral_derivative(const Samples& u, int order, double period = kTwoPi) {
  const std::size_t m = u.size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> F;
  fft.fwd(F, u);
  const double scale = kTwoPi / period;
  for (std::size_t k = 0; k < m; ++k) {
    long kk = (k <= m / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(m);
    if (m % 2 == 0 && k == m / 2 && order % 2 == 1) {
      F[k] = 0.0;
      continue;
    }
    std::complex<double> ik(0.0, scale * static_cast<double>(kk));
    F[k] *= std::pow(ik, order);
  }
  Samples out;
  fft.inv(out, F);
  return out;
}

// Real Fourier coefficients: u = a0 + sum a_k cos k t + b_k sin k t.
struct FourierCoefficients {
  Samples a, b;
};

inline FourierCoefficients fourier_coefficients(const Samples& u) {
  const std::size_t m = u.size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> F;
  fft.fwd(F, u);
  FourierCoefficients c;
  const std::size_t K = m / 2;
  c.a.assign(K + 1, 0.0);
  c.b.assign(K + 1, 0.0);
  c.a[0] = F[0].real() / m;
  for (std::size_t k = 1; k <= K; ++k) {
    double f = (m % 2 == 0 && k == K) ? 1.0 : 2.0;
    c.a[k] = f * F[k].real() / m;
    c.b[k] = (f == 1.0) ? 0.0 : -f * F[k].imag() / m;
  }
  return c;
}

// ---- tridiagonal systems ----

// sub[i] couples row i to i-1 (sub[0] unused), sup[i] couples row i to i+1.
inline Samples thomas_solve(const Samples& sub, const Samples& diag, const Samples& sup, Samples rhs) {
  const std::size_t n = diag.size();
  Samples c(n), d(n);
  double beta = diag[0];
  if (beta == 0.0) throw SingularSystem("zero pivot in tridiagonal solve");
  c[0] = n > 1 ? sup[0] / beta : 0.0;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = diag[i] - sub[i] * c[i - 1];
    if (beta == 0.0 || !std::isfinite(beta)) throw SingularSystem("zero pivot in tridiagonal solve");
    c[i] = i + 1 < n ? sup[i] / beta : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

// ---- reproducible random numbers ----

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}
  // Explicit 53-bit conversion so streams do not depend on the standard
  // library's distribution implementations.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// ---- convergence ----

inline std::vector<double> observed_orders(const std::vector<double>& hs, const std::vector<double>& errs) {
  std::vector<double> p;
  for (std::size_t i = 1; i < hs.size(); ++i)
    p.push_back(std::log(std::abs(errs[i - 1]) / std::abs(errs[i])) / std::log(hs[i - 1] / hs[i]));
  return p;
}

inline Samples linspace(double a, double b, std::size_t n) {
  Samples t(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = a + h * static_cast<double>(i);
  t[n - 1] = b;
  return t;
}

inline Samples uniform_angles(std::size_t m) {
  Samples t(m);
  for (std::size_t k = 0; k < m; ++k) t[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
  return t;
}

}  // namespace reilly_lab
