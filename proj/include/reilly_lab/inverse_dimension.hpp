#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "errors.hpp"

namespace reilly_lab {

// theta = 1/N on [-inf, 1/n]. N itself is never stored.
class InverseDimension {
 public:
  InverseDimension() = default;
  InverseDimension(double theta, int n_ambient = 1) : theta_(theta), n_(n_ambient) {
    if (n_ambient < 1 || n_ambient > 3) throw DomainError("n_ambient must be 1, 2 or 3");
    if (std::isnan(theta) || theta == std::numeric_limits<double>::infinity())
      throw DomainError("theta must lie in [-inf, 1/n]");
    if (theta > 1.0 / n_ambient + 1e-15) throw DomainError("theta exceeds 1/n_ambient");
  }

  static InverseDimension from_N(double N, int n_ambient = 1) {
    if (N == 0.0) return {-std::numeric_limits<double>::infinity(), n_ambient};
    if (std::isinf(N)) return {0.0, n_ambient};
    return {1.0 / N, n_ambient};
  }
  static InverseDimension infinite(int n_ambient = 1) { return {0.0, n_ambient}; }
  static InverseDimension zero_dimension(int n_ambient = 1) {
    return {-std::numeric_limits<double>::infinity(), n_ambient};
  }

  double theta() const { return theta_; }
  int n_ambient() const { return n_; }
  bool is_minus_infinity() const { return std::isinf(theta_); }
  bool is_zero() const { return theta_ == 0.0; }
  bool at_dimension() const { return !is_minus_infinity() && std::abs(theta_ - 1.0 / n_) < 1e-15; }

  // N with the encodings theta = 0 -> inf and theta = -inf -> 0.
  double N() const {
    if (is_zero()) return std::numeric_limits<double>::infinity();
    if (is_minus_infinity()) return 0.0;
    return 1.0 / theta_;
  }

  // N/(N-1) = 1/(1-theta).
  double n_over_n_minus_1() const {
    if (is_minus_infinity()) return 0.0;
    return 1.0 / (1.0 - theta_);
  }
  // (N-1)/N = 1 - theta.
  double n_minus_1_over_n() const {
    if (is_minus_infinity()) return std::numeric_limits<double>::infinity();
    return 1.0 - theta_;
  }
  // 1/(N-n) = theta/(1 - n theta); at theta = 1/n the caller must have V constant.
  double inv_N_minus_n() const {
    if (is_minus_infinity()) return -1.0 / n_;
    if (at_dimension()) return 0.0;
    return theta_ / (1.0 - n_ * theta_);
  }
  // theta * x with -inf * 0 = 0.
  double times(double x) const {
    if (x == 0.0) return 0.0;
    return theta_ * x;
  }
  // N f^{1/N}, read as log f at theta = 0.
  double power_transform(double f) const {
    if (is_zero()) return std::log(f);
    if (is_minus_infinity()) throw DomainError("power transform undefined at N = 0");
    return std::pow(f, theta_) / theta_;
  }

  std::string spell_N() const {
    if (is_zero()) return "inf";
    if (is_minus_infinity()) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", N());
    return buf;
  }

 private:
  double theta_ = 0.0;
  int n_ = 1;
};

}  // namespace reilly_lab
