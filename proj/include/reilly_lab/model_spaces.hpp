#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "inverse_dimension.hpp"
#include "numerics.hpp"

namespace reilly_lab {

inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Coefficient c in Ric_{mu,N} = Ric + Hess V - c dV (x) dV, c = 1/(N-n).
inline double bakry_emery_coefficient(const InverseDimension& theta, int n) {
  return InverseDimension(theta.theta(), n).inv_N_minus_n();
}

// ---------------------------------------------------------------- intervals

struct Potential {
  std::function<double(double)> V, dV, ddV;
  std::string label;
};

inline Potential flat_potential() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, "flat"};
}

inline Potential gaussian_potential(double sigma) {
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  const double s2 = sigma * sigma;
  return {[s2](double t) { return t * t / (2 * s2); }, [s2](double t) { return t / s2; },
          [s2](double) { return 1.0 / s2; }, "gaussian(sigma=" + fmt_g(sigma) + ")"};
}

// V = t^2/2 + t^4/12, so V'' = 1 + t^2.
inline Potential quartic_potential() {
  return {[](double t) { return t * t / 2 + t * t * t * t / 12; },
          [](double t) { return t + t * t * t / 3; }, [](double t) { return 1 + t * t; }, "quartic"};
}

struct IntervalModel {
  double a = 0.0, b = 1.0;
  Samples t, V, dV, ddV;
  std::optional<Samples> rho_field;
  std::string label;

  std::size_t n_pts() const { return t.size(); }
  double h() const { return (b - a) / static_cast<double>(t.size() - 1); }

  Samples density() const {
    Samples w(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) w[i] = std::exp(-V[i]);
    return w;
  }

  Samples ric(const InverseDimension& theta) const {
    const double c = bakry_emery_coefficient(theta, 1);
    if (theta.at_dimension() || (theta.theta() >= 1.0)) {
      for (double d : dV)
        if (d != 0.0) throw DomainError("theta = 1/n requires a constant potential");
    }
    Samples r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = ddV[i] - c * dV[i] * dV[i];
    return r;
  }

  void validate() const {
    if (!(b > a)) throw DomainError("interval needs b > a");
    if (t.size() < 2 || V.size() != t.size() || dV.size() != t.size() || ddV.size() != t.size())
      throw DomainError("interval arrays have inconsistent lengths");
    for (double v : V) {
      double w = std::exp(-v);
      if (!(w > 0) || !std::isfinite(w)) throw DomainError("density must be positive and finite");
    }
    if (rho_field && rho_field->size() != t.size()) throw DomainError("rho_field length mismatch");
  }
};

inline IntervalModel build_interval(double a, double b, std::size_t n_pts, const Potential& p) {
  if (n_pts < 8) throw DomainError("interval model needs at least 8 nodes");
  IntervalModel m;
  m.a = a;
  m.b = b;
  m.t = linspace(a, b, n_pts);
  m.V.resize(n_pts);
  m.dV.resize(n_pts);
  m.ddV.resize(n_pts);
  for (std::size_t i = 0; i < n_pts; ++i) {
    m.V[i] = p.V(m.t[i]);
    m.dV[i] = p.dV(m.t[i]);
    m.ddV[i] = p.ddV(m.t[i]);
  }
  m.label = p.label + "[" + fmt_g(a) + "," + fmt_g(b) + "]";
  m.validate();
  return m;
}

// User-supplied potential samples are differentiated with 4th-order stencils.
inline IntervalModel build_interval_from_samples(double a, double b, Samples V, std::string label = "sampled") {
  IntervalModel m;
  m.a = a;
  m.b = b;
  m.t = linspace(a, b, V.size());
  m.V = std::move(V);
  m.dV = fd4_first(m.V, m.h());
  m.ddV = fd4_second(m.V, m.h());
  m.label = std::move(label);
  m.validate();
  return m;
}

inline IntervalModel build_gaussian_interval(double sigma, double half_width, std::size_t n_pts) {
  if (!(half_width > 0)) throw DomainError("half_width must be positive");
  return build_interval(-half_width, half_width, n_pts, gaussian_potential(sigma));
}

inline IntervalModel with_rho_field(IntervalModel m, const std::function<double(double)>& rho) {
  Samples r(m.t.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rho(m.t[i]);
  m.rho_field = std::move(r);
  return m;
}

// ------------------------------------------------------- sharpness models

enum class ModelVariant { NeumannSymmetric, DirichletHalf };

inline const char* to_string(ModelVariant v) {
  return v == ModelVariant::NeumannSymmetric ? "neumann_symmetric" : "dirichlet_half";
}

struct ModelDensityParams {
  double rho = 1.0;
  InverseDimension theta = InverseDimension(0.2);
  double beta_trunc = 1.0;
  ModelVariant variant = ModelVariant::NeumannSymmetric;

  double N() const { return theta.N(); }
  double delta() const { return rho / (N() - 1.0); }
  // Endpoint of the positivity domain of R; infinite when delta < 0.
  double beta() const {
    double d = delta();
    return d > 0 ? kPi / (2 * std::sqrt(d)) : std::numeric_limits<double>::infinity();
  }
  double alpha() const { return variant == ModelVariant::NeumannSymmetric ? -beta_trunc : 0.0; }

  double R(double t) const {
    double d = delta();
    return d > 0 ? std::cos(std::sqrt(d) * t) : std::cosh(std::sqrt(-d) * t);
  }
  double dR(double t) const {
    double d = delta();
    double s = std::sqrt(std::abs(d));
    return d > 0 ? -s * std::sin(s * t) : s * std::sinh(s * t);
  }
  double ddR(double t) const { return -delta() * R(t); }

  void validate() const {
    if (!(rho > 0) || !std::isfinite(rho)) throw DomainError("model rho must be positive");
    double th = theta.theta();
    if (theta.is_zero()) throw DomainError("N = inf degenerates delta = rho/(N-1); use a Gaussian interval");
    if (theta.is_minus_infinity() || th >= 1.0) throw DomainError("model density requires N outside [0,1]");
    if (!(beta_trunc > 0) || !std::isfinite(beta_trunc)) throw DomainError("beta_trunc must be positive and finite");
    if (delta() > 0 && !(beta_trunc < beta())) throw DomainError("beta_trunc lies outside the positivity domain of R");
  }

  std::string label() const {
    return "model(rho=" + fmt_g(rho) + ",N=" + theta.spell_N() + ",beta_trunc=" + fmt_g(beta_trunc) + "," +
           to_string(variant) + ")";
  }
};

inline IntervalModel build_model_density(const ModelDensityParams& p, std::size_t n_pts) {
  if (n_pts < 16) throw DomainError("model density needs at least 16 nodes");
  p.validate();
  const double Nm1 = p.N() - 1.0;
  IntervalModel m;
  m.a = p.alpha();
  m.b = p.beta_trunc;
  m.t = linspace(m.a, m.b, n_pts);
  m.V.resize(n_pts);
  m.dV.resize(n_pts);
  m.ddV.resize(n_pts);
  for (std::size_t i = 0; i < n_pts; ++i) {
    double t = m.t[i];
    double R = p.R(t), q = p.dR(t) / R;
    m.V[i] = -Nm1 * std::log(R);
    m.dV[i] = -Nm1 * q;
    m.ddV[i] = Nm1 * (p.delta() + q * q);
  }
  m.label = p.label();
  m.validate();
  return m;
}

// ------------------------------------------------------------ radial balls

struct RadialBall {
  int n_ambient = 2;
  double R_outer = 1.0;
  Samples r, V, dV, ddV;
  std::string label;

  double h() const { return R_outer / static_cast<double>(r.size() - 1); }
  double sphere_area_constant() const { return n_ambient == 2 ? kTwoPi : 4 * kPi; }
};

inline RadialBall build_radial_ball(int n_ambient, double R_outer, std::size_t n_pts,
                                    const Potential& p = flat_potential()) {
  if (n_ambient != 2 && n_ambient != 3) throw DomainError("radial ball needs n = 2 or 3");
  if (!(R_outer > 0)) throw DomainError("radius must be positive");
  if (n_pts < 8) throw DomainError("radial ball needs at least 8 nodes");
  RadialBall B;
  B.n_ambient = n_ambient;
  B.R_outer = R_outer;
  B.r = linspace(0.0, R_outer, n_pts);
  B.V.resize(n_pts);
  B.dV.resize(n_pts);
  B.ddV.resize(n_pts);
  for (std::size_t i = 0; i < n_pts; ++i) {
    B.V[i] = p.V(B.r[i]);
    B.dV[i] = p.dV(B.r[i]);
    B.ddV[i] = p.ddV(B.r[i]);
  }
  B.label = "ball(n=" + std::to_string(n_ambient) + ",R=" + fmt_g(R_outer) + "," + p.label + ")";
  return B;
}

// ------------------------------------------------------- trig polynomials

struct TrigSeries {
  Samples a{1.0};  // a[0] + sum a[k] cos k t
  Samples b{0.0};  // sum b[k] sin k t, b[0] ignored

  std::size_t degree() const { return std::max(a.size(), b.size()) - 1; }

  double eval(double t, int deriv = 0) const {
    double s = deriv == 0 ? (a.empty() ? 0.0 : a[0]) : 0.0;
    const std::size_t K = degree();
    for (std::size_t k = 1; k <= K; ++k) {
      double ak = k < a.size() ? a[k] : 0.0, bk = k < b.size() ? b[k] : 0.0;
      double kk = static_cast<double>(k), c = std::cos(kk * t), sn = std::sin(kk * t);
      double f = std::pow(kk, deriv);
      switch (((deriv % 4) + 4) % 4) {
        case 0: s += f * (ak * c + bk * sn); break;
        case 1: s += f * (-ak * sn + bk * c); break;
        case 2: s += f * (-ak * c - bk * sn); break;
        default: s += f * (ak * sn - bk * c); break;
      }
    }
    return s;
  }

  Samples sample(std::size_t m, int deriv = 0) const {
    Samples out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = eval(kTwoPi * static_cast<double>(k) / static_cast<double>(m), deriv);
    return out;
  }

  TrigSeries scaled(double s) const {
    TrigSeries r = *this;
    for (double& x : r.a) x *= s;
    for (double& x : r.b) x *= s;
    return r;
  }

  TrigSeries plus(const TrigSeries& o, double s = 1.0) const {
    TrigSeries r;
    std::size_t K = std::max(degree(), o.degree()) + 1;
    r.a.assign(K, 0.0);
    r.b.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      r.a[k] = (k < a.size() ? a[k] : 0.0) + s * (k < o.a.size() ? o.a[k] : 0.0);
      r.b[k] = (k < b.size() ? b[k] : 0.0) + s * (k < o.b.size() ? o.b[k] : 0.0);
    }
    return r;
  }

  static TrigSeries constant(double c) { return TrigSeries{{c}, {0.0}}; }
  static TrigSeries cosines(const Samples& coeffs) {
    TrigSeries s;
    s.a = coeffs.empty() ? Samples{0.0} : coeffs;
    s.b.assign(s.a.size(), 0.0);
    return s;
  }
};

// --------------------------------------------------------- plane bodies

struct Vec2 {
  double x = 0, y = 0;
};

struct ConvexPlaneBody {
  std::size_t m = 0;
  Samples theta, h, dh, ddh, radius;  // radius = h + h''
  TrigSeries support;
  std::string label;

  double dtheta() const { return kTwoPi / static_cast<double>(m); }
  Samples curvature() const {
    Samples k(m);
    for (std::size_t i = 0; i < m; ++i) k[i] = 1.0 / radius[i];
    return k;
  }
  std::vector<Vec2> boundary_points() const {
    std::vector<Vec2> p(m);
    for (std::size_t k = 0; k < m; ++k) {
      double c = std::cos(theta[k]), s = std::sin(theta[k]);
      p[k] = {h[k] * c - dh[k] * s, h[k] * s + dh[k] * c};
    }
    return p;
  }
  // A = (1/2) int h (h + h'') d theta.
  double area() const {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += h[k] * radius[k];
    return 0.5 * s * dtheta();
  }
  double perimeter() const {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += radius[k];
    return s * dtheta();
  }
};

inline ConvexPlaneBody build_plane_body(const TrigSeries& coeffs, std::size_t m = 512, std::string label = "") {
  if (m < 8) throw DomainError("plane body needs at least 8 angles");
  ConvexPlaneBody B;
  B.m = m;
  B.support = coeffs;
  B.theta = uniform_angles(m);
  B.h = coeffs.sample(m, 0);
  B.dh = coeffs.sample(m, 1);
  B.ddh = coeffs.sample(m, 2);
  B.radius.resize(m);
  std::size_t worst = 0;
  for (std::size_t k = 0; k < m; ++k) {
    B.radius[k] = B.h[k] + B.ddh[k];
    if (B.radius[k] < B.radius[worst]) worst = k;
  }
  if (!(B.radius[worst] > 0)) {
    throw ConvexityViolation("h + h'' = " + fmt_g(B.radius[worst]) + " <= 0 at theta = " + fmt_g(B.theta[worst]));
  }
  B.label = label.empty() ? "trig(degree=" + std::to_string(coeffs.degree()) + ")" : std::move(label);
  return B;
}

// Samples a support function, converts to Fourier coefficients, and builds.
inline ConvexPlaneBody build_plane_body_from_support(const std::function<double(double)>& hfun, std::size_t m,
                                                     std::string label) {
  Samples s(m);
  Samples ang = uniform_angles(m);
  for (std::size_t k = 0; k < m; ++k) s[k] = hfun(ang[k]);
  FourierCoefficients c = fourier_coefficients(s);
  TrigSeries t{c.a, c.b};
  // The Nyquist cosine is kept only as a symmetric half weight, so drop it.
  if (m % 2 == 0) {
    t.a.pop_back();
    t.b.pop_back();
  }
  return build_plane_body(t, m, std::move(label));
}

inline ConvexPlaneBody build_disk(double radius = 1.0, std::size_t m = 512) {
  return build_plane_body(TrigSeries::constant(radius), m, "disk(r=" + fmt_g(radius) + ")");
}

inline ConvexPlaneBody build_ellipse(double a, double b, std::size_t m = 512) {
  if (!(a > 0 && b > 0)) throw DomainError("ellipse semi-axes must be positive");
  return build_plane_body_from_support(
      [a, b](double t) { return std::sqrt(a * a * std::cos(t) * std::cos(t) + b * b * std::sin(t) * std::sin(t)); }, m,
      "ellipse(" + fmt_g(a) + "," + fmt_g(b) + ")");
}

inline ConvexPlaneBody resample(const ConvexPlaneBody& B, std::size_t m) { return build_plane_body(B.support, m, B.label); }

// Random strictly convex support function: 1 + small translation + higher
// harmonics with sum (k^2-1)(|a_k|+|b_k|) <= budget < 1, so h + h'' > 0.
inline TrigSeries random_support(SeededRng& rng, std::size_t degree = 6) {
  TrigSeries s;
  s.a.assign(degree + 1, 0.0);
  s.b.assign(degree + 1, 0.0);
  s.a[0] = 1.0;
  s.a[1] = rng.uniform(-0.1, 0.1);
  s.b[1] = rng.uniform(-0.1, 0.1);
  double weight = 0.0;
  for (std::size_t k = 2; k <= degree; ++k) {
    s.a[k] = rng.uniform(-1, 1) / static_cast<double>(k * k);
    s.b[k] = rng.uniform(-1, 1) / static_cast<double>(k * k);
    weight += static_cast<double>(k * k - 1) * (std::abs(s.a[k]) + std::abs(s.b[k]));
  }
  double budget = rng.uniform(0.2, 0.8);
  if (weight > 0) {
    for (std::size_t k = 2; k <= degree; ++k) {
      s.a[k] *= budget / weight;
      s.b[k] *= budget / weight;
    }
  }
  return s;
}

inline std::vector<ConvexPlaneBody> random_body_corpus(std::uint64_t seed, std::size_t count, std::size_t m = 512) {
  SeededRng rng(seed);
  std::vector<ConvexPlaneBody> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(build_plane_body(random_support(rng), m, "random_body(seed=" + std::to_string(seed) + ",i=" + std::to_string(i) + ")"));
  return out;
}

// --------------------------------------------------- surfaces of revolution

// Generating curve gamma(u) = (rho(u), z(u)) for u in [0, pi], from the north
// pole to the south pole, with first and second u-derivatives.
struct ProfileSpec {
  std::function<std::array<double, 6>(double)> eval;  // rho, z, rho_u, z_u, rho_uu, z_uu
  std::string label;
};

inline ProfileSpec spheroid_profile(double a, double c) {
  if (!(a > 0 && c > 0)) throw DomainError("spheroid semi-axes must be positive");
  return {[a, c](double u) {
            double s = std::sin(u), co = std::cos(u);
            return std::array<double, 6>{a * s, c * co, a * co, -c * s, -a * s, -c * co};
          },
          a == c ? "sphere(R=" + fmt_g(a) + ")" : "spheroid(a=" + fmt_g(a) + ",c=" + fmt_g(c) + ")"};
}

inline ProfileSpec sphere_profile(double R) { return spheroid_profile(R, R); }

struct RevolutionBody3D {
  std::size_t cells = 0;  // Sturm-Liouville cells; samples live on the 2*cells+1 half grid
  double S = 0.0;         // meridian length
  Samples s, u, r, z, dr, dz, kappa1, kappa2;
  std::string label;

  double ds() const { return S / static_cast<double>(cells); }
  double half_step() const { return S / static_cast<double>(2 * cells); }
  std::size_t samples() const { return s.size(); }
};

namespace detail {

inline double profile_speed(const ProfileSpec& p, double u) {
  auto v = p.eval(u);
  return std::hypot(v[2], v[3]);
}

// 8-point Gauss-Legendre on [lo, hi].
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo), s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return s * half;
}

}  // namespace detail

inline RevolutionBody3D build_revolution_body(const ProfileSpec& p, std::size_t cells = 1024) {
  if (cells < 8) throw DomainError("revolution body needs at least 8 cells");
  auto speed = [&](double u) { return detail::profile_speed(p, u); };
  const std::size_t panels = 512;
  Samples edges(panels + 1), cum(panels + 1, 0.0);
  for (std::size_t i = 0; i <= panels; ++i) edges[i] = kPi * static_cast<double>(i) / panels;
  for (std::size_t i = 0; i < panels; ++i) cum[i + 1] = cum[i] + detail::gauss_legendre(speed, edges[i], edges[i + 1]);
  auto arclength = [&](double u) {
    std::size_t i = std::min<std::size_t>(panels - 1, static_cast<std::size_t>(u / kPi * panels));
    return cum[i] + detail::gauss_legendre(speed, edges[i], u);
  };

  RevolutionBody3D B;
  B.cells = cells;
  B.S = cum[panels];
  B.label = p.label;
  const std::size_t n = 2 * cells + 1;
  B.s = linspace(0.0, B.S, n);
  B.u.resize(n);
  B.r.resize(n);
  B.z.resize(n);
  B.dr.resize(n);
  B.dz.resize(n);
  B.kappa1.resize(n);
  B.kappa2.resize(n);
  double u = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == 0) u = 0.0;
    else if (j == n - 1) u = kPi;
    else {
      u = std::clamp(u + B.half_step() / std::max(speed(u), 1e-12), 0.0, kPi);
      for (int it = 0; it < 50; ++it) {
        double step = (arclength(u) - B.s[j]) / speed(u);
        u = std::clamp(u - step, 0.0, kPi);
        if (std::abs(step) < 1e-15) break;
      }
    }
    B.u[j] = u;
    auto v = p.eval(u);
    double g = std::hypot(v[2], v[3]);
    B.r[j] = v[0];
    B.z[j] = v[1];
    B.dr[j] = v[2] / g;
    B.dz[j] = v[3] / g;
    B.kappa1[j] = (v[3] * v[4] - v[2] * v[5]) / (g * g * g);
  }
  for (std::size_t j = 0; j < n; ++j) {
    bool pole = (j == 0 || j == n - 1);
    B.kappa2[j] = pole ? B.kappa1[j] : -B.dz[j] / B.r[j];
  }
  if (std::abs(B.r[0]) > 1e-12 || std::abs(B.r[n - 1]) > 1e-12) throw DomainError("profile must close at both poles");
  if (std::abs(B.dr[0] - 1.0) > 1e-8 || std::abs(B.dr[n - 1] + 1.0) > 1e-8)
    throw DomainError("pole closure requires r'(0) = 1 and r'(S) = -1");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(B.kappa1[j] > 0 && B.kappa2[j] > 0))
      throw ConvexityViolation("principal curvature not positive at s = " + fmt_g(B.s[j]));
  }
  return B;
}

// --------------------------------------------------------------- sphere caps

struct SphereCap {
  double r_cap = kPi / 3;

  double area() const { return kTwoPi * (1 - std::cos(r_cap)); }
  double boundary_length() const { return kTwoPi * std::sin(r_cap); }
  double geodesic_curvature() const { return std::cos(r_cap) / std::sin(r_cap); }
  std::string label() const { return "cap(r=" + fmt_g(r_cap) + ")"; }
};

inline SphereCap build_sphere_cap(double r_cap) {
  if (!(r_cap > 0 && r_cap < kPi)) throw DomainError("cap radius must lie in (0, pi)");
  return SphereCap{r_cap};
}

}  // namespace reilly_lab
