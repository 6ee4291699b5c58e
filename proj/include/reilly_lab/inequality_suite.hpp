#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "errors.hpp"
#include "inverse_dimension.hpp"
#include "model_spaces.hpp"
#include "numerics.hpp"
#include "operators.hpp"

namespace reilly_lab {

// ------------------------------------------------------------ test functions

enum class TestFunctionKind { TrigPoly, GridSamples, ModelSharpness };

inline const char* to_string(TestFunctionKind k) {
  switch (k) {
    case TestFunctionKind::TrigPoly: return "trig_poly";
    case TestFunctionKind::GridSamples: return "grid_samples";
    default: return "model_sharpness";
  }
}

// f = scale * base + offset, where base is a trig polynomial in the angle, a
// sample vector on the domain grid, or R'(t) of a model density.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::TrigPoly;
  TrigSeries coeffs;
  Samples samples;
  std::optional<ModelDensityParams> model;
  bool zero_mean_enforced = false;
  double scale = 1.0, offset = 0.0;
  std::string label;

  static TestFunction trig(TrigSeries c, bool zero_mean = false, std::string label = "trig") {
    TestFunction f;
    f.kind = TestFunctionKind::TrigPoly;
    f.coeffs = std::move(c);
    f.zero_mean_enforced = zero_mean;
    f.label = std::move(label);
    return f;
  }
  static TestFunction grid(Samples s, bool zero_mean = false, std::string label = "samples") {
    TestFunction f;
    f.kind = TestFunctionKind::GridSamples;
    f.samples = std::move(s);
    f.zero_mean_enforced = zero_mean;
    f.label = std::move(label);
    return f;
  }
  static TestFunction model_sharpness(const ModelDensityParams& p) {
    TestFunction f;
    f.kind = TestFunctionKind::ModelSharpness;
    f.model = p;
    f.label = "dR/dt";
    return f;
  }

  TestFunction scaled(double s) const {
    TestFunction f = *this;
    f.scale *= s;
    f.offset *= s;
    return f;
  }
  TestFunction shifted(double c) const {
    TestFunction f = *this;
    f.offset += c;
    return f;
  }

  // Pointwise value for analytic kinds.
  double eval(double x, int deriv = 0) const {
    double base;
    if (kind == TestFunctionKind::TrigPoly) {
      base = coeffs.eval(x, deriv);
    } else if (kind == TestFunctionKind::ModelSharpness) {
      if (deriv == 0) base = model->dR(x);
      else if (deriv == 1) base = model->ddR(x);
      else if (deriv == 2) base = -model->delta() * model->dR(x);
      else throw DomainError("model test function derivatives available up to order 2");
    } else {
      throw DomainError("grid samples have no pointwise evaluation");
    }
    return scale * base + (deriv == 0 ? offset : 0.0);
  }
};

inline TestFunction random_trig_poly(SeededRng& rng, std::size_t degree = 8) {
  if (degree < 1) throw DomainError("random trig polynomials need degree >= 1");
  TrigSeries c;
  c.a.assign(degree + 1, 0.0);
  c.b.assign(degree + 1, 0.0);
  for (std::size_t k = 0; k <= degree; ++k) {
    c.a[k] = rng.uniform(-1, 1);
    if (k > 0) c.b[k] = rng.uniform(-1, 1);
  }
  return TestFunction::trig(c, false, "random_trig(degree=" + std::to_string(degree) + ")");
}

// Values and first two derivatives of f sampled on some grid.
struct FunctionSamples {
  Samples f, d1, d2;
};

namespace detail {

inline void subtract_mean(FunctionSamples& fs, const Samples& weights) {
  double m = dot(fs.f, weights) / sum(weights);
  for (double& x : fs.f) x -= m;
}

inline Samples interval_weights(const IntervalModel& model) {
  Samples w = simpson_weights(model.n_pts(), model.h());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= std::exp(-model.V[i]);
  return w;
}

inline Samples ball_weights(const RadialBall& ball) {
  Samples w = simpson_weights(ball.r.size(), ball.h());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] *= ball.sphere_area_constant() * std::pow(ball.r[i], ball.n_ambient - 1) * std::exp(-ball.V[i]);
  return w;
}

inline Samples scaled_samples(const Samples& s, double scale, double offset) {
  Samples out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = scale * s[i] + offset;
  return out;
}

}  // namespace detail

// On an interval grid (t = model.t).
inline FunctionSamples sample_on(const TestFunction& fn, const IntervalModel& model) {
  FunctionSamples fs;
  const std::size_t n = model.n_pts();
  if (fn.kind == TestFunctionKind::GridSamples) {
    if (fn.samples.size() != n) throw DomainError("test function sample length mismatch");
    fs.f = detail::scaled_samples(fn.samples, fn.scale, fn.offset);
    fs.d1 = detail::scaled_samples(fd4_first(fn.samples, model.h()), fn.scale, 0.0);
    fs.d2 = detail::scaled_samples(fd4_second(fn.samples, model.h()), fn.scale, 0.0);
  } else {
    fs.f.resize(n);
    fs.d1.resize(n);
    fs.d2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      fs.f[i] = fn.eval(model.t[i], 0);
      fs.d1[i] = fn.eval(model.t[i], 1);
      fs.d2[i] = fn.eval(model.t[i], 2);
    }
  }
  if (fn.zero_mean_enforced) detail::subtract_mean(fs, detail::interval_weights(model));
  return fs;
}

// Radial samples on a ball (grid samples in r only).
inline FunctionSamples sample_on(const TestFunction& fn, const RadialBall& ball) {
  if (fn.kind != TestFunctionKind::GridSamples) throw NonRadialInput("ball test functions must be radial grid samples");
  if (fn.samples.size() != ball.r.size()) throw DomainError("test function sample length mismatch");
  FunctionSamples fs;
  fs.f = detail::scaled_samples(fn.samples, fn.scale, fn.offset);
  fs.d1 = detail::scaled_samples(fd4_first(fn.samples, ball.h()), fn.scale, 0.0);
  fs.d2 = detail::scaled_samples(fd4_second(fn.samples, ball.h()), fn.scale, 0.0);
  if (fn.zero_mean_enforced) detail::subtract_mean(fs, detail::ball_weights(ball));
  return fs;
}

// On the normal-angle grid of a plane body; derivatives are in theta.
inline FunctionSamples sample_on(const TestFunction& fn, const ConvexPlaneBody& body) {
  FunctionSamples fs;
  if (fn.kind == TestFunctionKind::TrigPoly) {
    fs.f.resize(body.m);
    fs.d1.resize(body.m);
    fs.d2.resize(body.m);
    for (std::size_t k = 0; k < body.m; ++k) {
      fs.f[k] = fn.eval(body.theta[k], 0);
      fs.d1[k] = fn.eval(body.theta[k], 1);
      fs.d2[k] = fn.eval(body.theta[k], 2);
    }
  } else if (fn.kind == TestFunctionKind::GridSamples) {
    if (fn.samples.size() != body.m) throw DomainError("test function sample length mismatch");
    fs.f = detail::scaled_samples(fn.samples, fn.scale, fn.offset);
    fs.d1 = detail::scaled_samples(spectral_derivative(fn.samples, 1), fn.scale, 0.0);
    fs.d2 = detail::scaled_samples(spectral_derivative(fn.samples, 2), fn.scale, 0.0);
  } else {
    throw DomainError("model test functions live on model intervals");
  }
  if (fn.zero_mean_enforced) {
    Samples w(body.m);
    for (std::size_t k = 0; k < body.m; ++k) w[k] = body.radius[k];
    detail::subtract_mean(fs, w);
  }
  return fs;
}

// ------------------------------------------------------------ Brascamp-Lieb

enum class BlnCase { Neumann, Dirichlet, MeanConvex };

inline const char* to_string(BlnCase c) {
  switch (c) {
    case BlnCase::Neumann: return "neumann";
    case BlnCase::Dirichlet: return "dirichlet";
    default: return "mean_convex";
  }
}

namespace detail {

inline double bln_tolerance(double lhs, double rhs) { return 1e-6 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}); }

// A boundary sample whose density is below this fraction of the peak is
// treated as a closed cap of the model space.
inline constexpr double kNegligibleDensity = 1e-8;

struct BoundarySample {
  double f, density, H_mu;
  bool negligible;
};

// Shared tail of the BLN evaluation; all integrals are already normalised by mu(M).
inline CheckReport finish_bln(CheckReport rep, double nn1, double mean, double second, double energy,
                              const std::vector<BoundarySample>& ends, double boundary_scale, BlnCase bcase,
                              std::optional<double> C) {
  double lhs = 0.0, rhs = energy;
  switch (bcase) {
    case BlnCase::Neumann:
      lhs = nn1 * (second - mean * mean);
      break;
    case BlnCase::Dirichlet: {
      for (const auto& e : ends) {
        if (e.f * e.f * e.density > 1e-8 * second * boundary_scale)
          throw DomainError("Dirichlet case requires f = 0 on the boundary");
        if (!e.negligible && e.H_mu < -1e-12)
          throw MeanConvexityViolation("Dirichlet case requires H_mu >= 0, found " + fmt_g(e.H_mu));
      }
      lhs = nn1 * second;
      break;
    }
    case BlnCase::MeanConvex: {
      double num = 0.0, den = 0.0;
      for (const auto& e : ends) {
        if (!(e.H_mu > 0)) throw MeanConvexityViolation("mean-convex case requires H_mu > 0, found " + fmt_g(e.H_mu));
        num += e.f * e.density / e.H_mu;
        den += e.density / e.H_mu;
      }
      double c = C ? *C : num / den;
      double term = 0.0;
      for (const auto& e : ends) term += (e.f - c) * (e.f - c) * e.density / e.H_mu;
      term /= boundary_scale;
      rep.set("C", c).set("C_mode", C ? "fixed" : "auto_boundary_mean").set("boundary_term", term);
      lhs = nn1 * (second - mean * mean);
      rhs += term;
      break;
    }
  }
  rep.set("normalized_measure", true).set("energy", energy);
  rep.inequality(lhs, rhs, bln_tolerance(lhs, rhs));
  return rep;
}

}  // namespace detail

// BLN on an interval; the reference measure is normalised to a probability.
inline CheckReport check_bln(const IntervalModel& model, const InverseDimension& theta, const TestFunction& fn,
                             BlnCase bcase, std::optional<double> C = std::nullopt) {
  Samples ric = model.ric(theta);
  for (std::size_t i = 0; i < ric.size(); ++i)
    if (!(ric[i] > 0)) throw CurvatureNotPositive("Ric_mu,N = " + fmt_g(ric[i]) + " at t = " + fmt_g(model.t[i]));
  FunctionSamples fs = sample_on(fn, model);
  Samples w = detail::interval_weights(model);
  const double mass = sum(w);
  double mean = 0.0, second = 0.0, energy = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += w[i] * fs.f[i];
    second += w[i] * fs.f[i] * fs.f[i];
    energy += w[i] * fs.d1[i] * fs.d1[i] / ric[i];
    peak = std::max(peak, std::exp(-model.V[i]));
  }
  mean /= mass;
  second /= mass;
  energy /= mass;
  const std::size_t last = model.n_pts() - 1;
  std::vector<detail::BoundarySample> ends;
  for (std::size_t i : {std::size_t{0}, last}) {
    double dens = std::exp(-model.V[i]);
    double H = i == 0 ? model.dV[i] : -model.dV[i];
    ends.push_back({fs.f[i], dens, H, dens <= detail::kNegligibleDensity * peak});
  }
  CheckReport rep;
  rep.name = "bln";
  rep.set("domain", model.label).set("case", to_string(bcase)).set("N", theta.spell_N())
      .set("test_function", fn.label).set("n_pts", model.n_pts()).set("mass", mass);
  rep.grid(static_cast<double>(model.n_pts()), 0.0);
  return detail::finish_bln(std::move(rep), theta.n_over_n_minus_1(), mean, second, energy, ends, mass, bcase, C);
}

// Radial BLN on a ball; the boundary sphere carries a single sample.
inline CheckReport check_bln(const RadialBall& ball, const InverseDimension& theta_in, const TestFunction& fn,
                             BlnCase bcase, std::optional<double> C = std::nullopt) {
  InverseDimension theta(theta_in.theta(), ball.n_ambient);
  const double c = theta.inv_N_minus_n();
  if (theta.at_dimension())
    for (double d : ball.dV)
      if (d != 0.0) throw DomainError("theta = 1/n requires a constant potential");
  FunctionSamples fs = sample_on(fn, ball);
  Samples w = detail::ball_weights(ball);
  const double mass = sum(w);
  double mean = 0.0, second = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double ric = ball.ddV[i] - c * ball.dV[i] * ball.dV[i];
    if (!(ric > 0)) throw CurvatureNotPositive("Ric_mu,N = " + fmt_g(ric) + " at r = " + fmt_g(ball.r[i]));
    mean += w[i] * fs.f[i];
    second += w[i] * fs.f[i] * fs.f[i];
    energy += w[i] * fs.d1[i] * fs.d1[i] / ric;
  }
  mean /= mass;
  second /= mass;
  energy /= mass;
  BoundaryGeometry g = boundary_geometry(ball);
  std::vector<detail::BoundarySample> ends{{fs.f.back(), g.element[0], g.H_mu[0], false}};
  CheckReport rep;
  rep.name = "bln";
  rep.set("domain", ball.label).set("case", to_string(bcase)).set("N", theta.spell_N())
      .set("test_function", fn.label).set("n_pts", ball.r.size()).set("mass", mass);
  rep.grid(static_cast<double>(ball.r.size()), 0.0);
  return detail::finish_bln(std::move(rep), theta.n_over_n_minus_1(), mean, second, energy, ends, mass, bcase, C);
}

// BLN on a model density with its extremal test function f = R'.
inline CheckReport check_bln(const ModelDensityParams& p, BlnCase bcase, std::size_t n_pts = 4001) {
  IntervalModel m = build_model_density(p, n_pts);
  return check_bln(m, p.theta, TestFunction::model_sharpness(p), bcase);
}

// ------------------------------------------------------------ sharpness

struct SharpnessResult {
  CheckReport ratio, identity_f2, identity_df2;
  std::vector<CheckReport> reports() const { return {ratio, identity_f2, identity_df2}; }
};

namespace detail {

struct SharpnessQuadrature {
  double ratio, int_f2, int_df2, closed_f2, closed_df2;
};

inline SharpnessQuadrature sharpness_quadrature(const ModelDensityParams& p, std::size_t n) {
  const double N = p.N(), rho = p.rho, a = p.alpha(), b = p.beta_trunc;
  const double h = (b - a) / static_cast<double>(n - 1);
  Samples w = simpson_weights(n, h);
  double mass = 0.0, mean = 0.0, f2 = 0.0, df2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = a + h * static_cast<double>(i);
    double R = p.R(t), dens = std::pow(R, N - 1);
    double f = p.dR(t), df = p.ddR(t);
    mass += w[i] * dens;
    mean += w[i] * f * dens;
    f2 += w[i] * f * f * dens;
    df2 += w[i] * df * df * dens;
  }
  const double nn1 = N / (N - 1);
  double lhs = p.variant == ModelVariant::NeumannSymmetric ? nn1 * (f2 - mean * mean / mass) : nn1 * f2;
  double rhs = df2 / rho;
  // Composite Gauss-Legendre for the closed forms, independent of the Simpson route.
  const std::size_t panels = 256;
  double RN1 = 0.0, ph = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k)
    RN1 += gauss_legendre([&](double t) { return std::pow(p.R(t), N + 1); }, a + ph * static_cast<double>(k),
                          a + ph * static_cast<double>(k + 1));
  double bracket = p.dR(b) * std::pow(p.R(b), N) - p.dR(a) * std::pow(p.R(a), N);
  double closed_f2 = bracket / N + rho / (N * (N - 1)) * RN1;
  double closed_df2 = rho / ((N - 1) * (N - 1)) * RN1;
  return {lhs / rhs, f2, df2 / rho, closed_f2, closed_df2};
}

}  // namespace detail

// ratio = (N/(N-1)) Var(f) / ((1/rho) int |f'|^2) for f = R' on the model
// density; the ratio report is an identity against 1 with the given tolerance.
inline SharpnessResult sharpness_ratio(ModelDensityParams p, BlnCase bcase, double tolerance = 1e-3,
                                       std::size_t n = 20001) {
  if (bcase == BlnCase::MeanConvex) throw DomainError("sharpness is defined for the Neumann and Dirichlet cases");
  p.variant = bcase == BlnCase::Neumann ? ModelVariant::NeumannSymmetric : ModelVariant::DirichletHalf;
  if (!p.theta.is_zero() && !p.theta.is_minus_infinity() && std::abs(p.N() + 1.0) < 1e-12)
    throw DomainError("N = -1 needs a truncated test function");
  p.validate();
  if (!(std::abs(p.N()) > 1)) throw DomainError("sharpness needs |N| > 1");
  if (p.variant == ModelVariant::DirichletHalf && p.N() < 0)
    throw DomainError("the Dirichlet half model needs N > 1");
  if (n % 2 == 0) ++n;

  auto q = detail::sharpness_quadrature(p, n);
  SharpnessResult out;
  const std::string label = p.label();

  out.ratio.name = "sharpness_ratio";
  out.ratio.set("model", label).set("case", to_string(bcase)).set("N", p.theta.spell_N()).set("rho", p.rho)
      .set("beta_trunc", p.beta_trunc).set("nodes", n);
  std::vector<double> errs;
  for (double frac : {0.5, 0.75, 1.0}) {
    ModelDensityParams pk = p;
    pk.beta_trunc = p.beta_trunc * frac;
    double r = frac == 1.0 ? q.ratio : detail::sharpness_quadrature(pk, n).ratio;
    out.ratio.grid(pk.beta_trunc, std::abs(1.0 - r));
    errs.push_back(std::abs(1.0 - r));
  }
  out.ratio.set("trend_to_one", errs[0] > errs[1] && errs[1] > errs[2]);
  out.ratio.set("bln_bound_holds", q.ratio <= 1.0 + 1e-6);
  out.ratio.identity(q.ratio, 1.0, tolerance);

  auto rel = [](double x, double y) { return 1e-6 * std::max(std::abs(x), std::abs(y)); };
  out.identity_f2.name = "sharpness_identity_f2";
  out.identity_f2.set("model", label).set("nodes", n);
  out.identity_f2.identity(q.int_f2, q.closed_f2, rel(q.int_f2, q.closed_f2));
  out.identity_df2.name = "sharpness_identity_df2";
  out.identity_df2.set("model", label).set("nodes", n);
  out.identity_df2.identity(q.int_df2, q.closed_df2, rel(q.int_df2, q.closed_df2));
  return out;
}

// ------------------------------------------------------------ spectral gaps

inline CheckReport check_lichnerowicz(const IntervalModel& model, const InverseDimension& theta, double rho,
                                      BoundaryCondition left = BoundaryCondition::Neumann,
                                      BoundaryCondition right = BoundaryCondition::Neumann) {
  if (!(rho > 0)) throw CurvatureNotPositive("Lichnerowicz needs rho > 0");
  Samples ric = model.ric(theta);
  double mn = *std::min_element(ric.begin(), ric.end());
  if (mn < rho - 1e-8 * (1 + rho)) throw CurvatureNotPositive("CD(rho,N) fails: min Ric_mu,N = " + fmt_g(mn));
  DiscreteOperator op = assemble_laplacian(model, left, right);
  double gap = spectral_gap(op).lambda;
  double bound = theta.n_over_n_minus_1() * rho;
  CheckReport rep;
  rep.name = "lichnerowicz";
  rep.set("model", model.label).set("N", theta.spell_N()).set("rho", rho).set("left", to_string(left))
      .set("right", to_string(right)).set("n_pts", model.n_pts()).set("bound", bound).set("gap", gap);
  rep.inequality(bound, gap, 1e-4 * std::max(bound, 1e-300));
  rep.grid(static_cast<double>(model.n_pts()), gap - bound);
  return rep;
}

inline CheckReport check_lichnerowicz(const ModelDensityParams& p, std::size_t n_pts = 2000) {
  IntervalModel m = build_model_density(p, n_pts);
  BoundaryCondition left =
      p.variant == ModelVariant::DirichletHalf ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann;
  return check_lichnerowicz(m, p.theta, p.rho, left, BoundaryCondition::Neumann);
}

// Spectral gap against the harmonic mean 1/avg_mu(1/rho) of the curvature field.
inline CheckReport check_veysseire(const IntervalModel& model, BoundaryCondition left = BoundaryCondition::Neumann,
                                   BoundaryCondition right = BoundaryCondition::Neumann,
                                   const InverseDimension& theta = InverseDimension::infinite()) {
  if (!model.rho_field) throw DomainError("Veysseire check needs a rho_field");
  const Samples& rho = *model.rho_field;
  Samples ric = model.ric(theta);
  bool dominated = true;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0)) throw DomainError("rho_field must be positive, found " + fmt_g(rho[i]) + " at t = " + fmt_g(model.t[i]));
    if (ric[i] < rho[i] - 1e-8 * (1 + rho[i])) dominated = false;
  }
  Samples w = detail::interval_weights(model);
  double mass = sum(w), inv = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) inv += w[i] / rho[i];
  double bound = mass / inv;
  double gap = spectral_gap(assemble_laplacian(model, left, right)).lambda;
  CheckReport rep;
  rep.name = "veysseire";
  rep.set("model", model.label).set("n_pts", model.n_pts()).set("left", to_string(left))
      .set("right", to_string(right)).set("harmonic_mean_rho", bound)
      .set("min_rho", *std::min_element(rho.begin(), rho.end())).set("ric_dominates_rho", dominated).set("gap", gap);
  rep.inequality(bound, gap, 1e-4 * bound);
  rep.grid(static_cast<double>(model.n_pts()), gap - bound);
  return rep;
}

// ------------------------------------------------------------ Colesanti

namespace detail {

inline void require_strict_convexity(const ConvexPlaneBody& body) {
  for (std::size_t k = 0; k < body.m; ++k)
    if (!(body.radius[k] > 0)) throw ConvexityViolation("non-positive curvature radius at theta = " + fmt_g(body.theta[k]));
}

}  // namespace detail

// Unweighted plane body, V = 0, CD(0,N) for every theta <= 1/2. In the normal
// angle, ds = r dtheta and H = II = 1/r, so int H f^2 ds = int f^2 dtheta and
// int II^{-1} |f_s|^2 ds = int f_theta^2 dtheta.
inline CheckReport check_colesanti(const ConvexPlaneBody& body, const TestFunction& fn, bool strengthened = false,
                                   const InverseDimension& theta = InverseDimension(0.5, 2)) {
  detail::require_strict_convexity(body);
  InverseDimension th(theta.theta(), 2);
  if (th.is_minus_infinity()) throw DomainError("Colesanti check needs theta > -inf");
  FunctionSamples fs = sample_on(fn, body);
  const double dt = body.dtheta(), A = body.area(), P = body.perimeter(), q = th.n_minus_1_over_n();
  double hf2 = 0.0, fint = 0.0, grad = 0.0;
  for (std::size_t k = 0; k < body.m; ++k) {
    hf2 += fs.f[k] * fs.f[k];
    fint += fs.f[k] * body.radius[k];
    grad += fs.d1[k] * fs.d1[k];
  }
  hf2 *= dt;
  fint *= dt;
  grad *= dt;
  double lhs = hf2 - q * fint * fint / A;
  CheckReport rep;
  rep.name = strengthened ? "colesanti_strengthened" : "colesanti";
  rep.set("body", body.label).set("test_function", fn.label).set("N", th.spell_N()).set("m", body.m)
      .set("area", A).set("perimeter", P);
  if (strengthened) {
    double bint = 0.0, fb = 0.0;
    for (std::size_t k = 0; k < body.m; ++k) {
      double beta = q * P / A - 1.0 / body.radius[k];
      bint += beta * body.radius[k];
      fb += fs.f[k] * beta * body.radius[k];
    }
    bint *= dt;
    fb *= dt;
    if (bint <= 1e-12) throw StrengthenedDegenerate("int beta dmu = " + fmt_g(bint) + " (ball equality case)");
    rep.set("beta_integral", bint);
    lhs += fb * fb / bint;
  }
  rep.inequality(lhs, grad, 1e-8 * std::max(1.0, std::abs(grad)));
  rep.grid(static_cast<double>(body.m), grad - lhs);
  return rep;
}

// lhs = int II |f_s|^2 ds, rhs = int (1/H)(L f + rho (f - C)/2)^2 ds with the
// curve Laplacian L f = (1/r)(f_theta / r)_theta.
inline CheckReport check_dual_colesanti(const ConvexPlaneBody& body, const TestFunction& fn, double rho,
                                        std::optional<double> C = std::nullopt) {
  for (std::size_t k = 0; k < body.m; ++k)
    if (!(body.radius[k] > 0)) throw MeanConvexityViolation("H_mu <= 0 at theta = " + fmt_g(body.theta[k]));
  FunctionSamples fs = sample_on(fn, body);
  const std::size_t m = body.m;
  const double dt = body.dtheta();
  Samples flux(m);
  for (std::size_t k = 0; k < m; ++k) flux[k] = fs.d1[k] / body.radius[k];
  Samples dflux = spectral_derivative(flux, 1);
  Samples Lf(m);
  for (std::size_t k = 0; k < m; ++k) Lf[k] = dflux[k] / body.radius[k];
  double c = 0.0;
  std::string mode = "fixed";
  if (C) {
    c = *C;
  } else if (rho != 0.0) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double inv_H_ds = body.radius[k] * body.radius[k];
      num += (Lf[k] + 0.5 * rho * fs.f[k]) * inv_H_ds;
      den += inv_H_ds;
    }
    c = 2.0 / rho * num / den;
    mode = "auto_rhs_minimizer";
  } else {
    mode = "auto_rho_zero";
  }
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double r = body.radius[k];
    lhs += fs.d1[k] * fs.d1[k] / (r * r);
    double a = Lf[k] + 0.5 * rho * (fs.f[k] - c);
    rhs += r * r * a * a;
  }
  lhs *= dt;
  rhs *= dt;
  CheckReport rep;
  rep.name = "dual_colesanti";
  rep.set("body", body.label).set("test_function", fn.label).set("rho", rho).set("C", c).set("C_mode", mode)
      .set("m", m);
  rep.inequality(lhs, rhs, 1e-8 * std::max(1.0, std::abs(rhs)));
  rep.grid(static_cast<double>(m), rhs - lhs);
  return rep;
}

// ------------------------------------------------------------ mean curvature

// HR-1, the Cauchy-Schwarz link and HR-2, in that order.
inline std::vector<CheckReport> check_mean_curvature(const BoundaryGeometry& g, const InverseDimension& theta) {
  const double P = g.boundary_measure(), M = g.enclosed_measure;
  double intH = 0.0, intInvH = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!(g.H_mu[j] > 0)) throw MeanConvexityViolation("H_mu = " + fmt_g(g.H_mu[j]) + " at sample " + std::to_string(j));
    intH += g.H_mu[j] * g.element[j];
    intInvH += g.element[j] / g.H_mu[j];
  }
  auto tol = [](double a, double b) { return 1e-6 * std::max(std::abs(a), std::abs(b)); };
  std::vector<CheckReport> out(3);
  const bool convex = g.min_II() > 0;
  out[0].name = "hr1_mean_curvature";
  out[0].set("body", g.body_ref).set("N", theta.spell_N()).set("strictly_convex", convex);
  if (!convex) throw ConvexityViolation("HR-1 needs II > 0; min II = " + fmt_g(g.min_II()));
  double hr1 = theta.n_minus_1_over_n() * P * P / M;
  out[0].inequality(intH, hr1, tol(intH, hr1));
  out[1].name = "hr_cauchy_schwarz_link";
  out[1].set("body", g.body_ref);
  double cs = P * P / intH;
  out[1].inequality(cs, intInvH, tol(cs, intInvH));
  out[2].name = "hr2_inverse_mean_curvature";
  out[2].set("body", g.body_ref).set("N", theta.spell_N());
  double hr2 = theta.n_over_n_minus_1() * M;
  out[2].inequality(hr2, intInvH, tol(hr2, intInvH));
  for (auto& r : out) r.set("boundary_measure", P).set("enclosed_measure", M).set("samples", g.size());
  return out;
}

// ------------------------------------------------------------ boundary gaps

namespace detail {

inline double iih_rho_bound(double a, double rho) {
  double rad = 2 * a * rho + a * a;
  if (rad < 0) throw DomainError("2 a rho + a^2 < 0: the root bound is undefined");
  return 0.5 * (rho + a + std::sqrt(rad));
}

inline std::vector<CheckReport> boundary_gap_common(const std::string& ref, double lambda, double sigma, double xi,
                                                    double rho, double tol) {
  if (!(sigma > 0)) throw ConvexityViolation("boundary gaps need min II > 0, found " + fmt_g(sigma));
  if (!(xi > 0)) throw MeanConvexityViolation("boundary gaps need min H_mu > 0, found " + fmt_g(xi));
  if (rho > 0) throw DomainError("Euclidean bodies satisfy CD(rho,0) only for rho <= 0");
  const double a = sigma * xi;
  std::vector<CheckReport> out(2);
  out[0].name = "boundary_gap_iih";
  out[0].set("body", ref).set("sigma", sigma).set("xi", xi).set("lambda1", lambda);
  out[0].inequality(a, lambda, tol * std::max(1.0, a));
  double b = iih_rho_bound(a, rho);
  out[1].name = "boundary_gap_iih_rho";
  out[1].set("body", ref).set("sigma", sigma).set("xi", xi).set("rho", rho).set("lambda1", lambda)
      .set("max_a_half_rho", std::max(a, rho / 2));
  out[1].inequality(b, lambda, tol * std::max(1.0, b));
  return out;
}

}  // namespace detail

inline std::vector<CheckReport> check_boundary_gaps(const ConvexPlaneBody& body, double rho_ambient = 0.0) {
  BoundaryGeometry g = boundary_geometry(body);
  double lambda = spectral_gap(assemble_laplacian(body)).lambda;
  return detail::boundary_gap_common(body.label, lambda, g.min_II(), g.min_H(), rho_ambient, 1e-8);
}

// Surfaces of revolution in R^3 (n = 3, V = 0): adds the Lichnerowicz,
// Veysseire and Colesanti forms on the boundary surface.
inline std::vector<CheckReport> check_boundary_gaps(const RevolutionBody3D& body, double rho_ambient = 0.0,
                                                    int m_max = 8) {
  BoundaryGeometry g = boundary_geometry(body);
  RevolutionGap gap = boundary_gap_revolution_modes(body, m_max);
  const double lambda = gap.lambda, sigma = g.min_II(), xi = g.min_H();
  const double tol = 1e-4;
  auto out = detail::boundary_gap_common(body.label, lambda, sigma, xi, rho_ambient, tol);
  const double n = 3.0, factor = (n - 1) / (n - 2);
  double minK = std::numeric_limits<double>::infinity(), invK = 0.0, invH = 0.0, invS = 0.0;
  const double area = g.boundary_measure();
  for (std::size_t j = 0; j < g.size(); ++j) {
    double s = std::min(g.kappa1[j], g.kappa2[j]);
    double K = (g.H_g[j] - s) * s;
    minK = std::min(minK, K);
    invK += g.element[j] / K;
    invH += g.element[j] / g.H_g[j];
    invS += g.element[j] / s;
  }
  CheckReport lich;
  lich.name = "boundary_gap_lichnerowicz";
  double lb = factor * (xi - sigma) * sigma;
  lich.set("body", body.label).set("sigma", sigma).set("xi", xi).set("lambda1", lambda).set("mode", gap.mode);
  lich.inequality(lb, lambda, tol * std::max(1.0, lb));
  CheckReport lichp;
  lichp.name = "boundary_gap_lichnerowicz_pointwise";
  double lp = factor * minK;
  lichp.set("body", body.label).set("min_H_minus_sigma_times_sigma", minK).set("lambda1", lambda);
  lichp.inequality(lp, lambda, tol * std::max(1.0, lp));
  CheckReport vey;
  vey.name = "boundary_gap_veysseire";
  double vb = area / invK;
  vey.set("body", body.label).set("harmonic_mean", vb).set("lambda1", lambda);
  vey.inequality(vb, lambda, tol * std::max(1.0, vb));
  CheckReport col;
  col.name = "boundary_gap_colesanti_ratio";
  double ratio = lambda * (invH / area) * (invS / area);
  col.set("body", body.label).set("lambda1", lambda).set("mean_inv_H", invH / area).set("mean_inv_sigma", invS / area);
  col.diagnostic(1.0, ratio);
  out.push_back(lich);
  out.push_back(lichp);
  out.push_back(vey);
  out.push_back(col);
  return out;
}

// ------------------------------------------------------------ boundary CD

namespace detail {

// Fourth-order r'' on the half grid with stencil spacing stride * h; r is odd
// about both poles. A fixed physical spacing keeps the roundoff in -r''/r
// bounded near the poles, where r ~ h.
inline Samples profile_second_derivative(const Samples& r, double h, long stride) {
  const long n = static_cast<long>(r.size());
  auto at = [&](long j) {
    if (j < 0) return -r[static_cast<std::size_t>(-j)];
    if (j >= n) return -r[static_cast<std::size_t>(2 * (n - 1) - j)];
    return r[static_cast<std::size_t>(j)];
  };
  const long k = stride;
  const double H = h * static_cast<double>(k);
  Samples d(r.size());
  for (long j = 0; j < n; ++j)
    d[static_cast<std::size_t>(j)] =
        (-at(j - 2 * k) + 16 * at(j - k) - 30 * at(j) + 16 * at(j + k) - at(j + 2 * k)) / (12 * H * H);
  return d;
}

}  // namespace detail

// Intrinsic Gauss curvature -r''/r of the meridian metric ds^2 + r^2 dphi^2
// against the Gauss-equation value (H g0 - II) II = k1 k2 (V = 0, flat ambient),
// the resulting CD(rho - kappa + (n-2) sigma^2, N-1) margin and the log-Sobolev
// constant, whose Poincare consequence is checked against lambda_1.
inline std::vector<CheckReport> boundary_cd_report(const RevolutionBody3D& body, double rho_ambient = 0.0,
                                                   double kappa_bound = 0.0,
                                                   const InverseDimension& theta = InverseDimension(1.0 / 3, 3)) {
  if (rho_ambient > 0) throw DomainError("Euclidean ambient satisfies CD(rho,N) only for rho <= 0");
  if (kappa_bound < 0) throw DomainError("flat ambient has R(.,nu,.,nu) = 0, so kappa_bound >= 0");
  InverseDimension th(theta.theta(), 3);
  if (th.is_minus_infinity() || (th.theta() < 0))
    throw DomainError("the log-Sobolev constant needs N in [n, inf]");
  const double h = body.half_step();
  const long stride = std::max(1L, static_cast<long>(2 * body.cells / 256));
  Samples d2 = detail::profile_second_derivative(body.r, h, stride);
  double disc = 0.0, minRic = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < body.samples(); ++j) {
    double K_int = -d2[j] / body.r[j];
    double K_gauss = body.kappa1[j] * body.kappa2[j];
    disc = std::max(disc, std::abs(K_int - K_gauss));
    minRic = std::min(minRic, K_int);
  }
  BoundaryGeometry g = boundary_geometry(body);
  const double sigma = g.min_II(), n = 3.0;
  const double cd = rho_ambient - kappa_bound + (n - 2) * sigma * sigma;
  const double nf = th.is_zero() ? 1.0 : (th.N() - 1) / (th.N() - 2);
  const double lambda_ls = cd * nf;
  const double lambda = boundary_gap_revolution(body);
  std::vector<CheckReport> out(3);
  out[0].name = "boundary_ricci_gauss_equation";
  out[0].set("body", body.label).set("cells", body.cells).set("stencil_spacing", h * static_cast<double>(stride))
      .set("max_discrepancy", disc);
  out[0].identity(disc, 0.0, 1e-6);
  out[0].grid(static_cast<double>(body.cells), disc);
  out[1].name = "boundary_cd_margin";
  out[1].set("body", body.label).set("rho", rho_ambient).set("kappa", kappa_bound).set("sigma", sigma)
      .set("N_boundary", th.is_zero() ? std::string("inf") : fmt_g(th.N() - 1));
  out[1].inequality(cd, minRic, 1e-6 * std::max(1.0, std::abs(cd)));
  out[2].name = "boundary_log_sobolev_gap";
  out[2].set("body", body.label).set("lambda_LS", lambda_ls).set("lambda1", lambda).set("N", th.spell_N());
  if (!(lambda_ls > 0)) throw CurvatureNotPositive("log-Sobolev constant must be positive, found " + fmt_g(lambda_ls));
  out[2].inequality(lambda_ls, lambda, 1e-4 * lambda_ls);
  return out;
}

}  // namespace reilly_lab
