#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "errors.hpp"
#include "inverse_dimension.hpp"
#include "model_spaces.hpp"
#include "numerics.hpp"
#include "operators.hpp"

namespace reilly_lab {

enum class ReillyVariant { Full, NeumannConst, DirichletConst };

inline const char* to_string(ReillyVariant v) {
  switch (v) {
    case ReillyVariant::Full: return "full";
    case ReillyVariant::NeumannConst: return "neumann_const";
    default: return "dirichlet_const";
  }
}

inline CheckReport cd_margin(const IntervalModel& model, double rho, const InverseDimension& theta) {
  Samples ric = model.ric(theta);
  double mn = ric[0];
  for (double r : ric) mn = std::min(mn, r);
  CheckReport rep;
  rep.name = "cd_margin";
  rep.set("model", model.label).set("rho", rho).set("N", theta.spell_N()).set("n_pts", model.n_pts());
  rep.inequality(rho, mn, 1e-8 * (1 + std::abs(rho)));
  rep.grid(static_cast<double>(model.n_pts()), mn - rho);
  return rep;
}

// Derivative samples u', u'' of a test function on the model grid.
struct Derivatives {
  Samples d1, d2;
};

inline Derivatives differentiate(const IntervalModel& model, const Samples& u) {
  if (u.size() != model.n_pts()) throw DomainError("sample length mismatch");
  return {fd4_first(u, model.h()), fd4_second(u, model.h())};
}

// Pointwise Gamma_2(u) - rho |u'|^2 - theta (Lu)^2; NaN marks vacuous nodes
// at theta = -inf (Lu != 0 there).
inline Samples gamma2_field(const IntervalModel& model, const Derivatives& du, double rho, const InverseDimension& theta) {
  const Samples &d1 = du.d1, &d2 = du.d2;
  Samples out(d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    double Lu = d2[i] - model.dV[i] * d1[i];
    double g2 = d2[i] * d2[i] + model.ddV[i] * d1[i] * d1[i];
    double base = g2 - rho * d1[i] * d1[i];
    if (theta.is_minus_infinity()) {
      out[i] = std::abs(Lu) <= 1e-12 ? base : std::numeric_limits<double>::quiet_NaN();
    } else {
      out[i] = base - theta.theta() * Lu * Lu;
    }
  }
  return out;
}

inline Samples gamma2_field(const IntervalModel& model, const Samples& u, double rho, const InverseDimension& theta) {
  return gamma2_field(model, differentiate(model, u), rho, theta);
}

inline CheckReport gamma2_residual(const IntervalModel& model, const Derivatives& du, double rho,
                                   const InverseDimension& theta) {
  if (du.d1.size() != model.n_pts() || du.d2.size() != model.n_pts()) throw DomainError("sample length mismatch");
  Samples field = gamma2_field(model, du, rho, theta);
  double mn = std::numeric_limits<double>::infinity();
  long long vacuous = 0;
  for (double r : field) {
    if (std::isnan(r)) ++vacuous;
    else mn = std::min(mn, r);
  }
  CheckReport rep;
  rep.name = "gamma2_residual";
  rep.set("model", model.label).set("rho", rho).set("N", theta.spell_N()).set("vacuous_nodes", vacuous);
  const double h = model.h();
  rep.inequality(0.0, vacuous == static_cast<long long>(field.size()) ? 0.0 : mn, 10 * h * h);
  rep.grid(static_cast<double>(model.n_pts()), rep.rhs);
  return rep;
}

inline CheckReport gamma2_residual(const IntervalModel& model, const Samples& u, double rho, const InverseDimension& theta) {
  return gamma2_residual(model, differentiate(model, u), rho, theta);
}

namespace detail {

inline double identity_tolerance(double h, std::initializer_list<double> terms) {
  double m = 0.0;
  for (double t : terms) m = std::max(m, std::abs(t));
  return 10 * h * h * std::max(m, 1e-300);
}

inline void fill_reilly(CheckReport& rep, double lhs, double hess, double ric, double bdry, double h) {
  double rhs = hess + ric + bdry;
  rep.set("int_Lu2", lhs).set("int_hess2", hess).set("int_ric", ric).set("boundary_H_unu2", bdry);
  double largest = std::max({std::abs(lhs), std::abs(hess), std::abs(ric), std::abs(bdry)});
  rep.set("largest_term", largest);
  rep.identity(lhs, rhs, identity_tolerance(h, {lhs, hess, ric, bdry}));
  rep.set("relative_residual", largest > 0 ? std::abs(lhs - rhs) / largest : 0.0);
}

}  // namespace detail

// Reilly identity on an interval: the boundary is the endpoint pair, with
// nu = +1, H_mu = -V'(b) on the right and nu = -1, H_mu = +V'(a) on the left.
inline CheckReport reilly_residual(const IntervalModel& model, const Samples& u, ReillyVariant variant = ReillyVariant::Full) {
  if (u.size() != model.n_pts()) throw DomainError("sample length mismatch");
  const double h = model.h();
  const std::size_t n = u.size();
  Samples d1 = fd4_first(u, h), d2 = fd4_second(u, h);
  Samples Lu2(n), hess(n), ric(n);
  for (std::size_t i = 0; i < n; ++i) {
    double Lu = d2[i] - model.dV[i] * d1[i];
    Lu2[i] = Lu * Lu;
    hess[i] = d2[i] * d2[i];
    ric[i] = model.ddV[i] * d1[i] * d1[i];
  }
  double unu_a = -d1[0], unu_b = d1[n - 1];
  double scale = std::max({1.0, std::abs(unu_a), std::abs(unu_b)});
  if (variant == ReillyVariant::NeumannConst && std::abs(unu_a - unu_b) > 1e-6 * scale)
    throw DomainError("u_nu is not constant on the boundary");
  if (variant == ReillyVariant::DirichletConst && std::abs(u[0] - u[n - 1]) > 1e-9 * std::max(1.0, max_abs(u)))
    throw DomainError("u is not constant on the boundary");
  double bdry = model.dV[0] * unu_a * unu_a * std::exp(-model.V[0]) +
                (-model.dV[n - 1]) * unu_b * unu_b * std::exp(-model.V[n - 1]);
  CheckReport rep;
  rep.name = "reilly_residual";
  rep.set("domain", model.label).set("variant", to_string(variant)).set("n_pts", n);
  detail::fill_reilly(rep, weighted_integral(Lu2, model), weighted_integral(hess, model), weighted_integral(ric, model),
                      bdry, h);
  rep.grid(static_cast<double>(n), rep.lhs - rep.rhs);
  return rep;
}

// Radial Reilly identity on a ball: ||Hess u||^2 = u''^2 + (n-1)(u'/r)^2 and
// Lu = u'' + (n-1)u'/r - V'u'; at r = 0, u'/r is replaced by u''(0).
inline CheckReport reilly_residual(const RadialBall& ball, const Samples& u, ReillyVariant variant = ReillyVariant::Full) {
  if (u.size() != ball.r.size()) throw DomainError("sample length mismatch");
  const double h = ball.h();
  const std::size_t n = u.size();
  const double k = ball.n_ambient - 1;
  Samples d1 = fd4_first(u, h), d2 = fd4_second(u, h);
  Samples Lu2(n), hess(n), ric(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = i == 0 ? d2[0] : d1[i] / ball.r[i];
    double Lu = d2[i] + k * q - ball.dV[i] * d1[i];
    Lu2[i] = Lu * Lu;
    hess[i] = d2[i] * d2[i] + k * q * q;
    ric[i] = ball.ddV[i] * d1[i] * d1[i];
  }
  BoundaryGeometry g = boundary_geometry(ball);
  double bdry = g.H_mu[0] * d1[n - 1] * d1[n - 1] * g.element[0];
  CheckReport rep;
  rep.name = "reilly_residual";
  rep.set("domain", ball.label).set("variant", to_string(variant)).set("n_pts", n);
  detail::fill_reilly(rep, weighted_integral(Lu2, ball), weighted_integral(hess, ball), weighted_integral(ric, ball),
                      bdry, h);
  rep.grid(static_cast<double>(n), rep.lhs - rep.rhs);
  return rep;
}

// Polar samples, one ray of radial samples per angle; rejects angular variation.
inline CheckReport reilly_residual(const RadialBall& ball, const std::vector<Samples>& rays,
                                   ReillyVariant variant = ReillyVariant::Full) {
  if (rays.empty()) throw DomainError("no samples");
  double scale = std::max(1.0, max_abs(rays[0]));
  for (const Samples& ray : rays) {
    if (ray.size() != rays[0].size()) throw DomainError("ray length mismatch");
    for (std::size_t i = 0; i < ray.size(); ++i)
      if (std::abs(ray[i] - rays[0][i]) > 1e-12 * scale)
        throw NonRadialInput("angular variation detected at radial node " + std::to_string(i));
  }
  return reilly_residual(ball, rays[0], variant);
}

// Runs a check at several resolutions. The finest report is kept with all
// residuals in grids (relative to the largest term) and the observed order.
// When every residual sits at the roundoff floor the order is not
// measurable and the report says so.
inline CheckReport refine(const std::function<CheckReport(std::size_t)>& run, const std::vector<std::size_t>& resolutions) {
  CheckReport last;
  std::vector<std::pair<double, double>> g;
  bool floor = true;
  for (std::size_t n : resolutions) {
    last = run(n);
    double rel = last.get_double("relative_residual");
    if (std::isnan(rel)) rel = std::abs(last.lhs - last.rhs);
    g.emplace_back(static_cast<double>(n), rel);
    if (rel > 1e-13) floor = false;
  }
  last.grids = g;
  last.order_estimate = estimate_order(g);
  last.set("at_roundoff_floor", floor);
  return last;
}

}  // namespace reilly_lab
