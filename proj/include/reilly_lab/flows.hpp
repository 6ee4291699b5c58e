#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "errors.hpp"
#include "inequality_suite.hpp"
#include "inverse_dimension.hpp"
#include "model_spaces.hpp"
#include "numerics.hpp"
#include "operators.hpp"

namespace reilly_lab {

using Vec3 = std::array<double, 3>;

namespace detail {

inline Vec3 add(const Vec3& a, const Vec3& b, double s = 1.0) { return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; }
inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
inline Vec3 scale3(const Vec3& a, double s) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 normalized(const Vec3& a) { return scale3(a, 1.0 / norm3(a)); }

}  // namespace detail

// ------------------------------------------------------------ Minkowski sums

inline ConvexPlaneBody minkowski_sum_support(const ConvexPlaneBody& K, const ConvexPlaneBody& L, double t) {
  if (!(t >= 0)) throw DomainError("Minkowski extension needs t >= 0");
  if (t == 0.0) return K;
  return build_plane_body(K.support.plus(L.support, t), K.m, K.label + "+" + fmt_g(t) + "*" + L.label);
}

inline double geodesic_extension_measure(const ConvexPlaneBody& K, double t) {
  if (!(t >= 0)) throw DomainError("geodesic extension needs t >= 0");
  return build_plane_body(K.support.plus(TrigSeries::constant(t)), K.m).area();
}

inline double geodesic_extension_measure(const SphereCap& cap, double t) {
  if (!(t >= 0)) throw DomainError("geodesic extension needs t >= 0");
  if (cap.r_cap + t >= kPi) throw CapOverflow("cap radius " + fmt_g(cap.r_cap) + " + t = " + fmt_g(t) + " reaches pi");
  return kTwoPi * (1 - std::cos(cap.r_cap + t));
}

// ------------------------------------------------------------ quermassintegrals

struct QuermassTriple {
  double W_N = 0, W_N1 = 0, W_N2 = 0;
  double delta0 = 0, delta1 = 0, delta2 = 0;
  CheckReport alexandrov;
};

namespace detail {

inline QuermassTriple quermass_from(double d0, double d1, double d2, const InverseDimension& theta,
                                    const std::string& ref) {
  if (theta.is_zero() || theta.is_minus_infinity()) throw DomainError("quermassintegrals need finite nonzero N");
  const double N = theta.N();
  if (std::abs(N - 1) < 1e-12) throw DomainError("quermassintegrals need N != 1");
  QuermassTriple q;
  q.delta0 = d0;
  q.delta1 = d1;
  q.delta2 = d2;
  q.W_N = d0;
  q.W_N1 = d1 / N;
  q.W_N2 = d2 / (N * (N - 1));
  q.alexandrov.name = "alexandrov_quermass";
  q.alexandrov.set("body", ref).set("N", theta.spell_N()).set("W_N", q.W_N).set("W_N1", q.W_N1).set("W_N2", q.W_N2);
  double lhs = q.W_N * q.W_N2, rhs = q.W_N1 * q.W_N1;
  q.alexandrov.inequality(lhs, rhs, 1e-9 * std::max(1.0, rhs));
  return q;
}

}  // namespace detail

// delta^0 = mu(K), delta^1 = mu(dK), delta^2 = int H_mu dmu (Lebesgue measure).
inline QuermassTriple quermassintegrals(const ConvexPlaneBody& K, const InverseDimension& theta = InverseDimension(0.5, 2)) {
  BoundaryGeometry g = boundary_geometry(K);
  return detail::quermass_from(K.area(), K.perimeter(), g.integrate(g.H_mu), theta, K.label);
}

inline QuermassTriple quermassintegrals(const SphereCap& cap, const InverseDimension& theta = InverseDimension(0.5, 2)) {
  return detail::quermass_from(cap.area(), cap.boundary_length(), kTwoPi * std::cos(cap.r_cap), theta, cap.label());
}

// ------------------------------------------------------------ concavity

struct ConcavitySeries {
  InverseDimension theta = InverseDimension(0.5, 2);
  std::vector<double> times, masses, transformed;

  void push(double t, double mass) {
    if (!(mass > 0)) throw DomainError("concavity series needs positive masses");
    times.push_back(t);
    masses.push_back(mass);
    transformed.push_back(theta.power_transform(mass));
  }
  std::size_t size() const { return times.size(); }
};

inline ConcavitySeries make_series(const InverseDimension& theta, const std::vector<double>& times,
                                   const std::vector<double>& masses) {
  if (times.size() != masses.size()) throw DomainError("series length mismatch");
  ConcavitySeries s;
  s.theta = theta;
  for (std::size_t i = 0; i < times.size(); ++i) s.push(times[i], masses[i]);
  return s;
}

// lhs = max central second difference of N mu^{1/N}; tolerance = coeff * dt^2.
inline CheckReport concavity_check(const ConcavitySeries& s, double coeff = 1e-6, const std::string& ref = "") {
  if (s.size() < 3) throw DomainError("concavity needs at least 3 samples");
  const double dt = s.times[1] - s.times[0];
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s.times[i] - s.times[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw DomainError("concavity needs uniform time spacing");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    worst = std::max(worst, s.transformed[i + 1] - 2 * s.transformed[i] + s.transformed[i - 1]);
  CheckReport rep;
  rep.name = "concavity";
  rep.set("series", ref).set("N", s.theta.spell_N()).set("samples", s.size()).set("dt", dt)
      .set("max_second_difference_over_dt2", worst / (dt * dt));
  bool monotone = true;
  for (std::size_t i = 1; i < s.size(); ++i) monotone = monotone && s.masses[i] >= s.masses[i - 1];
  rep.set("masses_non_decreasing", monotone);
  rep.inequality(worst, 0.0, coeff * dt * dt);
  return rep;
}

// ------------------------------------------------------------ polylines

namespace detail {

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double L2 = dx * dx + dy * dy;
  double s = L2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / L2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - a.x - s * dx, p.y - a.y - s * dy);
}

inline double directed_hausdorff(const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
  double d = 0.0;
  for (const Vec2& p : A) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < B.size(); ++j) best = std::min(best, point_segment_distance(p, B[j], B[(j + 1) % B.size()]));
    d = std::max(d, best);
  }
  return d;
}

inline bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) { return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace detail

// Symmetric Hausdorff distance between two closed polylines.
inline double hausdorff_distance(const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
  return std::max(detail::directed_hausdorff(A, B), detail::directed_hausdorff(B, A));
}

// Convex-turning test: all turns positive with total 2 pi means the polygon is
// simple; otherwise fall back to the pairwise segment sweep.
inline bool polyline_self_intersects(const std::vector<Vec2>& P) {
  const std::size_t m = P.size();
  double total = 0.0;
  bool all_left = true;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2 &a = P[(k + m - 1) % m], &b = P[k], &c = P[(k + 1) % m];
    double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - b.x, vy = c.y - b.y;
    double turn = std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
    if (!(turn > 0)) all_left = false;
    total += turn;
  }
  if (all_left && std::abs(total - kTwoPi) < 1e-6) return false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (detail::segments_cross(P[i], P[(i + 1) % m], P[j], P[(j + 1) % m])) return true;
    }
  return false;
}

// ------------------------------------------------------------ flow states

struct FlowState {
  double t = 0.0;
  std::vector<Vec3> points, normals;
  Samples phi, kappa;
  bool alive = true;
};

struct FlowOptions {
  double kappa_floor = 1e-4;
  std::size_t record_every = 0;  // 0 keeps the first and last state only
  InverseDimension theta = InverseDimension(0.5, 2);
};

struct FlowResult {
  std::vector<FlowState> states;
  ConcavitySeries series;
  double normal_drift = 0.0;  // accumulated max per-step normal change
  bool alive = true;
  std::string death_reason;
  std::size_t steps = 0;
  double dt = 0.0;
  bool spherical = false;
  std::vector<double> area_crosscheck;  // sphere: |Gauss-Bonnet - band| per step
  std::size_t substeps = 1;

  const FlowState& final_state() const { return states.back(); }
  std::vector<Vec2> final_curve() const {
    std::vector<Vec2> c;
    for (const Vec3& p : states.back().points) c.push_back({p[0], p[1]});
    return c;
  }
};

namespace detail {

struct CurveFrame {
  std::vector<Vec3> normal, tangent;
  Samples kappa, speed;  // speed = |dx/dp| with p = 2 pi k / m
};

inline Samples component(const std::vector<Vec3>& x, int c) {
  Samples s(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) s[k] = x[k][c];
  return s;
}

// Plane curve, counter-clockwise: nu = (y_p, -x_p)/|x_p|, kappa = (x_p y_pp - y_p x_pp)/|x_p|^3.
inline CurveFrame plane_frame(const std::vector<Vec3>& x) {
  const std::size_t m = x.size();
  const double h = kTwoPi / static_cast<double>(m);
  Samples X = component(x, 0), Y = component(x, 1);
  Samples xp = periodic_fd4_first(X, h), yp = periodic_fd4_first(Y, h);
  Samples xpp = periodic_fd4_second(X, h), ypp = periodic_fd4_second(Y, h);
  CurveFrame f;
  f.normal.resize(m);
  f.tangent.resize(m);
  f.kappa.resize(m);
  f.speed.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double sp = std::hypot(xp[k], yp[k]);
    f.speed[k] = sp;
    f.tangent[k] = {xp[k] / sp, yp[k] / sp, 0.0};
    f.normal[k] = {yp[k] / sp, -xp[k] / sp, 0.0};
    f.kappa[k] = (xp[k] * ypp[k] - yp[k] * xpp[k]) / (sp * sp * sp);
  }
  return f;
}

// Curve on the unit sphere in embedded coordinates: tangent-plane projected
// derivatives, nu = T x X, geodesic curvature kappa = -<x_pp, nu>/|x_p|^2.
inline CurveFrame sphere_frame(const std::vector<Vec3>& x) {
  const std::size_t m = x.size();
  const double h = kTwoPi / static_cast<double>(m);
  std::array<Samples, 3> d1, d2;
  for (int c = 0; c < 3; ++c) {
    Samples s = component(x, c);
    d1[c] = periodic_fd4_first(s, h);
    d2[c] = periodic_fd4_second(s, h);
  }
  CurveFrame f;
  f.normal.resize(m);
  f.tangent.resize(m);
  f.kappa.resize(m);
  f.speed.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    Vec3 X = x[k], xp{d1[0][k], d1[1][k], d1[2][k]}, xpp{d2[0][k], d2[1][k], d2[2][k]};
    xp = add(xp, X, -dot3(xp, X));
    double sp = norm3(xp);
    Vec3 T = scale3(xp, 1.0 / sp);
    Vec3 nu = cross(T, X);
    f.speed[k] = sp;
    f.tangent[k] = T;
    f.normal[k] = nu;
    f.kappa[k] = -dot3(xpp, nu) / (sp * sp);
  }
  return f;
}

// omega = phi nu + II^{-1} grad phi = phi nu + (phi_s / kappa) T.
inline std::vector<Vec3> parallel_normal_velocity(const CurveFrame& f, const Samples& phi, const Samples& dphi_dp) {
  std::vector<Vec3> v(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    double tang = dphi_dp[k] / (f.speed[k] * f.kappa[k]);
    v[k] = add(scale3(f.normal[k], phi[k]), f.tangent[k], tang);
  }
  return v;
}

inline double plane_area(const std::vector<Vec3>& x) {
  Samples X = component(x, 0), Y = component(x, 1);
  Samples xp = spectral_derivative(X, 1), yp = spectral_derivative(Y, 1);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += X[k] * yp[k] - Y[k] * xp[k];
  return 0.5 * s * kTwoPi / static_cast<double>(x.size());
}

// Gauss-Bonnet: A = 2 pi - int kappa_g ds (Gauss curvature 1).
inline double sphere_area_gauss_bonnet(const CurveFrame& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.kappa.size(); ++k) s += f.kappa[k] * f.speed[k];
  return kTwoPi - s * kTwoPi / static_cast<double>(f.kappa.size());
}

inline Vec3 mean_direction(const std::vector<Vec3>& x) {
  Vec3 c{0, 0, 0};
  for (const Vec3& p : x) c = add(c, p);
  double n = norm3(c);
  return n > 0 ? scale3(c, 1.0 / n) : Vec3{0, 0, 1};
}

// Latitude-band quadrature about the mean direction c: A = int (1 - <x,c>) dphi_c.
inline double sphere_area_band(const std::vector<Vec3>& x) {
  Vec3 c = mean_direction(x);
  Vec3 e1 = std::abs(c[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  e1 = normalized(add(e1, c, -dot3(e1, c)));
  Vec3 e2 = cross(c, e1);
  const std::size_t m = x.size();
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec3 &a = x[k], &b = x[(k + 1) % m];
    double pa = std::atan2(dot3(a, e2), dot3(a, e1)), pb = std::atan2(dot3(b, e2), dot3(b, e1));
    double d = pb - pa;
    if (d > kPi) d -= kTwoPi;
    if (d < -kPi) d += kTwoPi;
    s += (1 - 0.5 * (dot3(a, c) + dot3(b, c))) * d;
  }
  return s;
}

// Stereographic chart from the antipode of the mean direction.
inline std::vector<Vec2> sphere_chart(const std::vector<Vec3>& x) {
  Vec3 c = mean_direction(x);
  Vec3 e1 = std::abs(c[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  e1 = normalized(add(e1, c, -dot3(e1, c)));
  Vec3 e2 = cross(c, e1);
  std::vector<Vec2> out;
  for (const Vec3& p : x) {
    double w = 1 + dot3(p, c);
    out.push_back({dot3(p, e1) / w, dot3(p, e2) / w});
  }
  return out;
}

inline std::vector<Vec2> planar(const std::vector<Vec3>& x) {
  std::vector<Vec2> out;
  for (const Vec3& p : x) out.push_back({p[0], p[1]});
  return out;
}

// Rotation carrying a to b along their great circle, applied to v.
inline Vec3 transport(const Vec3& a, const Vec3& b, const Vec3& v) {
  Vec3 axis = cross(a, b);
  double s = norm3(axis), c = dot3(a, b);
  if (s < 1e-300) return v;
  Vec3 k = scale3(axis, 1.0 / s);
  return add(add(scale3(v, c), cross(k, v), s), k, dot3(k, v) * (1 - c));
}

inline Samples sample_phi(const TestFunction& phi, const Samples& angles) {
  if (phi.kind == TestFunctionKind::GridSamples) {
    if (phi.samples.size() != angles.size()) throw DomainError("phi sample length mismatch");
    Samples s(angles.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = phi.scale * phi.samples[k] + phi.offset;
    return s;
  }
  if (phi.kind != TestFunctionKind::TrigPoly) throw DomainError("flow speeds are trig polynomials or samples");
  Samples s(angles.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = phi.eval(angles[k]);
  return s;
}

inline FlowState make_state(double t, const std::vector<Vec3>& x, const CurveFrame& f, const Samples& phi, bool alive) {
  return {t, x, f.normal, phi, f.kappa, alive};
}

// Fixed-step RK4 driver shared by the plane and sphere parallel normal flows.
template <class Frame, class Area, class Chart>
FlowResult run_parallel_normal(std::vector<Vec3> x, const Samples& phi, double t_end, double dt, const FlowOptions& opt,
                               bool spherical, Frame frame, Area area, Chart chart) {
  if (!(dt > 0) || !(t_end > 0)) throw DomainError("flow needs positive dt and t_end");
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
  if (steps == 0 || std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * t_end)
    throw DomainError("t_end must be an integer multiple of dt");
  const std::size_t m = x.size();
  const Samples dphi = periodic_fd4_first(phi, kTwoPi / static_cast<double>(m));
  FlowResult res;
  res.spherical = spherical;
  res.dt = dt;
  res.series.theta = opt.theta;
  auto project = [&](std::vector<Vec3> y) {
    if (spherical)
      for (Vec3& p : y) p = normalized(p);
    return y;
  };
  auto velocity = [&](const std::vector<Vec3>& y) { return parallel_normal_velocity(frame(project(y)), phi, dphi); };
  CurveFrame f = frame(x);
  res.states.push_back(make_state(0.0, x, f, phi, true));
  res.series.push(0.0, area(x, f));
  for (std::size_t n = 0; n < steps; ++n) {
    auto k1 = velocity(x);
    std::vector<Vec3> y(m);
    for (std::size_t k = 0; k < m; ++k) y[k] = add(x[k], k1[k], 0.5 * dt);
    auto k2 = velocity(y);
    for (std::size_t k = 0; k < m; ++k) y[k] = add(x[k], k2[k], 0.5 * dt);
    auto k3 = velocity(y);
    for (std::size_t k = 0; k < m; ++k) y[k] = add(x[k], k3[k], dt);
    auto k4 = velocity(y);
    std::vector<Vec3> xn(m);
    for (std::size_t k = 0; k < m; ++k) {
      Vec3 inc = add(add(k1[k], k2[k], 2.0), add(k3[k], k3[k]), 1.0);
      inc = add(inc, k4[k]);
      xn[k] = add(x[k], inc, dt / 6.0);
    }
    xn = project(xn);
    CurveFrame fn = frame(xn);
    double drift = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      Vec3 prev = spherical ? transport(x[k], xn[k], f.normal[k]) : f.normal[k];
      drift = std::max(drift, norm3(add(fn.normal[k], prev, -1.0)));
    }
    res.normal_drift += drift;
    x = std::move(xn);
    f = std::move(fn);
    const double t = static_cast<double>(n + 1) * dt;
    res.steps = n + 1;
    double kmin = *std::min_element(f.kappa.begin(), f.kappa.end());
    std::string reason;
    if (!(kmin > opt.kappa_floor)) reason = "kappa_floor";
    else if (polyline_self_intersects(chart(x))) reason = "self_intersection";
    if (!reason.empty()) {
      res.alive = false;
      res.death_reason = reason;
      res.states.push_back(make_state(t, x, f, phi, false));
      return res;
    }
    res.series.push(t, area(x, f));
    if (spherical) res.area_crosscheck.push_back(std::abs(sphere_area_gauss_bonnet(f) - sphere_area_band(x)));
    bool last = n + 1 == steps;
    if (last || (opt.record_every > 0 && (n + 1) % opt.record_every == 0)) res.states.push_back(make_state(t, x, f, phi, true));
  }
  return res;
}

}  // namespace detail

// Lagrangian markers on dK at the normal angles theta_k; phi is fixed per marker.
inline FlowResult parallel_normal_flow(const ConvexPlaneBody& K, const TestFunction& phi, double t_end, double dt,
                                       const FlowOptions& opt = {}) {
  if (!(*std::min_element(K.radius.begin(), K.radius.end()) > 0)) throw ConvexityViolation("initial curve must be strictly convex");
  std::vector<Vec3> x;
  for (const Vec2& p : K.boundary_points()) x.push_back({p.x, p.y, 0.0});
  Samples ph = detail::sample_phi(phi, K.theta);
  return detail::run_parallel_normal(
      std::move(x), ph, t_end, dt, opt, false, [](const std::vector<Vec3>& y) { return detail::plane_frame(y); },
      [](const std::vector<Vec3>& y, const detail::CurveFrame&) { return detail::plane_area(y); },
      [](const std::vector<Vec3>& y) { return detail::planar(y); });
}

// Latitude circle at polar angle r about the north pole, as m markers.
inline std::vector<Vec3> sphere_latitude_curve(double polar, std::size_t m) {
  if (!(polar > 0 && polar < kPi / 2)) throw DomainError("latitude circle must bound a convex cap (0 < r < pi/2)");
  std::vector<Vec3> x(m);
  for (std::size_t k = 0; k < m; ++k) {
    double p = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    x[k] = {std::sin(polar) * std::cos(p), std::sin(polar) * std::sin(p), std::cos(polar)};
  }
  return x;
}

// Curve on the unit sphere; phi is sampled at the marker parameters 2 pi k / m.
inline FlowResult parallel_normal_flow_sphere(const std::vector<Vec3>& curve, const TestFunction& phi, double t_end,
                                              double dt, const FlowOptions& opt = {}) {
  std::vector<Vec3> x;
  for (const Vec3& p : curve) x.push_back(detail::normalized(p));
  detail::CurveFrame f0 = detail::sphere_frame(x);
  if (!(*std::min_element(f0.kappa.begin(), f0.kappa.end()) > 0)) throw ConvexityViolation("initial curve must be strictly convex");
  Samples ph = detail::sample_phi(phi, uniform_angles(x.size()));
  return detail::run_parallel_normal(
      std::move(x), ph, t_end, dt, opt, true, [](const std::vector<Vec3>& y) { return detail::sphere_frame(y); },
      [](const std::vector<Vec3>&, const detail::CurveFrame& f) { return detail::sphere_area_gauss_bonnet(f); },
      [](const std::vector<Vec3>& y) { return detail::sphere_chart(y); });
}

// ------------------------------------------------------------ Weingarten wave

struct WeingartenResult {
  FlowResult flow;
  CheckReport minkowski_deviation;  // diagnostic against K + t phi_0
};

namespace detail {

// L psi = (kappa^{-1} psi_s)_s in arclength (V = 0), differentiated in the
// marker parameter: psi_s = psi_p / |x_p|.
inline Samples weingarten_laplacian(const CurveFrame& f, const Samples& psi) {
  const std::size_t m = psi.size();
  const double h = kTwoPi / static_cast<double>(m);
  Samples dpsi = periodic_fd4_first(psi, h), flux(m), out(m);
  for (std::size_t k = 0; k < m; ++k) flux[k] = dpsi[k] / (f.speed[k] * f.kappa[k]);
  Samples df = periodic_fd4_first(flux, h);
  for (std::size_t k = 0; k < m; ++k) out[k] = df[k] / f.speed[k];
  return out;
}

}  // namespace detail

// Coupled dF/dt = phi nu, d(log phi)/dt = L phi. The explicit step is split
// into a fixed number of substeps set from the initial diffusion number.
inline WeingartenResult weingarten_wave(const ConvexPlaneBody& K, const TestFunction& phi0, double t_end, double dt,
                                        const FlowOptions& opt = {}) {
  if (!(*std::min_element(K.radius.begin(), K.radius.end()) > 0)) throw ConvexityViolation("initial curve must be strictly convex");
  if (!(dt > 0) || !(t_end > 0)) throw DomainError("flow needs positive dt and t_end");
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
  if (steps == 0 || std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * t_end)
    throw DomainError("t_end must be an integer multiple of dt");
  const std::size_t m = K.m;
  std::vector<Vec3> x;
  for (const Vec2& p : K.boundary_points()) x.push_back({p.x, p.y, 0.0});
  Samples phi = detail::sample_phi(phi0, K.theta);
  for (double v : phi)
    if (!(v > 0)) throw PositivityLoss("initial speed must be positive");
  Samples u(m);
  for (std::size_t k = 0; k < m; ++k) u[k] = std::log(phi[k]);

  detail::CurveFrame f = detail::plane_frame(x);
  double hs = std::numeric_limits<double>::infinity(), coef = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    hs = std::min(hs, f.speed[k] * kTwoPi / static_cast<double>(m));
    coef = std::max(coef, phi[k] / f.kappa[k]);
  }
  // RK4 real-axis limit 2.78 against the FD4 symbol bound 16/(3 h^2), with margin.
  const double dt_stable = 0.25 * hs * hs / coef;
  const std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt / dt_stable)));
  const double tau = dt / static_cast<double>(sub);

  WeingartenResult out;
  FlowResult& res = out.flow;
  res.dt = dt;
  res.substeps = sub;
  res.series.theta = opt.theta;
  res.states.push_back(detail::make_state(0.0, x, f, phi, true));
  res.series.push(0.0, detail::plane_area(x));

  auto rhs = [&](const std::vector<Vec3>& y, const Samples& uu, std::vector<Vec3>& vx, Samples& vu) {
    detail::CurveFrame fr = detail::plane_frame(y);
    Samples ph(m);
    for (std::size_t k = 0; k < m; ++k) ph[k] = std::exp(uu[k]);
    vx.resize(m);
    for (std::size_t k = 0; k < m; ++k) vx[k] = detail::scale3(fr.normal[k], ph[k]);
    vu = detail::weingarten_laplacian(fr, ph);
  };

  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t s = 0; s < sub; ++s) {
      std::vector<Vec3> k1x, k2x, k3x, k4x, y(m);
      Samples k1u, k2u, k3u, k4u, w(m);
      rhs(x, u, k1x, k1u);
      for (std::size_t k = 0; k < m; ++k) {
        y[k] = detail::add(x[k], k1x[k], 0.5 * tau);
        w[k] = u[k] + 0.5 * tau * k1u[k];
      }
      rhs(y, w, k2x, k2u);
      for (std::size_t k = 0; k < m; ++k) {
        y[k] = detail::add(x[k], k2x[k], 0.5 * tau);
        w[k] = u[k] + 0.5 * tau * k2u[k];
      }
      rhs(y, w, k3x, k3u);
      for (std::size_t k = 0; k < m; ++k) {
        y[k] = detail::add(x[k], k3x[k], tau);
        w[k] = u[k] + tau * k3u[k];
      }
      rhs(y, w, k4x, k4u);
      for (std::size_t k = 0; k < m; ++k) {
        Vec3 inc = detail::add(detail::add(k1x[k], k2x[k], 2.0), detail::add(k3x[k], k3x[k]), 1.0);
        x[k] = detail::add(x[k], detail::add(inc, k4x[k]), tau / 6.0);
        u[k] += tau / 6.0 * (k1u[k] + 2 * k2u[k] + 2 * k3u[k] + k4u[k]);
      }
    }
    f = detail::plane_frame(x);
    for (std::size_t k = 0; k < m; ++k) phi[k] = std::exp(u[k]);
    const double t = static_cast<double>(n + 1) * dt;
    res.steps = n + 1;
    std::string reason;
    double kmin = *std::min_element(f.kappa.begin(), f.kappa.end());
    double pmin = *std::min_element(phi.begin(), phi.end());
    if (!(pmin > 0) || !std::isfinite(pmin)) reason = "positivity_loss";
    else if (!(kmin > opt.kappa_floor)) reason = "kappa_floor";
    else if (polyline_self_intersects(detail::planar(x))) reason = "self_intersection";
    if (!reason.empty()) {
      res.alive = false;
      res.death_reason = reason;
      res.states.push_back(detail::make_state(t, x, f, phi, false));
      break;
    }
    res.series.push(t, detail::plane_area(x));
    bool last = n + 1 == steps;
    if (last || (opt.record_every > 0 && (n + 1) % opt.record_every == 0))
      res.states.push_back(detail::make_state(t, x, f, phi, true));
  }

  CheckReport& dev = out.minkowski_deviation;
  dev.name = "weingarten_vs_minkowski";
  dev.set("body", K.label).set("substeps", sub).set("alive", res.alive);
  double d = std::nan("");
  if (res.alive && phi0.kind == TestFunctionKind::TrigPoly) {
    TrigSeries ph = phi0.coeffs.scaled(phi0.scale).plus(TrigSeries::constant(phi0.offset));
    try {
      ConvexPlaneBody oracle = build_plane_body(K.support.plus(ph, t_end), m);
      d = hausdorff_distance(res.final_curve(), oracle.boundary_points());
    } catch (const ConvexityViolation&) {
    }
  }
  dev.set("hausdorff", d);
  dev.diagnostic(0.0, d);
  return out;
}

// ------------------------------------------------------------ isoperimetry

// Minkowski-extension masses and mu^+ (Richardson over {h, 2h}).
inline double boundary_measure_richardson(const ConvexPlaneBody& K, const ConvexPlaneBody& L, double h) {
  const double A0 = K.area();
  double D1 = (minkowski_sum_support(K, L, h).area() - A0) / h;
  double D2 = (minkowski_sum_support(K, L, 2 * h).area() - A0) / (2 * h);
  return 2 * D1 - D2;
}

inline double inradius_about_origin(const ConvexPlaneBody& K) { return *std::min_element(K.h.begin(), K.h.end()); }

// Three assertions: concavity of N mu(K+tL)^{1/N} over t_grid; the
// isoperimetric bound (sup over t_grid, then the homogeneous bound); and
// monotonicity of I_K(v)^{N/(N-1)}/v along the extension family.
inline std::vector<CheckReport> isoperimetric_checks(const ConvexPlaneBody& K, const ConvexPlaneBody& L,
                                                     const InverseDimension& theta_in, const std::vector<double>& t_grid) {
  InverseDimension theta(theta_in.theta(), 2);
  if (t_grid.size() < 3) throw DomainError("isoperimetric checks need at least 3 grid times");
  if (theta.is_minus_infinity()) throw DomainError("isoperimetric checks need finite N");
  const std::string ref = K.label + "|" + L.label;
  std::vector<double> masses;
  for (double t : t_grid) masses.push_back(minkowski_sum_support(K, L, t).area());
  std::vector<CheckReport> out;
  out.push_back(concavity_check(make_series(theta, t_grid, masses), 1e-6, ref));
  out.back().name = "isoperimetric_concavity";

  const double h = 1e-3 * inradius_about_origin(K);
  const double mu = K.area(), muL = L.area();
  const double mu_plus = boundary_measure_richardson(K, L, h);
  const double q = theta.is_zero() ? 1.0 : theta.n_minus_1_over_n();
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double t = t_grid[i];
    if (!(t > 0)) continue;
    double quotient = (theta.power_transform(masses[i]) - theta.power_transform(mu)) / t;
    sup = std::max(sup, std::pow(mu, q) * quotient);
  }
  CheckReport sup_rep;
  sup_rep.name = "isoperimetric_sup_bound";
  sup_rep.set("pair", ref).set("mu_plus", mu_plus).set("h", h).set("N", theta.spell_N());
  sup_rep.inequality(sup, mu_plus, 1e-6 * std::max(1.0, mu_plus));
  out.push_back(sup_rep);

  // limsup N mu(tL)^{1/N} / t for Lebesgue measure in the plane: nonzero only at N = 2.
  double hom_rate = theta.at_dimension() ? 2 * std::sqrt(muL) : 0.0;
  CheckReport hom;
  hom.name = "isoperimetric_homogeneous_bound";
  hom.set("pair", ref).set("mu_plus", mu_plus).set("N", theta.spell_N());
  hom.inequality(std::pow(mu, q) * hom_rate, mu_plus, 1e-6 * std::max(1.0, mu_plus));
  out.push_back(hom);

  // Profile column I(v)^{N/(N-1)} / v with I = V' from Richardson quotients.
  CheckReport prof;
  prof.name = "isoperimetric_profile_monotone";
  prof.set("pair", ref);
  const double p = theta.is_zero() ? 1.0 : theta.n_over_n_minus_1();
  std::vector<double> col;
  for (double t : t_grid) {
    ConvexPlaneBody Kt = minkowski_sum_support(K, L, t);
    double I = boundary_measure_richardson(Kt, L, 1e-3 * inradius_about_origin(Kt));
    col.push_back(std::pow(I, p) / Kt.area());
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < col.size(); ++i) worst = std::max(worst, col[i] - col[i - 1]);
  prof.set("first", col.front()).set("last", col.back());
  prof.inequality(worst, 0.0, 1e-9 * std::max(1.0, std::abs(col.front())));
  out.push_back(prof);
  return out;
}

// ------------------------------------------------------------ CSV dump

inline void write_flow_csv(std::ostream& os, const FlowResult& r) {
  auto g = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << (r.spherical ? "t,idx,x,y,z,phi,kappa,nux,nuy,nuz\n" : "t,idx,x,y,phi,kappa,nux,nuy\n");
  for (const FlowState& s : r.states)
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      os << g(s.t) << ',' << k << ',' << g(s.points[k][0]) << ',' << g(s.points[k][1]);
      if (r.spherical) os << ',' << g(s.points[k][2]);
      os << ',' << g(s.phi[k]) << ',' << g(s.kappa[k]) << ',' << g(s.normals[k][0]) << ',' << g(s.normals[k][1]);
      if (r.spherical) os << ',' << g(s.normals[k][2]);
      os << '\n';
    }
}

}  // namespace reilly_lab
