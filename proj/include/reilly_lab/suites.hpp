#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "config.hpp"
#include "flows.hpp"
#include "inequality_suite.hpp"
#include "reilly_checks.hpp"
#include "report.hpp"

namespace reilly_lab {

// Non-check failure inside the runner (exit status 3).
struct InternalError : LabError {
  using LabError::LabError;
};

using CheckList = std::vector<CheckReport>;

struct SuiteJob {
  std::string suite, fixture;
  std::function<CheckList(const SuiteConfig&)> run;
};

namespace detail {

inline CheckList tag(CheckList reps, const std::string& id, const std::string& key = "case") {
  for (CheckReport& r : reps) {
    r.set(key, id);
    r.name += "/" + id;
  }
  return reps;
}

// Collapses a family into its worst member (smallest slack + tolerance); the
// family passes iff every member does.
inline CheckReport worst_of(const CheckList& family, const std::string& name, double tolerance) {
  if (family.empty()) throw DomainError("empty family");
  std::size_t worst = 0, failures = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!family[i].passed()) ++failures;
    if (family[i].slack < family[worst].slack) worst = i;
  }
  CheckReport r;
  r.name = name;
  r.set("cases", family.size()).set("member_failures", failures);
  for (const auto& kv : family[worst].params) r.put("worst." + kv.first, kv.second);
  r.inequality(family[worst].lhs, family[worst].rhs, tolerance);
  if (failures > 0) r.pass = false;
  return r;
}

inline Samples sample_fn(const Samples& x, const std::function<double(double)>& f) {
  Samples u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = f(x[i]);
  return u;
}

// Final-residual and observed-order reports for a refinement study.
inline CheckList reilly_study(const std::function<CheckReport(std::size_t)>& run, const std::vector<std::size_t>& res) {
  CheckReport r = refine(run, res);
  double rel = r.get_double("relative_residual");
  CheckReport fin;
  fin.name = "reilly_final_residual";
  fin.put("domain", *r.get("domain")).set("n_pts", static_cast<long long>(res.back()));
  fin.inequality(rel, 1e-6, 0.0);
  CheckReport ord;
  ord.name = "reilly_observed_order";
  ord.put("domain", *r.get("domain"));
  ord.grids = r.grids;
  ord.order_estimate = r.order_estimate;
  // Residuals that sit below 1e-10 without decreasing carry no discretization
  // error to measure.
  bool floor = true;
  for (std::size_t i = 0; i < r.grids.size(); ++i) {
    if (r.grids[i].second > 1e-10) floor = false;
    if (i > 0 && r.grids[i].second < 0.5 * r.grids[i - 1].second) floor = false;
  }
  ord.set("at_roundoff_floor", floor);
  double p = r.order_estimate.value_or(std::nan(""));
  if (floor) ord.diagnostic(1.9, p);
  else ord.inequality(1.9, p, 0.0);
  return {r, fin, ord};
}

inline ModelDensityParams model_at(double rho, const InverseDimension& theta, double beta_frac, double negative_trunc,
                                   ModelVariant v = ModelVariant::NeumannSymmetric) {
  ModelDensityParams p{rho, theta, 1.0, v};
  p.beta_trunc = p.delta() > 0 ? beta_frac * p.beta() : negative_trunc;
  return p;
}

inline TestFunction cos_mode(std::size_t k, double amp = 1.0, double mean = 0.0) {
  TrigSeries s;
  s.a.assign(k + 1, 0.0);
  s.b.assign(k + 1, 0.0);
  s.a[0] = mean;
  s.a[k] += amp;
  return TestFunction::trig(s, false, fmt_g(mean) + "+" + fmt_g(amp) + "cos" + std::to_string(k));
}

inline double flow_oracle_distance(const ConvexPlaneBody& K, const ConvexPlaneBody& L, const FlowResult& r, double t) {
  return hausdorff_distance(r.final_curve(), minkowski_sum_support(K, L, t).boundary_points());
}

}  // namespace detail

// The catalogue of fixtures. Each job owns its inputs and returns its reports.
inline std::vector<SuiteJob> suite_jobs() {
  using namespace detail;
  std::vector<SuiteJob> jobs;

  // ---------------------------------------------------------------- reilly
  jobs.push_back({"reilly", "gaussian_interval_t2", [](const SuiteConfig& c) {
                    double L = c.real("reilly.gaussian_half_width");
                    return reilly_study(
                        [L](std::size_t n) {
                          IntervalModel m = build_interval(-L, L, n, gaussian_potential(1));
                          return reilly_residual(m, sample_fn(m.t, [](double t) { return t * t; }));
                        },
                        c.counts("reilly.resolutions"));
                  }});
  jobs.push_back({"reilly", "model_density_sin", [](const SuiteConfig& c) {
                    ModelDensityParams p = model_at(1.0, c.dimension("reilly.model_N"), c.real("reilly.model_beta_frac"), 8.0);
                    if (!(p.delta() > 0)) throw ConfigError("key 'reilly.model_N' needs N > 1");
                    const double k = std::sqrt(p.delta());
                    return reilly_study(
                        [p, k](std::size_t n) {
                          IntervalModel m = build_model_density(p, n);
                          return reilly_residual(m, sample_fn(m.t, [k](double t) { return std::sin(k * t); }));
                        },
                        c.counts("reilly.resolutions"));
                  }});
  jobs.push_back({"reilly", "unit_ball_r2", [](const SuiteConfig& c) {
                    int dim = static_cast<int>(c.integer("reilly.ball_dim"));
                    return reilly_study(
                        [dim](std::size_t n) {
                          RadialBall b = build_radial_ball(dim, 1.0, n, gaussian_potential(1));
                          return reilly_residual(b, sample_fn(b.r, [](double r) { return r * r; }));
                        },
                        c.counts("reilly.resolutions"));
                  }});
  jobs.push_back({"reilly", "unit_ball_flat_r2", [](const SuiteConfig& c) {
                    int dim = static_cast<int>(c.integer("reilly.ball_dim"));
                    return reilly_study(
                        [dim](std::size_t n) {
                          RadialBall b = build_radial_ball(dim, 1.0, n);
                          return reilly_residual(b, sample_fn(b.r, [](double r) { return r * r; }));
                        },
                        c.counts("reilly.resolutions"));
                  }});

  // ---------------------------------------------------------------- bln
  jobs.push_back({"bln", "sharpness_positive_N", [](const SuiteConfig& c) {
                    ModelDensityParams p = model_at(c.real("bln.rho"), c.dimension("bln.N"), c.real("bln.beta_frac"), 8.0);
                    return sharpness_ratio(p, BlnCase::Neumann, c.real("bln.ratio_tolerance"), c.count("bln.n_pts")).reports();
                  }});
  jobs.push_back({"bln", "sharpness_negative_N", [](const SuiteConfig& c) {
                    ModelDensityParams p{c.real("bln.rho"), c.dimension("bln.negative_N"), c.real("bln.negative_beta_trunc"),
                                         ModelVariant::NeumannSymmetric};
                    return sharpness_ratio(p, BlnCase::Neumann, c.real("bln.negative_ratio_tolerance"), c.count("bln.n_pts"))
                        .reports();
                  }});
  jobs.push_back({"bln", "sharpness_dirichlet_half", [](const SuiteConfig& c) {
                    ModelDensityParams p = model_at(c.real("bln.rho"), c.dimension("bln.N"), c.real("bln.beta_frac"), 8.0,
                                                    ModelVariant::DirichletHalf);
                    return sharpness_ratio(p, BlnCase::Dirichlet, c.real("bln.ratio_tolerance"), c.count("bln.n_pts")).reports();
                  }});
  jobs.push_back({"bln", "gaussian_linear", [](const SuiteConfig& c) {
                    IntervalModel m = build_gaussian_interval(1, c.real("bln.gaussian_half_width"), c.count("bln.gaussian_n_pts"));
                    return CheckList{check_bln(m, InverseDimension::infinite(), TestFunction::grid(m.t, false, "t"), BlnCase::Neumann)};
                  }});
  jobs.push_back({"bln", "model_neumann", [](const SuiteConfig& c) {
                    ModelDensityParams p = model_at(c.real("bln.rho"), c.dimension("bln.N"), c.real("bln.beta_frac"), 8.0);
                    return CheckList{check_bln(p, BlnCase::Neumann, 8001)};
                  }});
  jobs.push_back({"bln", "model_dirichlet_half", [](const SuiteConfig& c) {
                    ModelDensityParams p = model_at(c.real("bln.rho"), c.dimension("bln.N"), c.real("bln.beta_frac"), 8.0,
                                                    ModelVariant::DirichletHalf);
                    return CheckList{check_bln(p, BlnCase::Dirichlet, 8001)};
                  }});
  jobs.push_back({"bln", "ball_mean_convex_r2", [](const SuiteConfig&) {
                    RadialBall B = build_radial_ball(2, 0.5, 2001, gaussian_potential(1));
                    TestFunction fn = TestFunction::grid(sample_fn(B.r, [](double r) { return r * r; }), false, "r^2");
                    return CheckList{check_bln(B, InverseDimension::infinite(), fn, BlnCase::MeanConvex),
                                     tag({check_bln(B, InverseDimension::infinite(), fn, BlnCase::MeanConvex, 0.0)}, "C0")[0]};
                  }});

  // ---------------------------------------------------------------- spectral
  jobs.push_back({"spectral", "lichnerowicz_models", [](const SuiteConfig& c) {
                    CheckList out;
                    const double rho = c.real("spectral.rho");
                    const std::size_t n = c.count("spectral.n_pts");
                    std::size_t idx = 0;
                    for (const InverseDimension& th : c.dimensions("spectral.N_values")) {
                      CheckReport r;
                      if (th.is_zero()) {
                        IntervalModel m = build_gaussian_interval(1 / std::sqrt(rho), 8 / std::sqrt(rho), n);
                        r = check_lichnerowicz(m, th, rho);
                      } else {
                        r = check_lichnerowicz(model_at(rho, th, c.real("spectral.beta_frac"), c.real("spectral.negative_beta_trunc")), n);
                      }
                      out.push_back(tag({r}, "model" + std::to_string(idx++))[0]);
                    }
                    return out;
                  }});
  jobs.push_back({"spectral", "lichnerowicz_half_gaussian_dirichlet", [](const SuiteConfig& c) {
                    IntervalModel m = build_interval(0, 6, c.count("spectral.n_pts"), gaussian_potential(1));
                    return CheckList{check_lichnerowicz(m, InverseDimension::infinite(), 1.0, BoundaryCondition::Dirichlet,
                                                        BoundaryCondition::Neumann)};
                  }});
  jobs.push_back({"spectral", "veysseire_quartic", [](const SuiteConfig& c) {
                    IntervalModel m = with_rho_field(build_interval(-4, 4, c.count("spectral.veysseire_n_pts"), quartic_potential()),
                                                     [](double t) { return 1 + t * t; });
                    return CheckList{check_veysseire(m)};
                  }});
  jobs.push_back({"spectral", "veysseire_constant_field", [](const SuiteConfig& c) {
                    IntervalModel m = with_rho_field(build_gaussian_interval(1, 8, c.count("spectral.veysseire_n_pts")),
                                                     [](double) { return 1.0; });
                    return CheckList{check_veysseire(m)};
                  }});

  // ---------------------------------------------------------------- colesanti
  jobs.push_back({"colesanti", "disk_cos1", [](const SuiteConfig& c) {
                    return CheckList{check_colesanti(build_disk(1, c.count("colesanti.m")), cos_mode(1))};
                  }});
  jobs.push_back({"colesanti", "disk_constant", [](const SuiteConfig& c) {
                    return CheckList{check_colesanti(build_disk(1, c.count("colesanti.m")), cos_mode(0, 1.0))};
                  }});
  jobs.push_back({"colesanti", "ellipse_cos2", [](const SuiteConfig& c) {
                    ConvexPlaneBody e = build_ellipse(1.2, 1.0, c.count("colesanti.m"));
                    return CheckList{check_colesanti(e, cos_mode(2)), check_colesanti(e, cos_mode(2), true)};
                  }});
  jobs.push_back({"colesanti", "corpus_sweep", [](const SuiteConfig& c) {
                    auto bodies = random_body_corpus(static_cast<std::uint64_t>(c.integer("general.seed")), c.count("colesanti.bodies"),
                                                     c.count("colesanti.m"));
                    SeededRng rng(static_cast<std::uint64_t>(c.integer("colesanti.poly_seed")));
                    CheckList family;
                    for (std::size_t i = 0; i < c.count("colesanti.polynomials"); ++i) {
                      const ConvexPlaneBody& B = bodies[i % bodies.size()];
                      family.push_back(check_colesanti(B, random_trig_poly(rng, c.count("colesanti.poly_degree"))));
                    }
                    return CheckList{worst_of(family, "colesanti_sweep", c.real("colesanti.sweep_tolerance"))};
                  }});
  jobs.push_back({"colesanti", "dual_circle_cos1", [](const SuiteConfig& c) {
                    return CheckList{check_dual_colesanti(build_disk(1, c.count("colesanti.m")), cos_mode(1), 0.0, 0.0)};
                  }});
  jobs.push_back({"colesanti", "dual_ellipse_cos2", [](const SuiteConfig&) {
                    return CheckList{check_dual_colesanti(build_ellipse(1.2, 1.0, 256), cos_mode(2), 0.0)};
                  }});
  jobs.push_back({"colesanti", "dual_ellipse_rho1_constant", [](const SuiteConfig&) {
                    return CheckList{check_dual_colesanti(build_ellipse(1.2, 1.0, 256), cos_mode(0, 2.0), 1.0)};
                  }});

  // ---------------------------------------------------------------- boundary
  jobs.push_back({"boundary", "mean_curvature_disk", [](const SuiteConfig& c) {
                    return check_mean_curvature(boundary_geometry(build_disk(1, c.count("boundary.m"))), InverseDimension(0.5, 2));
                  }});
  jobs.push_back({"boundary", "mean_curvature_ball", [](const SuiteConfig& c) {
                    return check_mean_curvature(boundary_geometry(build_revolution_body(sphere_profile(1), c.count("boundary.profile_cells"))),
                                                InverseDimension(1.0 / 3, 3));
                  }});
  jobs.push_back({"boundary", "mean_curvature_ellipse", [](const SuiteConfig& c) {
                    return check_mean_curvature(boundary_geometry(build_ellipse(c.real("boundary.ellipse_a"), 1.0, c.count("boundary.m"))),
                                                InverseDimension(0.5, 2));
                  }});
  jobs.push_back({"boundary", "mean_curvature_spheroid", [](const SuiteConfig& c) {
                    return check_mean_curvature(
                        boundary_geometry(build_revolution_body(spheroid_profile(1, c.real("boundary.spheroid_c")), c.count("boundary.profile_cells"))),
                        InverseDimension(1.0 / 3, 3));
                  }});
  jobs.push_back({"boundary", "gaps_circle", [](const SuiteConfig& c) {
                    return check_boundary_gaps(build_disk(1, c.count("boundary.m")));
                  }});
  jobs.push_back({"boundary", "gaps_sphere", [](const SuiteConfig& c) {
                    return check_boundary_gaps(build_revolution_body(sphere_profile(1), c.count("boundary.profile_cells")), 0.0,
                                               static_cast<int>(c.integer("boundary.m_max")));
                  }});
  jobs.push_back({"boundary", "gaps_spheroid", [](const SuiteConfig& c) {
                    return check_boundary_gaps(
                        build_revolution_body(spheroid_profile(1, c.real("boundary.spheroid_c")), c.count("boundary.profile_cells")), 0.0,
                        static_cast<int>(c.integer("boundary.m_max")));
                  }});
  jobs.push_back({"boundary", "gaps_seeded_curves", [](const SuiteConfig& c) {
                    CheckList iih, rho;
                    for (const ConvexPlaneBody& B :
                         random_body_corpus(static_cast<std::uint64_t>(c.integer("general.seed")), c.count("boundary.curves"), 256)) {
                      CheckList r = check_boundary_gaps(B);
                      iih.push_back(r[0]);
                      rho.push_back(r[1]);
                    }
                    return CheckList{worst_of(iih, "boundary_gap_iih_sweep", 1e-8), worst_of(rho, "boundary_gap_iih_rho_sweep", 1e-8)};
                  }});
  jobs.push_back({"boundary", "cd_sphere", [](const SuiteConfig& c) {
                    return boundary_cd_report(build_revolution_body(sphere_profile(1), c.count("boundary.profile_cells")));
                  }});
  jobs.push_back({"boundary", "cd_spheroid", [](const SuiteConfig& c) {
                    return boundary_cd_report(
                        build_revolution_body(spheroid_profile(1, c.real("boundary.spheroid_c")), c.count("boundary.profile_cells")));
                  }});

  // ---------------------------------------------------------------- flows
  jobs.push_back({"flows", "disk_ellipse_speed", [](const SuiteConfig& c) {
                    const std::size_t m = c.count("flows.m");
                    const double T = c.real("flows.t_end"), dt = c.real("flows.dt");
                    ConvexPlaneBody K = build_disk(1, m), L = build_ellipse(1.2, 1.0, m);
                    FlowResult r = parallel_normal_flow(K, TestFunction::trig(L.support, false, "h_ellipse"), T, dt);
                    CheckReport d;
                    d.name = "flow_support_sum_distance";
                    d.set("m", m).set("dt", dt).set("alive", r.alive).set("death_reason", r.death_reason);
                    d.identity(r.alive ? flow_oracle_distance(K, L, r, T) : std::nan(""), 0.0, 1e-4);
                    CheckReport drift;
                    drift.name = "flow_normal_drift";
                    drift.identity(r.normal_drift, 0.0, 1e-6);
                    CheckReport conc = concavity_check(r.series, 1e-6, "parallel_normal(disk,h_ellipse)");
                    conc.name = "bm_concavity_flowed_plane";
                    return CheckList{d, drift, conc};
                  }});
  jobs.push_back({"flows", "seeded_pairs", [](const SuiteConfig& c) {
                    const std::size_t m = c.count("flows.m");
                    const double T = c.real("flows.t_end"), dt = c.real("flows.dt");
                    SeededRng rng(static_cast<std::uint64_t>(c.integer("flows.pair_seed")));
                    CheckList out;
                    for (std::size_t i = 0; i < c.count("flows.pairs"); ++i) {
                      TrigSeries hk = random_support(rng), hl = random_support(rng);
                      TestFunction phi = TestFunction::trig(hl, false, "h_L");
                      double dist[2] = {0, 0}, drift = 0;
                      bool alive = true;
                      for (int level = 0; level < 2; ++level) {
                        std::size_t mm = level == 0 ? m : 2 * m;
                        ConvexPlaneBody K = build_plane_body(hk, mm), L = build_plane_body(hl, mm);
                        FlowResult r = parallel_normal_flow(K, phi, T, level == 0 ? dt : dt / 2);
                        alive = alive && r.alive;
                        dist[level] = r.alive ? flow_oracle_distance(K, L, r, T) : std::nan("");
                        if (level == 0) drift = r.normal_drift;
                      }
                      const std::string id = "pair" + std::to_string(i);
                      CheckReport d;
                      d.name = "flow_support_sum_distance";
                      d.set("m", m).set("dt", dt).set("alive", alive);
                      d.grid(static_cast<double>(m), dist[0]).grid(static_cast<double>(2 * m), dist[1]);
                      d.identity(dist[0], 0.0, 1e-4);
                      CheckReport ratio;
                      ratio.name = "flow_refinement_gain";
                      ratio.set("coarse", dist[0]).set("fine", dist[1]);
                      ratio.inequality(4.0, dist[0] / dist[1], 0.0);
                      CheckReport dr;
                      dr.name = "flow_normal_drift";
                      dr.identity(drift, 0.0, 1e-6);
                      for (CheckReport& x : tag({d, ratio, dr}, id)) out.push_back(x);
                    }
                    return out;
                  }});
  jobs.push_back({"flows", "sphere_cap", [](const SuiteConfig& c) {
                    const double r0 = c.real("flows.cap_radius"), T = c.real("flows.t_end");
                    FlowResult r = parallel_normal_flow_sphere(sphere_latitude_curve(r0, c.count("flows.sphere_m")), cos_mode(0, 1.0),
                                                               T, c.real("flows.sphere_dt"));
                    double err = 0, cross = 0;
                    for (std::size_t i = 0; i < r.series.size(); ++i)
                      err = std::max(err, std::abs(r.series.masses[i] - kTwoPi * (1 - std::cos(r0 + r.series.times[i]))));
                    for (double x : r.area_crosscheck) cross = std::max(cross, x);
                    CheckReport a;
                    a.name = "flow_sphere_cap_area";
                    a.set("alive", r.alive).set("band_crosscheck", cross);
                    a.identity(r.alive ? err : std::nan(""), 0.0, 1e-6);
                    CheckReport dr;
                    dr.name = "flow_sphere_covariant_drift";
                    dr.identity(r.normal_drift, 0.0, 1e-6);
                    CheckReport conc = concavity_check(r.series, 1e-6, "parallel_normal(cap)");
                    conc.name = "bm_concavity_flowed_sphere";
                    return CheckList{a, dr, conc};
                  }});
  jobs.push_back({"flows", "support_sum_family", [](const SuiteConfig&) {
                    ConvexPlaneBody K = build_ellipse(1.2, 1.0, 256);
                    auto bodies = random_body_corpus(11, 1, 256);
                    std::vector<double> ts, ms;
                    for (int i = 0; i <= 20; ++i) {
                      ts.push_back(0.05 * i);
                      ms.push_back(minkowski_sum_support(K, bodies[0], 0.05 * i).area());
                    }
                    CheckReport r = concavity_check(make_series(InverseDimension(0.5, 2), ts, ms), 1e-6, "ellipse+t*random_body");
                    r.name = "bm_concavity_support_sum";
                    return CheckList{r};
                  }});
  jobs.push_back({"flows", "cap_extension_series", [](const SuiteConfig& c) {
                    SphereCap cap = build_sphere_cap(c.real("flows.cap_radius"));
                    std::vector<double> ts, ms;
                    for (int i = 0; i <= 20; ++i) {
                      ts.push_back(0.05 * i);
                      ms.push_back(geodesic_extension_measure(cap, 0.05 * i));
                    }
                    CheckReport r = concavity_check(make_series(InverseDimension(0.5, 2), ts, ms), 1e-6, cap.label());
                    r.name = "bm_concavity_cap_extension";
                    return CheckList{r};
                  }});
  jobs.push_back({"flows", "weingarten", [](const SuiteConfig& c) {
                    const std::size_t m = c.count("flows.weingarten_m");
                    const double dt = c.real("flows.weingarten_dt");
                    struct Case {
                      std::string id;
                      ConvexPlaneBody K;
                      TestFunction phi;
                      double T;
                    };
                    std::vector<Case> cases{{"disk_const", build_disk(1, m), cos_mode(0, 1.0), 0.5},
                                            {"disk_cos2", build_disk(1, m), cos_mode(2, 0.2, 1.0), 0.5},
                                            {"ellipse_const", build_ellipse(1.2, 1.0, m), cos_mode(0, 1.0), 0.3}};
                    CheckList out;
                    for (const Case& k : cases) {
                      WeingartenResult w = weingarten_wave(k.K, k.phi, k.T, dt);
                      CheckReport conc = concavity_check(w.flow.series, 1e-6, k.id);
                      conc.name = "bm_concavity_weingarten";
                      conc.set("alive", w.flow.alive).set("death_reason", w.flow.death_reason);
                      if (!w.flow.alive) conc.pass = false;
                      for (CheckReport& x : tag({conc, w.minkowski_deviation}, k.id)) out.push_back(x);
                    }
                    return out;
                  }});
  jobs.push_back({"flows", "quermass", [](const SuiteConfig& c) {
                    CheckList family;
                    for (const ConvexPlaneBody& B : random_body_corpus(static_cast<std::uint64_t>(c.integer("general.seed")), c.count("flows.corpus")))
                      family.push_back(quermassintegrals(B).alexandrov);
                    QuermassTriple d = quermassintegrals(build_disk(1, 256));
                    QuermassTriple e = quermassintegrals(build_ellipse(1.2, 1.0));
                    return CheckList{worst_of(family, "alexandrov_quermass_sweep", 1e-9), tag({d.alexandrov}, "disk")[0],
                                     tag({e.alexandrov}, "ellipse")[0]};
                  }});

  // ---------------------------------------------------------------- isoperimetric
  jobs.push_back({"isoperimetric", "disk_disk", [](const SuiteConfig& c) {
                    ConvexPlaneBody d = build_disk(1, c.count("isoperimetric.m"));
                    return isoperimetric_checks(d, d, InverseDimension(0.5, 2), c.reals("isoperimetric.t_grid"));
                  }});
  jobs.push_back({"isoperimetric", "ellipse_disk", [](const SuiteConfig& c) {
                    const std::size_t m = c.count("isoperimetric.m");
                    return isoperimetric_checks(build_ellipse(c.real("isoperimetric.ellipse_a"), 1.0, m), build_disk(1, m),
                                                InverseDimension(0.5, 2), c.reals("isoperimetric.t_grid"));
                  }});
  return jobs;
}

// REILLY_LAB_WORKERS, else 1.
inline std::size_t default_workers() {
  if (const char* v = std::getenv("REILLY_LAB_WORKERS")) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*v == '\0' || *end != '\0' || n < 1) throw ConfigError("REILLY_LAB_WORKERS must be a positive integer");
    return static_cast<std::size_t>(n);
  }
  return 1;
}

// Runs every job of the suite; a LabError inside a job becomes a failed
// report carrying the message. Results are tagged, scaled and name-sorted.
inline CheckList run_checks(const SuiteConfig& config, std::size_t workers = 1) {
  const std::string suite = config.raw("general.suite");
  const double scale = config.real("general.tol_scale");
  if (!(scale > 0)) throw ConfigError("key 'tol_scale' must be positive");
  std::vector<SuiteJob> jobs;
  for (SuiteJob& j : suite_jobs())
    if (suite == "all" || j.suite == suite) jobs.push_back(std::move(j));
  std::vector<CheckList> results(jobs.size());
  std::vector<std::exception_ptr> internal(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const std::string id = jobs[i].suite + "." + jobs[i].fixture;
      try {
        results[i] = detail::tag(jobs[i].run(config), id, "fixture");
      } catch (const ConfigError&) {
        internal[i] = std::current_exception();
      } catch (const LabError& e) {
        CheckReport r;
        r.name = "check_error";
        r.set("error", std::string(e.what()));
        r.inequality(1.0, 0.0, 0.0);
        results[i] = detail::tag({r}, id, "fixture");
      } catch (...) {
        internal[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : internal) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& x) {
      throw InternalError(x.what());
    } catch (...) {
      throw InternalError("unknown failure inside a suite job");
    }
  }
  CheckList all;
  for (CheckList& r : results)
    for (CheckReport& c : r) {
      if (c.pass.has_value()) c.rescale_tolerance(scale);
      all.push_back(std::move(c));
    }
  return sorted_by_name(std::move(all));
}

struct SuiteOutcome {
  int status = 0;
  std::string json;
  CheckList checks;
};

inline SuiteOutcome run_suite(const SuiteConfig& config, std::size_t workers = 1) {
  SuiteOutcome o;
  o.checks = run_checks(config, workers);
  o.status = report_status(o.checks);
  o.json = emit_report_string(config.echo(), o.checks);
  return o;
}

// One suite run per value of a numeric config field.
inline std::vector<SweepRow> sweep(const SuiteConfig& base, const std::string& param_path,
                                   const std::vector<std::string>& values, std::size_t workers = 1) {
  const ConfigKey* key = SuiteConfig::lookup(param_path);
  if (!key) throw ConfigError("unknown config key '" + param_path + "'");
  if (key->type == ConfigType::Text) throw ConfigError("key '" + param_path + "' is not numeric");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const std::string& v : values) {
    SuiteConfig c = base;
    c.set(param_path, v);
    SweepRow row;
    row.value = detail::trim(v);
    row.checks = run_checks(c, workers);
    row.status = report_status(row.checks);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------- flow runs

struct FlowRunSpec {
  std::string kind = "parallel-normal";  // parallel-normal | weingarten | sphere
  std::string body = "disk";             // disk[:r] | ellipse:a,b | trig:a0,a1,... | cap:r (sphere)
  std::vector<double> phi_coeffs{1.0};   // cosine coefficients of phi
  double t_end = 0.5, dt = 1e-2;
  std::size_t m = 256;
};

struct FlowRunOutcome {
  FlowResult flow;
  CheckList checks;
  int status = 0;
};

namespace detail {

inline std::vector<double> numbers_after(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos) return out;
  for (const std::string& s : split_list(spec.substr(colon + 1))) out.push_back(parse_real(what, s));
  return out;
}

inline TestFunction phi_from(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw ConfigError("--phi-coeffs needs at least one value");
  TrigSeries s;
  s.a = coeffs;
  s.b.assign(coeffs.size(), 0.0);
  std::string label;
  for (double c : coeffs) label += (label.empty() ? "" : ",") + fmt_g(c);
  return TestFunction::trig(s, false, "cos_coeffs(" + label + ")");
}

inline ConvexPlaneBody body_from(const std::string& spec, std::size_t m) {
  std::string head = spec.substr(0, spec.find(':'));
  std::vector<double> v = numbers_after(spec, "--body");
  if (head == "disk") {
    if (v.size() > 1) throw ConfigError("--body disk takes at most one radius");
    return build_disk(v.empty() ? 1.0 : v[0], m);
  }
  if (head == "ellipse") {
    if (v.size() != 2) throw ConfigError("--body ellipse needs a,b");
    return build_ellipse(v[0], v[1], m);
  }
  if (head == "trig") {
    if (v.empty()) throw ConfigError("--body trig needs cosine coefficients");
    TrigSeries s;
    s.a = v;
    s.b.assign(v.size(), 0.0);
    return build_plane_body(s, m);
  }
  throw ConfigError("unknown --body '" + spec + "' (disk[:r], ellipse:a,b, trig:a0,a1,..., cap:r)");
}

}  // namespace detail

inline FlowRunOutcome flow_run(const FlowRunSpec& spec) {
  FlowRunOutcome o;
  TestFunction phi = detail::phi_from(spec.phi_coeffs);
  if (spec.kind == "sphere") {
    std::string head = spec.body.substr(0, spec.body.find(':'));
    std::vector<double> v = detail::numbers_after(spec.body, "--body");
    if (head != "cap" || v.size() != 1) throw ConfigError("sphere flows take --body cap:r");
    o.flow = parallel_normal_flow_sphere(sphere_latitude_curve(v[0], spec.m), phi, spec.t_end, spec.dt);
  } else {
    ConvexPlaneBody K = detail::body_from(spec.body, spec.m);
    if (spec.kind == "parallel-normal") {
      o.flow = parallel_normal_flow(K, phi, spec.t_end, spec.dt);
    } else if (spec.kind == "weingarten") {
      WeingartenResult w = weingarten_wave(K, phi, spec.t_end, spec.dt);
      o.flow = std::move(w.flow);
      o.checks.push_back(w.minkowski_deviation);
    } else {
      throw ConfigError("unknown --kind '" + spec.kind + "' (parallel-normal, weingarten, sphere)");
    }
  }
  CheckReport alive;
  alive.name = "flow_alive";
  alive.set("death_reason", o.flow.death_reason).set("steps", o.flow.steps);
  alive.diagnostic(0.0, o.flow.alive ? 1.0 : 0.0);
  o.checks.push_back(alive);
  if (o.flow.series.size() >= 3) o.checks.push_back(concavity_check(o.flow.series, 1e-6, spec.kind + ":" + spec.body));
  o.status = report_status(o.checks);
  return o;
}

inline std::vector<std::pair<std::string, std::string>> flow_echo(const FlowRunSpec& s) {
  std::string coeffs;
  for (double c : s.phi_coeffs) coeffs += (coeffs.empty() ? "" : ",") + detail::csv_number(c);
  return {{"flow.kind", s.kind},
          {"flow.body", s.body},
          {"flow.phi_coeffs", coeffs},
          {"flow.t_end", detail::csv_number(s.t_end)},
          {"flow.dt", detail::csv_number(s.dt)},
          {"flow.m", std::to_string(s.m)}};
}

}  // namespace reilly_lab
