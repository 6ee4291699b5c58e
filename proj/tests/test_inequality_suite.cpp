#include <gtest/gtest.h>

#include <cmath>

#include "reilly_lab/inequality_suite.hpp"

using namespace reilly_lab;

namespace {

ModelDensityParams spherical(double N, double frac, ModelVariant v = ModelVariant::NeumannSymmetric) {
  ModelDensityParams p{1.0, InverseDimension::from_N(N), 1.0, v};
  p.beta_trunc = frac * p.beta();
  return p;
}

// Composite Gauss-Legendre, 400 panels.
double quad(const std::function<double(double)>& f, double a, double b) {
  const int panels = 400;
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) s += detail::gauss_legendre(f, a + k * h, a + (k + 1) * h);
  return s;
}

// Truncated standard Gaussian second moment on [-L, L].
double truncated_gaussian_variance(double L) {
  double phi = std::exp(-L * L / 2) / std::sqrt(2 * kPi);
  return 1.0 - 2 * L * phi / std::erf(L / std::sqrt(2.0));
}

double ellipse_perimeter(double a, double b) {
  return quad([&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); }, 0, kTwoPi);
}

TestFunction linear_on(const IntervalModel& m) { return TestFunction::grid(m.t, false, "t"); }

}  // namespace

TEST(TestFunctions, TrigMatchesCoefficients) {
  TrigSeries c{{0.3, -1.0, 0.5}, {0.0, 2.0, -0.25}};
  TestFunction f = TestFunction::trig(c);
  for (double t : {0.0, 0.7, 2.1, 5.9}) {
    double direct = 0.3 - std::cos(t) + 0.5 * std::cos(2 * t) + 2 * std::sin(t) - 0.25 * std::sin(2 * t);
    EXPECT_NEAR(f.eval(t), direct, 1e-12);
    double d1 = std::sin(t) - std::sin(2 * t) + 2 * std::cos(t) - 0.5 * std::cos(2 * t);
    EXPECT_NEAR(f.eval(t, 1), d1, 1e-12);
  }
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 64);
  FunctionSamples fs = sample_on(f, e);
  for (std::size_t k = 0; k < e.m; ++k) EXPECT_NEAR(fs.f[k], c.eval(e.theta[k]), 1e-12);
}

TEST(TestFunctions, ModelSharpnessIsDerivativeOfR) {
  ModelDensityParams p = spherical(5, 0.9);
  TestFunction f = TestFunction::model_sharpness(p);
  for (double t : {-2.0, -0.3, 0.0, 1.1, 2.5}) {
    EXPECT_DOUBLE_EQ(f.eval(t), p.dR(t));
    double h = 1e-5;
    EXPECT_NEAR(f.eval(t, 1), (p.dR(t + h) - p.dR(t - h)) / (2 * h), 1e-8);
  }
}

TEST(TestFunctions, ZeroMeanEnforcement) {
  IntervalModel m = build_gaussian_interval(1, 6, 601);
  Samples s(m.n_pts());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = m.t[i] * m.t[i];
  FunctionSamples fs = sample_on(TestFunction::grid(s, true), m);
  EXPECT_NEAR(weighted_integral(fs.f, m), 0.0, 1e-12);
}

TEST(Bln, GaussianLinearIsEqualityCase) {
  const double L = 6.0;
  IntervalModel m = build_gaussian_interval(1, L, 4001);
  CheckReport r = check_bln(m, InverseDimension::infinite(), linear_on(m), BlnCase::Neumann);
  EXPECT_NEAR(r.lhs, truncated_gaussian_variance(L), 1e-9);
  EXPECT_NEAR(r.rhs, 1.0, 1e-12);
  EXPECT_GE(r.slack, -1e-6);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(std::get<bool>(*r.get("normalized_measure")), true);
}

TEST(Bln, SphericalModelIsSharp) {
  ModelDensityParams p = spherical(5, 0.999);
  CheckReport r = check_bln(p, BlnCase::Neumann, 8001);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.slack / r.rhs, 1e-3);
  EXPECT_GE(r.slack / r.rhs, -1e-6);
}

TEST(Bln, HalfModelDirichletSlackShrinks) {
  for (double frac : {0.999, 0.9999}) {
    ModelDensityParams p = spherical(5, frac, ModelVariant::DirichletHalf);
    CheckReport r = check_bln(p, BlnCase::Dirichlet, 8001);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(r.slack, 1e-10 * r.rhs);
  }
  // A visible truncation end carries f != 0 and is rejected.
  EXPECT_THROW(check_bln(spherical(5, 0.9, ModelVariant::DirichletHalf), BlnCase::Dirichlet, 2001), DomainError);
  double gap = std::numeric_limits<double>::infinity();
  for (double frac : {0.9, 0.99, 0.999}) {
    double g = 1 - sharpness_ratio(spherical(5, frac), BlnCase::Dirichlet).ratio.lhs;
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, gap);
    gap = g;
  }
}

TEST(Bln, DirichletNeedsVanishingBoundaryValues) {
  IntervalModel m = build_gaussian_interval(1, 3, 401);
  EXPECT_THROW(check_bln(m, InverseDimension::infinite(), linear_on(m), BlnCase::Dirichlet), DomainError);
}

TEST(Bln, IntervalsAreNeverStrictlyMeanConvex) {
  IntervalModel m = build_gaussian_interval(1, 4, 401);
  EXPECT_THROW(check_bln(m, InverseDimension::infinite(), linear_on(m), BlnCase::MeanConvex), MeanConvexityViolation);
}

TEST(Bln, FlatIntervalHasNoPositiveCurvature) {
  IntervalModel m = build_interval(0, 1, 101, flat_potential());
  EXPECT_THROW(check_bln(m, InverseDimension::infinite(), linear_on(m), BlnCase::Neumann), CurvatureNotPositive);
}

TEST(Bln, MeanConvexBallBoundaryTerm) {
  RadialBall B = build_radial_ball(2, 0.5, 2001, gaussian_potential(1));
  Samples f(B.r.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = B.r[i] * B.r[i];
  TestFunction fn = TestFunction::grid(f, false, "r^2");
  CheckReport autoC = check_bln(B, InverseDimension::infinite(), fn, BlnCase::MeanConvex);
  EXPECT_NEAR(autoC.get_double("C"), 0.25, 1e-14);
  EXPECT_NEAR(autoC.get_double("boundary_term"), 0.0, 1e-14);
  CheckReport fixed = check_bln(B, InverseDimension::infinite(), fn, BlnCase::MeanConvex, 0.0);
  // mu(B) = 2 pi (1 - e^{-R^2/2}); H_mu = 1/R - R; boundary density e^{-R^2/2} 2 pi R.
  const double R = 0.5, mass = kTwoPi * (1 - std::exp(-R * R / 2));
  const double term = std::pow(R, 4) * std::exp(-R * R / 2) * kTwoPi * R / (1 / R - R) / mass;
  EXPECT_NEAR(fixed.get_double("boundary_term"), term, 1e-12);
  EXPECT_TRUE(autoC.passed());
  EXPECT_TRUE(fixed.passed());
  EXPECT_GT(fixed.slack, autoC.slack);
  // Ric = 1, mean-free energy: oracle by Gauss-Legendre in r.
  auto w = [&](double r) { return kTwoPi * r * std::exp(-r * r / 2) / mass; };
  double m1 = quad([&](double r) { return r * r * w(r); }, 0, R);
  double m2 = quad([&](double r) { return std::pow(r, 4) * w(r); }, 0, R);
  double en = quad([&](double r) { return 4 * r * r * w(r); }, 0, R);
  EXPECT_NEAR(autoC.lhs, m2 - m1 * m1, 1e-10);
  EXPECT_NEAR(autoC.rhs, en, 1e-9);
}

TEST(Bln, ShiftAndScaleInvariance) {
  IntervalModel m = build_gaussian_interval(1, 5, 2001);
  Samples s(m.n_pts());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(m.t[i]) + 0.1 * m.t[i] * m.t[i];
  TestFunction f = TestFunction::grid(s);
  auto th = InverseDimension::infinite();
  CheckReport base = check_bln(m, th, f, BlnCase::Neumann);
  CheckReport shifted = check_bln(m, th, f.shifted(2.5), BlnCase::Neumann);
  CheckReport scaled = check_bln(m, th, f.scaled(3), BlnCase::Neumann);
  EXPECT_NEAR(shifted.slack, base.slack, 1e-10);
  EXPECT_NEAR(scaled.lhs, 9 * base.lhs, 1e-10 * 9 * base.lhs);
  EXPECT_NEAR(scaled.rhs, 9 * base.rhs, 1e-10 * 9 * base.rhs);
  EXPECT_NEAR(scaled.slack, 9 * base.slack, 1e-10 * 9 * std::abs(base.rhs));
}

TEST(Sharpness, PositiveDimensionNearOne) {
  SharpnessResult s = sharpness_ratio(spherical(5, 0.999), BlnCase::Neumann);
  EXPECT_LE(std::abs(s.ratio.lhs - 1), 1e-3);
  EXPECT_TRUE(s.ratio.passed());
  EXPECT_TRUE(s.identity_f2.passed());
  EXPECT_TRUE(s.identity_df2.passed());
  EXPECT_TRUE(std::get<bool>(*s.ratio.get("trend_to_one")));
  EXPECT_TRUE(std::get<bool>(*s.ratio.get("bln_bound_holds")));
}

// Closed form: ratio - 1 = (N-1)[R'R^N] / (rho int R^{N+1}).
TEST(Sharpness, NegativeDimensionMatchesClosedForm) {
  ModelDensityParams p{1.0, InverseDimension::from_N(-2), 8.0};
  SharpnessResult s = sharpness_ratio(p, BlnCase::Neumann, 2e-3);
  const double sq = std::sqrt(1.0 / 3), N = -2;
  double I = quad([&](double t) { return std::pow(std::cosh(sq * t), N + 1); }, -8, 8);
  double bracket = 2 * sq * std::sinh(8 * sq) * std::pow(std::cosh(8 * sq), N);
  double oracle = 1 + (N - 1) * bracket / I;
  EXPECT_NEAR(s.ratio.lhs, oracle, 1e-9);
  EXPECT_TRUE(s.identity_f2.passed());
  EXPECT_TRUE(s.identity_df2.passed());
  EXPECT_LE(s.ratio.lhs, 1.0);
  EXPECT_TRUE(std::get<bool>(*s.ratio.get("trend_to_one")));
}

TEST(Sharpness, DimensionJustAboveOne) {
  SharpnessResult s = sharpness_ratio(spherical(1.5, 0.999), BlnCase::Neumann);
  EXPECT_TRUE(std::isfinite(s.ratio.lhs));
  EXPECT_LE(s.ratio.lhs, 1 + 1e-6);
  EXPECT_TRUE(s.identity_f2.passed());
  EXPECT_TRUE(s.identity_df2.passed());
}

TEST(Sharpness, DirichletHalf) {
  SharpnessResult s = sharpness_ratio(spherical(5, 0.999), BlnCase::Dirichlet);
  EXPECT_LE(std::abs(s.ratio.lhs - 1), 1e-3);
  EXPECT_TRUE(s.identity_f2.passed());
}

TEST(Sharpness, RejectsOutOfScopeDimensions) {
  ModelDensityParams p{1.0, InverseDimension::from_N(-1), 4.0};
  EXPECT_THROW(sharpness_ratio(p, BlnCase::Neumann), DomainError);
  ModelDensityParams q{1.0, InverseDimension::from_N(-0.5), 4.0};
  EXPECT_THROW(sharpness_ratio(q, BlnCase::Neumann), DomainError);
  ModelDensityParams r{1.0, InverseDimension::from_N(-2), 4.0};
  EXPECT_THROW(sharpness_ratio(r, BlnCase::Dirichlet), DomainError);
}

TEST(Lichnerowicz, ModelDensityEquality) {
  for (double N : {5.0, 20.0}) {
    ModelDensityParams p = spherical(N, 0.999);
    CheckReport r = check_lichnerowicz(p, 2000);
    EXPECT_DOUBLE_EQ(r.lhs, N * p.delta());
    EXPECT_NEAR(r.rhs / r.lhs, 1.0, 1e-4);
    EXPECT_TRUE(r.passed());
  }
}

TEST(Lichnerowicz, GaussianNeumannAndDirichlet) {
  IntervalModel g = build_gaussian_interval(1, 8, 2001);
  CheckReport r = check_lichnerowicz(g, InverseDimension::infinite(), 1.0);
  EXPECT_NEAR(r.rhs, 1.0, 1e-4);
  EXPECT_TRUE(r.passed());
  IntervalModel half = build_interval(0, 6, 2001, gaussian_potential(1));
  CheckReport d = check_lichnerowicz(half, InverseDimension::infinite(), 1.0, BoundaryCondition::Dirichlet,
                                     BoundaryCondition::Neumann);
  EXPECT_TRUE(d.passed());
  EXPECT_NEAR(d.rhs, 1.0, 1e-4);
}

TEST(Lichnerowicz, NegativeDimensionBoundHolds) {
  for (double N : {-4.0, -2.0}) {
    ModelDensityParams p{1.0, InverseDimension::from_N(N), 3.0};
    CheckReport r = check_lichnerowicz(p, 2000);
    EXPECT_DOUBLE_EQ(r.lhs, N / (N - 1));
    EXPECT_TRUE(r.passed());
  }
}

TEST(Lichnerowicz, RequiresPositiveCurvature) {
  IntervalModel m = build_interval(0, 1, 101, flat_potential());
  EXPECT_THROW(check_lichnerowicz(m, InverseDimension::infinite(), 1.0), CurvatureNotPositive);
}

TEST(Veysseire, QuarticHarmonicMean) {
  IntervalModel m = with_rho_field(build_interval(-4, 4, 2001, quartic_potential()), [](double t) { return 1 + t * t; });
  CheckReport r = check_veysseire(m);
  auto V = [](double t) { return t * t / 2 + t * t * t * t / 12; };
  double mass = quad([&](double t) { return std::exp(-V(t)); }, -4, 4);
  double inv = quad([&](double t) { return std::exp(-V(t)) / (1 + t * t); }, -4, 4);
  EXPECT_NEAR(r.lhs, mass / inv, 1e-8);
  EXPECT_GT(r.lhs, 1.0 + 1e-3);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(std::get<bool>(*r.get("ric_dominates_rho")));
}

TEST(Veysseire, ConstantFieldCollapse) {
  IntervalModel m = with_rho_field(build_gaussian_interval(1, 8, 2001), [](double) { return 1.0; });
  CheckReport v = check_veysseire(m);
  EXPECT_NEAR(v.lhs, 1.0, 1e-14);
  CheckReport l = check_lichnerowicz(m, InverseDimension::infinite(), 1.0);
  EXPECT_NEAR(v.lhs, l.lhs, 1e-14);
  EXPECT_DOUBLE_EQ(v.rhs, l.rhs);
}

TEST(Colesanti, DiskEqualityCases) {
  ConvexPlaneBody d = build_disk(1, 512);
  CheckReport c = check_colesanti(d, TestFunction::trig(TrigSeries{{0, 1}, {0, 0}}));
  EXPECT_NEAR(c.lhs, kPi, 1e-12);
  EXPECT_NEAR(c.rhs, kPi, 1e-12);
  EXPECT_LE(std::abs(c.lhs - c.rhs), 1e-8);
  CheckReport one = check_colesanti(d, TestFunction::trig(TrigSeries::constant(1)));
  EXPECT_NEAR(one.lhs, 0.0, 1e-12);
  EXPECT_NEAR(one.rhs, 0.0, 1e-12);
  EXPECT_THROW(check_colesanti(d, TestFunction::trig(TrigSeries{{0, 1}, {0, 0}}), true), StrengthenedDegenerate);
}

TEST(Colesanti, EllipseRandomAndStrengthened) {
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 512);
  SeededRng rng(17);
  for (int i = 0; i < 10; ++i) {
    TestFunction f = random_trig_poly(rng, 6);
    CheckReport plain = check_colesanti(e, f);
    CheckReport strong = check_colesanti(e, f, true);
    EXPECT_GE(plain.slack, -1e-8);
    EXPECT_GE(strong.slack, -1e-8);
    EXPECT_GE(strong.lhs, plain.lhs - 1e-12);
  }
}

TEST(Colesanti, RandomCorpusProperty) {
  auto bodies = random_body_corpus(2024, 10, 512);
  SeededRng rng(99);
  double worst = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const auto& B : bodies)
    for (int j = 0; j < 20; ++j) {
      std::size_t deg = 1 + static_cast<std::size_t>(rng.next() % 8);
      worst = std::min(worst, check_colesanti(B, random_trig_poly(rng, deg)).slack);
      ++count;
    }
  EXPECT_EQ(count, 200);
  EXPECT_GE(worst, -1e-8);
}

TEST(Colesanti, ShiftAndScale) {
  SeededRng rng(5);
  TestFunction f = random_trig_poly(rng, 5);
  ConvexPlaneBody d = build_disk(1, 256);
  CheckReport db = check_colesanti(d, f), ds = check_colesanti(d, f.shifted(1.7));
  EXPECT_NEAR(ds.slack, db.slack, 1e-10);
  // Off the ball the shift moves lhs by 2c(int f dtheta - q P int f ds / A) + c^2 (2 pi - q P^2 / A).
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 256);
  CheckReport b = check_colesanti(e, f), s = check_colesanti(e, f.shifted(1.7)), k = check_colesanti(e, f.scaled(3));
  const double c = 1.7, q = 0.5, A = kPi * 1.2, P = ellipse_perimeter(1.2, 1.0);
  double fth = quad([&](double t) { return f.eval(t); }, 0, kTwoPi);
  double fds = 0.0;
  for (std::size_t j = 0; j < e.m; ++j) fds += f.eval(e.theta[j]) * e.radius[j] * e.dtheta();
  EXPECT_NEAR(s.lhs - b.lhs, 2 * c * (fth - q * P * fds / A) + c * c * (kTwoPi - q * P * P / A), 1e-9);
  EXPECT_NEAR(s.rhs, b.rhs, 1e-10);
  EXPECT_NEAR(k.slack, 9 * b.slack, 1e-10 * 9 * std::max(1.0, std::abs(b.rhs)));
}

TEST(Colesanti, GridSamplesAgreeWithTrig) {
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 256);
  TrigSeries c{{0.1, 0.4, -0.2, 0.3}, {0, 0.5, 0.1, -0.2}};
  CheckReport a = check_colesanti(e, TestFunction::trig(c));
  CheckReport g = check_colesanti(e, TestFunction::grid(c.sample(256)));
  EXPECT_NEAR(a.lhs, g.lhs, 1e-11);
  EXPECT_NEAR(a.rhs, g.rhs, 1e-10);
}

TEST(DualColesanti, CircleEquality) {
  ConvexPlaneBody d = build_disk(1, 512);
  CheckReport r = check_dual_colesanti(d, TestFunction::trig(TrigSeries{{0, 1}, {0, 0}}), 0.0, 0.0);
  EXPECT_NEAR(r.lhs, kPi, 1e-12);
  EXPECT_NEAR(r.rhs, kPi, 1e-10);
  EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-8);
}

TEST(DualColesanti, ConstantsAndAutoC) {
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 256);
  TestFunction c = TestFunction::trig(TrigSeries::constant(2.0));
  CheckReport fixed = check_dual_colesanti(e, c, 1.0, 0.5);
  // int (1/H) ds = int r^2 dtheta.
  double invH = 0.0;
  for (double r : e.radius) invH += r * r * e.dtheta();
  EXPECT_NEAR(fixed.lhs, 0.0, 1e-12);
  EXPECT_NEAR(fixed.rhs, 0.25 * 1.5 * 1.5 * invH, 1e-9);
  CheckReport autoc = check_dual_colesanti(e, c, 1.0);
  EXPECT_NEAR(autoc.get_double("C"), 2.0, 1e-9);
  EXPECT_NEAR(autoc.rhs, 0.0, 1e-12);
}

TEST(DualColesanti, EllipseAgainstDenseOperator) {
  ConvexPlaneBody e = build_ellipse(1.2, 1.0, 256);
  TrigSeries c{{0, 0, 1}, {0, 0, 0}};
  CheckReport r = check_dual_colesanti(e, TestFunction::trig(c), 0.0);
  EXPECT_GT(r.slack, 1e-3);
  Samples Lf = assemble_laplacian(e).apply(c.sample(256));
  double rhs = 0.0;
  for (std::size_t k = 0; k < e.m; ++k) rhs += e.radius[k] * e.radius[k] * Lf[k] * Lf[k] * e.dtheta();
  EXPECT_NEAR(r.rhs, rhs, 1e-9 * rhs);
}

TEST(MeanCurvature, DiskAndBallEqualities) {
  auto disk = check_mean_curvature(boundary_geometry(build_disk(1, 512)), InverseDimension(0.5, 2));
  ASSERT_EQ(disk.size(), 3u);
  EXPECT_NEAR(disk[0].lhs, kTwoPi, 1e-12);
  EXPECT_NEAR(disk[0].rhs, kTwoPi, 1e-12);
  EXPECT_NEAR(disk[2].lhs, kTwoPi, 1e-12);
  EXPECT_NEAR(disk[2].rhs, kTwoPi, 1e-12);
  auto ball = check_mean_curvature(boundary_geometry(build_revolution_body(sphere_profile(1), 1024)),
                                   InverseDimension(1.0 / 3, 3));
  EXPECT_NEAR(ball[0].lhs, 8 * kPi, 1e-6);
  EXPECT_NEAR(ball[0].rhs, 8 * kPi, 1e-6);
  EXPECT_NEAR(ball[2].lhs, 2 * kPi, 1e-6);
  EXPECT_NEAR(ball[2].rhs, 2 * kPi, 1e-6);
  for (auto& r : disk) EXPECT_TRUE(r.passed());
  for (auto& r : ball) EXPECT_TRUE(r.passed());
}

TEST(MeanCurvature, EllipseStrict) {
  auto e = check_mean_curvature(boundary_geometry(build_ellipse(1.2, 1.0, 512)), InverseDimension(0.5, 2));
  const double P = ellipse_perimeter(1.2, 1.0), A = kPi * 1.2;
  EXPECT_NEAR(e[0].lhs, kTwoPi, 1e-10);
  EXPECT_NEAR(e[0].rhs, 0.5 * P * P / A, 1e-9);
  for (auto& r : e) {
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.slack, 1e-4);
  }
}

TEST(MeanCurvature, ProlateSpheroidStrict) {
  auto s = check_mean_curvature(boundary_geometry(build_revolution_body(spheroid_profile(1, 1.2), 1024)),
                                InverseDimension(1.0 / 3, 3));
  EXPECT_NEAR(s[0].get_double("enclosed_measure"), 4.0 / 3 * kPi * 1.2, 1e-8);
  for (auto& r : s) {
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.slack, 1e-4);
  }
}

TEST(BoundaryGaps, CircleEquality) {
  auto r = check_boundary_gaps(build_disk(1, 256));
  EXPECT_NEAR(r[0].rhs, 1.0, 1e-8);
  EXPECT_NEAR(r[0].lhs, 1.0, 1e-12);
  EXPECT_NEAR(r[1].lhs, r[0].lhs, 1e-15);  // rho = 0 collapse
  for (auto& x : r) EXPECT_TRUE(x.passed());
}

TEST(BoundaryGaps, RootBoundCollapseAndRange) {
  for (double a : {0.3, 1.0, 2.5}) {
    EXPECT_DOUBLE_EQ(detail::iih_rho_bound(a, 0.0), a);
    for (double rho : {0.5, 2.0, 7.0}) EXPECT_GE(detail::iih_rho_bound(a, rho), std::max(a, rho / 2));
  }
  EXPECT_THROW(detail::iih_rho_bound(1.0, -1.0), DomainError);
  EXPECT_THROW(check_boundary_gaps(build_disk(1, 64), 0.5), DomainError);
}

TEST(BoundaryGaps, SeededCurves) {
  for (const auto& B : random_body_corpus(7, 10, 256))
    for (auto& r : check_boundary_gaps(B)) EXPECT_TRUE(r.passed()) << B.label << " " << r.name;
}

TEST(BoundaryGaps, SphereAndSpheroid) {
  auto s = check_boundary_gaps(build_revolution_body(sphere_profile(1), 1024));
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s[2].name, "boundary_gap_lichnerowicz");
  EXPECT_NEAR(s[2].lhs, 2.0, 1e-10);
  EXPECT_NEAR(s[2].rhs, 2.0, 1e-4);
  EXPECT_FALSE(s[5].pass.has_value());
  EXPECT_NEAR(s[5].rhs, 1.0, 1e-4);  // lambda1 * (1/2) * 1 on the unit sphere
  for (auto& r : s) EXPECT_TRUE(r.passed()) << r.name;
  auto p = check_boundary_gaps(build_revolution_body(spheroid_profile(1, 1.2), 1024));
  for (auto& r : p) EXPECT_TRUE(r.passed()) << r.name;
  EXPECT_GE(p[4].lhs, 0.5 * p[3].lhs - 1e-12);  // harmonic mean of K dominates min K
}

TEST(BoundaryCd, RoundSpheres) {
  for (double R : {1.0, 2.0}) {
    auto r = boundary_cd_report(build_revolution_body(sphere_profile(R), 1024));
    EXPECT_LE(r[0].get_double("max_discrepancy"), 1e-8);
    EXPECT_TRUE(r[0].passed());
    EXPECT_NEAR(r[1].rhs, 1 / (R * R), 1e-8);
  }
  auto u = boundary_cd_report(build_revolution_body(sphere_profile(1), 1024));
  EXPECT_NEAR(u[2].lhs, 2.0, 1e-12);
  EXPECT_NEAR(u[2].rhs, 2.0, 1e-4);
  EXPECT_TRUE(u[2].passed());
}

TEST(BoundaryCd, SpheroidTwoResolutions) {
  auto lo = boundary_cd_report(build_revolution_body(spheroid_profile(1, 1.2), 512));
  auto hi = boundary_cd_report(build_revolution_body(spheroid_profile(1, 1.2), 1024));
  EXPECT_LE(hi[0].get_double("max_discrepancy"), 1e-6);
  EXPECT_LE(lo[0].get_double("max_discrepancy"), 1e-6);
  EXPECT_NEAR(lo[2].lhs, hi[2].lhs, 1e-10);
  EXPECT_GT(hi[2].slack, 1e-3);
  for (auto& r : hi) EXPECT_TRUE(r.passed()) << r.name;
}
