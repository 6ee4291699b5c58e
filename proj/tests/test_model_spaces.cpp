#include <gtest/gtest.h>

#include <cmath>

#include "reilly_lab/model_spaces.hpp"
#include "reilly_lab/numerics.hpp"

using namespace reilly_lab;

namespace {

ModelDensityParams model(double rho, double N, double beta_trunc, ModelVariant v = ModelVariant::NeumannSymmetric) {
  return {rho, InverseDimension::from_N(N), beta_trunc, v};
}

double max_ric_error(const IntervalModel& m, double rho, const InverseDimension& th) {
  Samples r = m.ric(th);
  double e = 0;
  for (double x : r) e = std::max(e, std::abs(x - rho));
  return e;
}

}  // namespace

TEST(InverseDimension, LimitConventions) {
  InverseDimension inf = InverseDimension::from_N(INFINITY);
  EXPECT_TRUE(inf.is_zero());
  EXPECT_EQ(inf.n_over_n_minus_1(), 1.0);
  EXPECT_EQ(inf.n_minus_1_over_n(), 1.0);
  InverseDimension zero = InverseDimension::from_N(0);
  EXPECT_TRUE(zero.is_minus_infinity());
  EXPECT_EQ(zero.n_over_n_minus_1(), 0.0);
  EXPECT_EQ(zero.times(0.0), 0.0);
  EXPECT_EQ(InverseDimension(-INFINITY, 2).inv_N_minus_n(), -0.5);
  InverseDimension five = InverseDimension::from_N(5);
  EXPECT_DOUBLE_EQ(five.n_over_n_minus_1(), 1.25);
  EXPECT_DOUBLE_EQ(five.inv_N_minus_n(), 0.25);
  EXPECT_THROW(InverseDimension(0.6, 2), DomainError);
  EXPECT_NO_THROW(InverseDimension(0.5, 2));
  EXPECT_DOUBLE_EQ(inf.power_transform(std::exp(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(InverseDimension(0.5, 2).power_transform(4.0), 4.0);
}

TEST(ModelDensity, SphericalModelN5) {
  auto p = model(1, 5, 0.999 * kPi);
  EXPECT_DOUBLE_EQ(p.delta(), 0.25);
  EXPECT_DOUBLE_EQ(p.beta(), kPi);
  IntervalModel m = build_model_density(p, 2001);
  EXPECT_DOUBLE_EQ(m.a, -0.999 * kPi);
  Samples w = m.density();
  for (std::size_t i = 0; i < m.n_pts(); i += 97) EXPECT_NEAR(w[i], std::pow(std::cos(m.t[i] / 2), 4), 1e-14);
  EXPECT_LE(max_ric_error(m, 1.0, p.theta), 1e-10 * 2);
}

TEST(ModelDensity, NegativeDimensionCoshProfile) {
  auto p = model(1, -2, 5);
  EXPECT_NEAR(p.delta(), -1.0 / 3, 1e-15);
  IntervalModel m = build_model_density(p, 1001);
  Samples w = m.density();
  for (std::size_t i = 0; i < m.n_pts(); i += 50)
    EXPECT_NEAR(w[i], std::pow(std::cosh(m.t[i] / std::sqrt(3.0)), -3), 1e-14);
  // -(N-1) R''/R = rho with R'' from a divided difference of R.
  for (double t : {-4.0, -1.0, 0.3, 2.5}) {
    double e = 1e-4;
    double Rpp = (p.R(t + e) - 2 * p.R(t) + p.R(t - e)) / (e * e);
    EXPECT_NEAR(-(p.N() - 1) * Rpp / p.R(t), 1.0, 1e-6);
  }
  EXPECT_LE(max_ric_error(m, 1.0, p.theta), 1e-10 * 2);
}

TEST(ModelDensity, RicEqualsRhoAcrossDomain) {
  for (double rho : {0.5, 1.0, 3.0})
    for (double N : {1.5, 2.0, 5.0, 20.0, -0.5, -2.0, -10.0}) {
      auto p = model(rho, N, 1.0);
      p.beta_trunc = p.delta() > 0 ? 0.99 * p.beta() : 6.0;
      for (auto v : {ModelVariant::NeumannSymmetric, ModelVariant::DirichletHalf}) {
        p.variant = v;
        IntervalModel m = build_model_density(p, 401);
        EXPECT_LE(max_ric_error(m, rho, p.theta), 1e-10 * (1 + rho)) << rho << " " << N;
      }
    }
}

TEST(ModelDensity, RejectsInvalidParameters) {
  EXPECT_THROW(build_model_density(model(1, INFINITY, 1), 100), DomainError);
  EXPECT_THROW(build_model_density(model(1, 0, 1), 100), DomainError);
  EXPECT_THROW(build_model_density({1, InverseDimension(1.0), 1, ModelVariant::NeumannSymmetric}, 100), DomainError);
  EXPECT_THROW(build_model_density(model(1, 5, kPi), 100), DomainError);
  EXPECT_THROW(build_model_density(model(1, 5, 3.0), 10), DomainError);
  EXPECT_THROW(build_model_density(model(-1, 5, 1.0), 100), DomainError);
}

TEST(GaussianInterval, ConstantHessian) {
  IntervalModel a = build_gaussian_interval(1, 6, 2001);
  for (double x : a.ddV) EXPECT_EQ(x, 1.0);
  IntervalModel b = build_gaussian_interval(2, 8, 1001);
  for (double x : b.ddV) EXPECT_EQ(x, 0.25);
  for (double x : a.ric(InverseDimension::infinite())) EXPECT_EQ(x, 1.0);
}

TEST(SampledInterval, FourthOrderDerivatives) {
  Samples t = linspace(-1, 1, 201), V(201);
  for (std::size_t i = 0; i < t.size(); ++i) V[i] = std::sin(t[i]);
  IntervalModel m = build_interval_from_samples(-1, 1, V);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(m.dV[i], std::cos(t[i]), 1e-8);
    EXPECT_NEAR(m.ddV[i], -std::sin(t[i]), 1e-6);
  }
}

TEST(PlaneBody, DiskAndEllipticalPerturbations) {
  ConvexPlaneBody disk = build_plane_body(TrigSeries::constant(1.0));
  for (double r : disk.radius) EXPECT_NEAR(r, 1.0, 1e-15);
  ConvexPlaneBody e = build_plane_body(TrigSeries::cosines({1.0, 0.0, 0.3}));
  for (std::size_t k = 0; k < e.m; ++k) EXPECT_NEAR(e.radius[k], 1 - 0.9 * std::cos(2 * e.theta[k]), 1e-13);
  try {
    build_plane_body(TrigSeries::cosines({1.0, 0.0, 0.6}));
    FAIL() << "expected ConvexityViolation";
  } catch (const ConvexityViolation& ex) {
    EXPECT_NE(std::string(ex.what()).find("theta = 0"), std::string::npos) << ex.what();
  }
}

TEST(PlaneBody, BitReproducible) {
  ConvexPlaneBody a = build_ellipse(1.2, 1.0), b = build_ellipse(1.2, 1.0);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.radius, b.radius);
}

TEST(PlaneBody, BoundaryRoundTripRecoversSupport) {
  std::vector<ConvexPlaneBody> bodies = random_body_corpus(11, 5);
  bodies.push_back(build_ellipse(1.2, 1.0));
  for (const auto& B : bodies) {
    auto p = B.boundary_points();
    Samples x(B.m), y(B.m);
    for (std::size_t k = 0; k < B.m; ++k) {
      x[k] = p[k].x;
      y[k] = p[k].y;
    }
    Samples dx = spectral_derivative(x, 1), dy = spectral_derivative(y, 1);
    double err = 0;
    for (std::size_t k = 0; k < B.m; ++k) {
      double len = std::hypot(dx[k], dy[k]);
      double nx = dy[k] / len, ny = -dx[k] / len;
      EXPECT_NEAR(nx, std::cos(B.theta[k]), 1e-8);
      EXPECT_NEAR(ny, std::sin(B.theta[k]), 1e-8);
      err = std::max(err, std::abs(x[k] * nx + y[k] * ny - B.h[k]));
    }
    EXPECT_LE(err, 1e-8) << B.label;
  }
}

TEST(PlaneBody, EllipseAreaAndPerimeter) {
  ConvexPlaneBody e = build_ellipse(1.2, 1.0);
  EXPECT_NEAR(e.area(), kPi * 1.2, 1e-12);
  // Ramanujan-free check: perimeter of the disk and the circle of radius 2.
  EXPECT_NEAR(build_disk(2.0).perimeter(), 4 * kPi, 1e-12);
}

TEST(RandomBodies, SeededCorpusIsConvexAndStable) {
  auto a = random_body_corpus(5, 20), b = random_body_corpus(5, 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].h, b[i].h);
    for (double r : a[i].radius) EXPECT_GT(r, 0.0);
  }
}

TEST(RevolutionBody, RoundSphere) {
  for (double R : {1.0, 2.0}) {
    RevolutionBody3D B = build_revolution_body(sphere_profile(R), 256);
    EXPECT_NEAR(B.S, kPi * R, 1e-12);
    for (std::size_t j = 0; j < B.samples(); ++j) {
      EXPECT_NEAR(B.kappa1[j], 1 / R, 1e-12);
      EXPECT_NEAR(B.kappa2[j], 1 / R, 1e-9);
      EXPECT_NEAR(B.r[j], R * std::sin(B.s[j] / R), 1e-12);
    }
  }
}

TEST(RevolutionBody, ProlateSpheroidCurvatures) {
  const double a = 1.0, c = 1.5;
  RevolutionBody3D B = build_revolution_body(spheroid_profile(a, c), 512);
  for (std::size_t j = 0; j < B.samples(); ++j) {
    double u = B.u[j], g = std::sqrt(a * a * std::cos(u) * std::cos(u) + c * c * std::sin(u) * std::sin(u));
    EXPECT_NEAR(B.kappa1[j], a * c / (g * g * g), 1e-12);
    EXPECT_NEAR(B.kappa2[j], c / (a * g), 1e-9);
    EXPECT_GT(B.kappa1[j], 0);
  }
  // Arclength parametrization: s(u_j) by an independent dense Simpson rule.
  for (std::size_t j = 0; j < B.samples(); j += 97) {
    const std::size_t n = 4001;
    Samples w = simpson_weights(n, B.u[j] / (n - 1)), uu = linspace(0, B.u[j], n);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::hypot(a * std::cos(uu[i]), c * std::sin(uu[i]));
    EXPECT_NEAR(s, B.s[j], 1e-10);
  }
}

TEST(RevolutionBody, RejectsOpenProfile) {
  ProfileSpec open{[](double u) {
                     return std::array<double, 6>{1 + std::sin(u), std::cos(u), std::cos(u), -std::sin(u), -std::sin(u), -std::cos(u)};
                   },
                   "open"};
  EXPECT_THROW(build_revolution_body(open, 64), DomainError);
}

TEST(SphereCap, ClosedForms) {
  SphereCap c = build_sphere_cap(kPi / 3);
  EXPECT_NEAR(c.area(), kPi, 1e-15);
  EXPECT_NEAR(c.boundary_length(), kPi * std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(c.geodesic_curvature(), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_LT(build_sphere_cap(2.0).geodesic_curvature(), 0);
  EXPECT_THROW(build_sphere_cap(0.0), DomainError);
  EXPECT_THROW(build_sphere_cap(kPi), DomainError);
}

TEST(SphereCap, LatitudeQuadratureMatchesArea) {
  for (double r : {0.3, kPi / 3, 2.0}) {
    const std::size_t n = 2001;
    Samples psi = linspace(0, r, n), w = simpson_weights(n, r / (n - 1));
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * kTwoPi * std::sin(psi[i]);
    EXPECT_NEAR(s, build_sphere_cap(r).area(), 1e-10);
  }
}
