#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "model_spaces.hpp"
#include "numerics.hpp"

namespace reilly_lab {

enum class OperatorKind { Tridiagonal, Periodic };
enum class BoundaryCondition { Neumann, Dirichlet, Periodic };

inline const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    default: return "periodic";
  }
}

// Weighted Laplacian L on the active nodes of a grid. Tridiagonal operators
// act on nodes [first, first + diag.size()) of a grid with grid_size nodes;
// sub[0] and sup.back() couple to pinned Dirichlet nodes when present.
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::Tridiagonal;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  std::string model_ref;
  std::size_t grid_size = 0;
  std::size_t first = 0;
  Samples sub, diag, sup;
  Eigen::MatrixXd dense;
  Samples mass;         // e^{-V} times quadrature weight, per active node
  Samples symmetrizer;  // sqrt(mass)
  std::array<BoundaryCondition, 2> ends{BoundaryCondition::Neumann, BoundaryCondition::Neumann};
  double h = 0.0;
  std::string stencil;

  std::size_t active() const { return kind == OperatorKind::Tridiagonal ? diag.size() : mass.size(); }
  bool constant_kernel() const { return bc != BoundaryCondition::Dirichlet; }

  // Applies L to a full-grid vector and returns the active rows.
  Samples apply(const Samples& u) const {
    if (kind == OperatorKind::Periodic) {
      Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<long>(u.size()));
      Eigen::VectorXd y = dense * x;
      return Samples(y.data(), y.data() + y.size());
    }
    const std::size_t k = diag.size();
    Samples out(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t g = first + i;
      double s = diag[i] * u[g];
      if (g > 0 && (i > 0 || first > 0)) s += sub[i] * u[g - 1];
      if (g + 1 < grid_size && (i + 1 < k || first + k < grid_size)) s += sup[i] * u[g + 1];
      out[i] = s;
    }
    return out;
  }

  // M^{1/2} L M^{-1/2} on the active nodes.
  Eigen::MatrixXd symmetric_matrix() const {
    const long k = static_cast<long>(active());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
    if (kind == OperatorKind::Periodic) {
      for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) S(i, j) = symmetrizer[i] * dense(i, j) / symmetrizer[j];
      return S;
    }
    for (long i = 0; i < k; ++i) {
      S(i, i) = diag[i];
      if (i + 1 < k) S(i, i + 1) = symmetrizer[i] * sup[i] / symmetrizer[i + 1];
      if (i > 0) S(i, i - 1) = symmetrizer[i] * sub[i] / symmetrizer[i - 1];
    }
    return S;
  }
};

// ------------------------------------------------------------ assembly

// Conservative scheme (1/(w_i h^2)) [w_{i+1/2}(u_{i+1}-u_i) - w_{i-1/2}(u_i-u_{i-1})]
// with Neumann ends by ghost reflection.
inline DiscreteOperator assemble_laplacian(const IntervalModel& model, BoundaryCondition left,
                                           BoundaryCondition right) {
  if (model.n_pts() < 8) throw DomainError("operator needs at least 8 nodes");
  if (left == BoundaryCondition::Periodic || right == BoundaryCondition::Periodic)
    throw DomainError("periodic conditions need a closed boundary");
  const std::size_t n = model.n_pts();
  const double h = model.h(), h2 = h * h;
  Samples w = model.density();
  Samples face(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) face[i] = std::exp(-0.5 * (model.V[i] + model.V[i + 1]));

  DiscreteOperator op;
  op.kind = OperatorKind::Tridiagonal;
  op.ends = {left, right};
  op.bc = (left == BoundaryCondition::Dirichlet || right == BoundaryCondition::Dirichlet) ? BoundaryCondition::Dirichlet
                                                                                           : BoundaryCondition::Neumann;
  op.model_ref = model.label;
  op.grid_size = n;
  op.h = h;
  op.stencil = "conservative-3pt,face=exp(-(V_i+V_i+1)/2),neumann=ghost-reflection";
  std::size_t lo = left == BoundaryCondition::Dirichlet ? 1 : 0;
  std::size_t hi = right == BoundaryCondition::Dirichlet ? n - 2 : n - 1;
  op.first = lo;
  for (std::size_t i = lo; i <= hi; ++i) {
    double s = 0.0, p = 0.0, q = h;
    if (i == 0) {
      p = 2 * face[0] / (w[0] * h2);
      q = h / 2;
    } else if (i == n - 1) {
      s = 2 * face[n - 2] / (w[n - 1] * h2);
      q = h / 2;
    } else {
      s = face[i - 1] / (w[i] * h2);
      p = face[i] / (w[i] * h2);
    }
    op.sub.push_back(s);
    op.sup.push_back(p);
    op.diag.push_back(-(s + p));
    op.mass.push_back(w[i] * q);
  }
  op.symmetrizer.resize(op.mass.size());
  for (std::size_t i = 0; i < op.mass.size(); ++i) op.symmetrizer[i] = std::sqrt(op.mass[i]);
  return op;
}

inline DiscreteOperator assemble_laplacian(const IntervalModel& model, BoundaryCondition bc) {
  return assemble_laplacian(model, bc, bc);
}

// Fourier differentiation matrix on m uniform angles (m even, Nyquist dropped).
inline Eigen::MatrixXd fourier_diff_matrix(std::size_t m) {
  if (m % 2 != 0) throw DomainError("spectral grids need an even number of angles");
  const long M = static_cast<long>(m);
  const double h = kTwoPi / static_cast<double>(m);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
  for (long j = 0; j < M; ++j)
    for (long k = 0; k < M; ++k) {
      if (j == k) continue;
      long d = j - k;
      double sign = ((d % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
      D(j, k) = 0.5 * sign / std::tan(static_cast<double>(d) * h / 2);
    }
  return D;
}

// L f = (1/(w r)) d/dtheta ((w/r) df/dtheta) with ds = r dtheta.
inline DiscreteOperator assemble_laplacian(const ConvexPlaneBody& body, BoundaryCondition bc = BoundaryCondition::Periodic,
                                           const Samples& density = {}) {
  if (bc != BoundaryCondition::Periodic) throw DomainError("closed curves take periodic conditions only");
  if (body.m < 8) throw DomainError("operator needs at least 8 nodes");
  const std::size_t m = body.m;
  Samples w = density.empty() ? Samples(m, 1.0) : density;
  Eigen::MatrixXd D = fourier_diff_matrix(m);
  Eigen::VectorXd c(m);
  for (std::size_t k = 0; k < m; ++k) c[static_cast<long>(k)] = w[k] / body.radius[k];
  Eigen::MatrixXd inner = c.asDiagonal() * D;
  Eigen::MatrixXd L = D * inner;
  for (std::size_t k = 0; k < m; ++k) L.row(static_cast<long>(k)) /= (w[k] * body.radius[k]);
  DiscreteOperator op;
  op.kind = OperatorKind::Periodic;
  op.bc = BoundaryCondition::Periodic;
  op.model_ref = body.label + ":boundary";
  op.grid_size = m;
  op.dense = std::move(L);
  op.h = body.dtheta();
  op.mass.resize(m);
  op.symmetrizer.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    op.mass[k] = w[k] * body.radius[k] * body.dtheta();
    op.symmetrizer[k] = std::sqrt(op.mass[k]);
  }
  op.stencil = "fourier-collocation,nyquist-dropped";
  return op;
}

// Azimuthal mode `mode` of the surface Laplacian: staggered cells on the
// meridian, faces at the half-grid even samples (zero flux at both poles).
inline DiscreteOperator assemble_revolution_mode(const RevolutionBody3D& body, int mode) {
  const std::size_t n = body.cells;
  const double ds = body.ds(), ds2 = ds * ds;
  DiscreteOperator op;
  op.kind = OperatorKind::Tridiagonal;
  op.bc = mode == 0 ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
  op.model_ref = body.label + ":boundary:mode=" + std::to_string(mode);
  op.grid_size = n;
  op.first = 0;
  op.h = ds;
  op.stencil = "staggered-cell-centre,mode=" + std::to_string(mode);
  const double mm = static_cast<double>(mode * mode);
  for (std::size_t c = 0; c < n; ++c) {
    double rc = body.r[2 * c + 1], rl = body.r[2 * c], rr = body.r[2 * c + 2];
    double s = c == 0 ? 0.0 : rl / (rc * ds2);
    double p = c + 1 == n ? 0.0 : rr / (rc * ds2);
    op.sub.push_back(s);
    op.sup.push_back(p);
    op.diag.push_back(-(s + p) - mm / (rc * rc));
    op.mass.push_back(kTwoPi * rc * ds);
  }
  op.symmetrizer.resize(n);
  for (std::size_t c = 0; c < n; ++c) op.symmetrizer[c] = std::sqrt(op.mass[c]);
  return op;
}

// ------------------------------------------------------------ linear algebra

namespace detail {

// Tridiagonal LU with partial pivoting (gtsv style). a: sub, d: diag, c: sup.
inline Samples gtsv(Samples a, Samples d, Samples c, Samples b) {
  const std::size_t n = d.size();
  Samples du2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double& lower = a[i + 1];
    if (std::abs(d[i]) >= std::abs(lower)) {
      if (d[i] == 0.0) throw SingularSystem("singular tridiagonal system");
      double f = lower / d[i];
      d[i + 1] -= f * c[i];
      b[i + 1] -= f * b[i];
      lower = 0.0;
    } else {
      double f = d[i] / lower;
      d[i] = lower;
      double tmp = d[i + 1];
      d[i + 1] = c[i] - f * tmp;
      if (i + 2 < n) {
        du2[i] = c[i + 1];
        c[i + 1] = -f * du2[i];
      }
      c[i] = tmp;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
      lower = 0.0;
    }
  }
  if (d[n - 1] == 0.0) throw SingularSystem("singular tridiagonal system");
  Samples x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n > 1) x[n - 2] = (b[n - 2] - c[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) x[i] = (b[i] - c[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  return x;
}

// Symmetric tridiagonal bands of -S.
inline std::pair<Samples, Samples> negated_symmetric_bands(const DiscreteOperator& op) {
  const std::size_t k = op.diag.size();
  Samples d(k), e(k > 0 ? k - 1 : 0);
  for (std::size_t i = 0; i < k; ++i) d[i] = -op.diag[i];
  for (std::size_t i = 0; i + 1 < k; ++i) {
    double upper = op.symmetrizer[i] * op.sup[i] / op.symmetrizer[i + 1];
    double lower = op.symmetrizer[i + 1] * op.sub[i + 1] / op.symmetrizer[i];
    e[i] = -0.5 * (upper + lower);
  }
  return {d, e};
}

inline Eigen::VectorXd tridiagonal_eigenvalues(const Samples& d, const Samples& e) {
  Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<long>(d.size()));
  Eigen::VectorXd E = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<long>(e.size()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(D, E, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("tridiagonal eigensolve did not converge");
  return es.eigenvalues();
}

// Penalized -S for periodic operators: kernel {constants, Nyquist} moved to gamma.
inline Eigen::MatrixXd penalized_negative_symmetric(const DiscreteOperator& op) {
  Eigen::MatrixXd S = op.symmetric_matrix();
  Eigen::MatrixXd A = -0.5 * (S + S.transpose());
  const long m = A.rows();
  Eigen::MatrixXd Q(m, 2);
  for (long k = 0; k < m; ++k) {
    Q(k, 0) = op.symmetrizer[k];
    Q(k, 1) = (k % 2 == 0 ? 1.0 : -1.0) * op.symmetrizer[k];
  }
  Q.col(0).normalize();
  Q.col(1) -= Q.col(0).dot(Q.col(1)) * Q.col(0);
  Q.col(1).normalize();
  double gamma = A.cwiseAbs().rowwise().sum().maxCoeff();
  A += gamma * Q * Q.transpose();
  return A;
}

}  // namespace detail

struct EigenPair {
  double lambda = 0.0;
  Samples eigvec;  // on the full grid, zero at pinned nodes, unit weighted norm
};

// The first positive eigenvalue of -L (constants excluded for Neumann and
// periodic operators; the smallest eigenvalue for Dirichlet).
inline EigenPair spectral_gap(const DiscreteOperator& op) {
  EigenPair out;
  const std::size_t k = op.active();
  Eigen::VectorXd y;
  if (op.kind == OperatorKind::Tridiagonal) {
    auto [d, e] = detail::negated_symmetric_bands(op);
    Eigen::VectorXd ev = detail::tridiagonal_eigenvalues(d, e);
    std::size_t idx = op.constant_kernel() ? 1 : 0;
    if (static_cast<long>(idx) >= ev.size()) throw ConvergenceFailure("operator too small for a gap");
    out.lambda = ev[static_cast<long>(idx)];
    // Inverse iteration for the eigenvector with a slightly perturbed shift.
    double shift = out.lambda - 1e-9 * std::max(1.0, std::abs(out.lambda));
    Samples sub(k, 0.0), sup(k, 0.0), dd(k);
    for (std::size_t i = 0; i < k; ++i) dd[i] = d[i] - shift;
    for (std::size_t i = 0; i + 1 < k; ++i) sub[i + 1] = sup[i] = e[i];
    Samples v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    for (int it = 0; it < 4; ++it) {
      v = detail::gtsv(sub, dd, sup, v);
      double nrm = std::sqrt(dot(v, v));
      for (double& x : v) x /= nrm;
    }
    y = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<long>(k));
  } else {
    Eigen::MatrixXd A = detail::penalized_negative_symmetric(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("dense symmetric eigensolve did not converge");
    out.lambda = es.eigenvalues()[0];
    double shift = out.lambda - 1e-9 * std::max(1.0, std::abs(out.lambda));
    Eigen::MatrixXd B = A - shift * Eigen::MatrixXd::Identity(A.rows(), A.cols());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    y = Eigen::VectorXd::Ones(A.rows());
    for (long i = 0; i < y.size(); ++i) y[i] += 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    for (int it = 0; it < 4; ++it) {
      y = lu.solve(y);
      y.normalize();
    }
  }
  out.eigvec.assign(op.grid_size, 0.0);
  for (std::size_t i = 0; i < k; ++i) out.eigvec[op.first + i] = y[static_cast<long>(i)] / op.symmetrizer[i];
  return out;
}

// Smallest `count` eigenvalues of -L, including 0 for operators with a
// constant kernel.
inline std::vector<double> spectrum(const DiscreteOperator& op, std::size_t count) {
  std::vector<double> out;
  if (op.kind == OperatorKind::Tridiagonal) {
    auto [d, e] = detail::negated_symmetric_bands(op);
    Eigen::VectorXd ev = detail::tridiagonal_eigenvalues(d, e);
    for (long i = 0; i < ev.size() && out.size() < count; ++i) out.push_back(ev[i]);
    return out;
  }
  out.push_back(0.0);
  Eigen::MatrixXd A = detail::penalized_negative_symmetric(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("dense symmetric eigensolve did not converge");
  for (long i = 0; i < es.eigenvalues().size() && out.size() < count; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

// ------------------------------------------------------------ Poisson

// Dirichlet values or outward normal derivatives u_nu per end.
struct BoundaryData {
  double left = 0.0, right = 0.0;
};

struct PoissonSolution {
  Samples u;
  double projection = 0.0;  // constant removed from f to reach compatibility
  double residual = 0.0;    // max |L u - f| / (|L| |u| + |f|), infinity norms
};

namespace detail {

inline double compatibility_scale(const Samples& weighted_abs, double flux) {
  return std::max(1e-300, sum(weighted_abs) + std::abs(flux));
}

}  // namespace detail

inline PoissonSolution solve_poisson(const DiscreteOperator& op, const Samples& f, const BoundaryData& bc = {}) {
  PoissonSolution sol;
  if (f.size() != op.grid_size) throw DomainError("right-hand side length mismatch");
  if (op.kind == OperatorKind::Periodic) {
    const std::size_t m = op.grid_size;
    double mean = dot(op.mass, f) / sum(op.mass);
    Samples wabs(m);
    for (std::size_t k = 0; k < m; ++k) wabs[k] = op.mass[k] * std::abs(f[k]);
    if (std::abs(mean) * sum(op.mass) > 1e-6 * detail::compatibility_scale(wabs, 0.0))
      throw SingularSystem("periodic Poisson data violates the compatibility condition");
    sol.projection = mean;
    Eigen::MatrixXd A = detail::penalized_negative_symmetric(op);
    Eigen::VectorXd rhs(static_cast<long>(m));
    for (std::size_t k = 0; k < m; ++k) rhs[static_cast<long>(k)] = -op.symmetrizer[k] * (f[k] - mean);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw SingularSystem("penalized periodic operator is not positive definite");
    Eigen::VectorXd y = llt.solve(rhs);
    sol.u.resize(m);
    for (std::size_t k = 0; k < m; ++k) sol.u[k] = y[static_cast<long>(k)] / op.symmetrizer[k];
    Samples Lu = op.apply(sol.u);
    double r = 0.0;
    for (std::size_t k = 0; k < m; ++k) r = std::max(r, std::abs(Lu[k] - (f[k] - mean)));
    sol.residual = r / (op.dense.cwiseAbs().rowwise().sum().maxCoeff() * max_abs(sol.u) + max_abs(f) + 1e-300);
    return sol;
  }

  const std::size_t n = op.grid_size, k = op.diag.size();
  Samples u(n, 0.0);
  if (op.ends[0] == BoundaryCondition::Dirichlet) u[0] = bc.left;
  if (op.ends[1] == BoundaryCondition::Dirichlet) u[n - 1] = bc.right;
  Samples rhs(k);
  for (std::size_t i = 0; i < k; ++i) rhs[i] = f[op.first + i];
  if (op.ends[0] == BoundaryCondition::Dirichlet) rhs[0] -= op.sub[0] * bc.left;
  else rhs[0] -= 2 * bc.left / op.h;
  if (op.ends[1] == BoundaryCondition::Dirichlet) rhs[k - 1] -= op.sup[k - 1] * bc.right;
  else rhs[k - 1] -= 2 * bc.right / op.h;

  if (op.bc == BoundaryCondition::Neumann) {
    // Continuous compatibility, int f dmu = int_boundary u_nu dmu, checked with
    // an accurate quadrature of the weight e^{-V} = mass / trapezoid weight.
    Samples sw = simpson_weights(n, op.h);
    Samples trap(n, op.h);
    trap[0] = trap[n - 1] = op.h / 2;
    double integral = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = op.mass[i] / trap[i];
      integral += sw[i] * w * f[i];
      scale += sw[i] * w * std::abs(f[i]);
    }
    double wa = op.mass[0] / trap[0], wb = op.mass[n - 1] / trap[n - 1];
    double flux = wa * bc.left + wb * bc.right;
    if (std::abs(integral - flux) > 1e-6 * (scale + std::abs(wa * bc.left) + std::abs(wb * bc.right) + 1e-300))
      throw SingularSystem("Neumann data violates the compatibility condition");
    double c = dot(op.mass, rhs) / sum(op.mass);
    for (double& x : rhs) x -= c;
    sol.projection = c;
    // Pin u_0 = 0 and drop the dependent first row.
    Samples s(op.sub.begin() + 1, op.sub.end()), d(op.diag.begin() + 1, op.diag.end()),
        p(op.sup.begin() + 1, op.sup.end()), r(rhs.begin() + 1, rhs.end());
    Samples x = detail::gtsv(s, d, p, r);
    u[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) u[i] = x[i - 1];
    double mean = dot(op.mass, u) / sum(op.mass);
    for (double& v : u) v -= mean;
  } else {
    Samples x = detail::gtsv(op.sub, op.diag, op.sup, rhs);
    for (std::size_t i = 0; i < k; ++i) u[op.first + i] = x[i];
  }
  // Residual on the solved (projected) system.
  Samples Lu = op.apply(u);
  Samples target(k);
  for (std::size_t i = 0; i < k; ++i) target[i] = f[op.first + i] - sol.projection;
  if (op.ends[0] == BoundaryCondition::Neumann) target[0] -= 2 * bc.left / op.h;
  if (op.ends[1] == BoundaryCondition::Neumann) target[k - 1] -= 2 * bc.right / op.h;
  double res = 0.0;
  for (std::size_t i = 0; i < k; ++i) res = std::max(res, std::abs(Lu[i] - target[i]));
  double norm = 0.0;
  for (std::size_t i = 0; i < k; ++i) norm = std::max(norm, std::abs(op.sub[i]) + std::abs(op.diag[i]) + std::abs(op.sup[i]));
  sol.residual = res / (norm * max_abs(u) + max_abs(target) + 1e-300);
  sol.u = std::move(u);
  return sol;
}

// ------------------------------------------------------------ quadrature

inline double weighted_integral(const Samples& f, const IntervalModel& model) {
  if (f.size() != model.n_pts()) throw DomainError("sample length mismatch");
  Samples w = simpson_weights(f.size(), model.h());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * std::exp(-model.V[i]);
  return s;
}

inline double weighted_integral(const Samples& f, const RadialBall& ball) {
  if (f.size() != ball.r.size()) throw DomainError("sample length mismatch");
  Samples w = simpson_weights(f.size(), ball.h());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += w[i] * f[i] * std::pow(ball.r[i], ball.n_ambient - 1) * std::exp(-ball.V[i]);
  return s * ball.sphere_area_constant();
}

// Boundary integral over a closed plane curve, ds = (h + h'') dtheta.
inline double weighted_integral(const Samples& f, const ConvexPlaneBody& body) {
  if (f.size() != body.m) throw DomainError("sample length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < body.m; ++k) s += f[k] * body.radius[k];
  return s * body.dtheta();
}

// ------------------------------------------------------------ boundaries

struct BoundaryGeometry {
  std::string body_ref;
  int boundary_dim = 1;
  std::vector<std::array<double, 3>> normal;
  Samples kappa1, kappa2;  // kappa2 empty for curves
  Samples H_g, H_mu, element;
  double enclosed_measure = 0.0;

  std::size_t size() const { return element.size(); }
  double boundary_measure() const { return sum(element); }
  double integrate(const Samples& f) const { return dot(f, element); }
  double min_II() const {
    double m = kappa1.empty() ? 0.0 : kappa1[0];
    for (double x : kappa1) m = std::min(m, x);
    for (double x : kappa2) m = std::min(m, x);
    return m;
  }
  double max_II() const {
    double m = kappa1.empty() ? 0.0 : kappa1[0];
    for (double x : kappa1) m = std::max(m, x);
    for (double x : kappa2) m = std::max(m, x);
    return m;
  }
  double min_H() const {
    double m = H_mu.empty() ? 0.0 : H_mu[0];
    for (double x : H_mu) m = std::min(m, x);
    return m;
  }
};

inline BoundaryGeometry boundary_geometry(const ConvexPlaneBody& body) {
  BoundaryGeometry g;
  g.body_ref = body.label;
  g.boundary_dim = 1;
  for (std::size_t k = 0; k < body.m; ++k) {
    if (!(body.radius[k] > 0)) throw ConvexityViolation("non-positive curvature radius at theta = " + fmt_g(body.theta[k]));
    g.normal.push_back({std::cos(body.theta[k]), std::sin(body.theta[k]), 0.0});
    double ii = 1.0 / body.radius[k];
    g.kappa1.push_back(ii);
    g.H_g.push_back(ii);
    g.H_mu.push_back(ii);
    g.element.push_back(body.radius[k] * body.dtheta());
  }
  g.enclosed_measure = body.area();
  return g;
}

// Samples on the half grid with Simpson weights times 2 pi r.
inline BoundaryGeometry boundary_geometry(const RevolutionBody3D& body) {
  BoundaryGeometry g;
  g.body_ref = body.label;
  g.boundary_dim = 2;
  const std::size_t n = body.samples();
  Samples w = simpson_weights(n, body.half_step());
  double vol = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    g.normal.push_back({-body.dz[j], 0.0, body.dr[j]});
    g.kappa1.push_back(body.kappa1[j]);
    g.kappa2.push_back(body.kappa2[j]);
    double H = body.kappa1[j] + body.kappa2[j];
    g.H_g.push_back(H);
    g.H_mu.push_back(H);
    g.element.push_back(kTwoPi * body.r[j] * w[j]);
    vol += -kPi * body.r[j] * body.r[j] * body.dz[j] * w[j];
  }
  g.enclosed_measure = vol;
  return g;
}

// A round boundary carried by a single representative sample.
inline BoundaryGeometry boundary_geometry(const RadialBall& ball) {
  BoundaryGeometry g;
  g.body_ref = ball.label;
  g.boundary_dim = ball.n_ambient - 1;
  const double R = ball.R_outer;
  const double Vr = ball.V.back(), dVr = ball.dV.back();
  g.normal.push_back({1.0, 0.0, 0.0});
  g.kappa1.push_back(1.0 / R);
  if (ball.n_ambient == 3) g.kappa2.push_back(1.0 / R);
  g.H_g.push_back((ball.n_ambient - 1) / R);
  g.H_mu.push_back((ball.n_ambient - 1) / R - dVr);
  g.element.push_back(std::exp(-Vr) * ball.sphere_area_constant() * std::pow(R, ball.n_ambient - 1));
  g.enclosed_measure = weighted_integral(Samples(ball.r.size(), 1.0), ball);
  return g;
}

inline BoundaryGeometry boundary_geometry(const SphereCap& cap) {
  BoundaryGeometry g;
  g.body_ref = cap.label();
  g.boundary_dim = 1;
  g.normal.push_back({std::cos(cap.r_cap), 0.0, -std::sin(cap.r_cap)});
  double kg = cap.geodesic_curvature();
  g.kappa1.push_back(kg);
  g.H_g.push_back(kg);
  g.H_mu.push_back(kg);
  g.element.push_back(cap.boundary_length());
  g.enclosed_measure = cap.area();
  return g;
}

inline double weighted_integral(const Samples& f, const BoundaryGeometry& g) {
  if (f.size() != g.size()) throw DomainError("sample length mismatch");
  return g.integrate(f);
}

// Smallest positive eigenvalue of the surface Laplacian, minimized over
// azimuthal modes 0..m_max (the constant is excluded in mode 0).
struct RevolutionGap {
  double lambda = 0.0;
  int mode = 0;
  std::vector<double> per_mode;
};

inline RevolutionGap boundary_gap_revolution_modes(const RevolutionBody3D& body, int m_max = 8) {
  RevolutionGap g;
  g.lambda = std::numeric_limits<double>::infinity();
  for (int mode = 0; mode <= m_max; ++mode) {
    DiscreteOperator op = assemble_revolution_mode(body, mode);
    auto [d, e] = detail::negated_symmetric_bands(op);
    Eigen::VectorXd ev = detail::tridiagonal_eigenvalues(d, e);
    double lam = ev[mode == 0 ? 1 : 0];
    g.per_mode.push_back(lam);
    if (lam < g.lambda) {
      g.lambda = lam;
      g.mode = mode;
    }
  }
  return g;
}

inline double boundary_gap_revolution(const RevolutionBody3D& body, int m_max = 8) {
  return boundary_gap_revolution_modes(body, m_max).lambda;
}

}  // namespace reilly_lab
