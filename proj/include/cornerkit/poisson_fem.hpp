#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <vector>

#include "cornerkit/graded_mesh.hpp"
#include "cornerkit/quadrature.hpp"

namespace cornerkit {

using ScalarField = std::function<double(Vec2)>;
using GradientField = std::function<Vec2(Vec2)>;

// P1 Galerkin solution of  Delta u = f,  u = g on the boundary (analyst sign
// convention: Delta = d^2/dx^2 + d^2/dy^2, so the weak form carries -f).
struct FemSolution {
  GradedMesh mesh;
  std::vector<double> values;
  double relative_residual = 0.0;

  Vec2 gradient_in(int tri) const {
    const Triangle& t = mesh.tris[tri];
    const Vec2 &a = mesh.nodes[t.v[0]], &b = mesh.nodes[t.v[1]], &c = mesh.nodes[t.v[2]];
    const double twoA = 2.0 * triangle_area(a, b, c);
    Vec2 g{0, 0};
    const double u0 = values[t.v[0]], u1 = values[t.v[1]], u2 = values[t.v[2]];
    g.x = (u0 * (b.y - c.y) + u1 * (c.y - a.y) + u2 * (a.y - b.y)) / twoA;
    g.y = (u0 * (c.x - b.x) + u1 * (a.x - c.x) + u2 * (b.x - a.x)) / twoA;
    return g;
  }

  // Barycentric interpolation; locates the containing triangle by scan.
  double evaluate(const Vec2& p) const {
    int tri = locate(p);
    if (tri < 0) throw InvalidArgument("outside_mesh", "evaluation point outside the mesh");
    const Triangle& t = mesh.tris[tri];
    const Vec2 &a = mesh.nodes[t.v[0]], &b = mesh.nodes[t.v[1]], &c = mesh.nodes[t.v[2]];
    const double area = triangle_area(a, b, c);
    const double l0 = triangle_area(p, b, c) / area;
    const double l1 = triangle_area(a, p, c) / area;
    const double l2 = 1.0 - l0 - l1;
    return l0 * values[t.v[0]] + l1 * values[t.v[1]] + l2 * values[t.v[2]];
  }

  int locate(const Vec2& p) const {
    const double tol = -1e-10;
    for (size_t i = 0; i < mesh.tris.size(); ++i) {
      const Triangle& t = mesh.tris[i];
      const Vec2 &a = mesh.nodes[t.v[0]], &b = mesh.nodes[t.v[1]], &c = mesh.nodes[t.v[2]];
      const double area = triangle_area(a, b, c);
      if (triangle_area(p, b, c) / area < tol) continue;
      if (triangle_area(a, p, c) / area < tol) continue;
      if (triangle_area(a, b, p) / area < tol) continue;
      return static_cast<int>(i);
    }
    return -1;
  }
};

inline FemSolution solve_poisson(const GradedMesh& mesh, const ScalarField& f,
                                 const ScalarField& g) {
  const int n = mesh.node_count();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.tris.size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  for (const auto& t : mesh.tris) {
    const Vec2 &a = mesh.nodes[t.v[0]], &b = mesh.nodes[t.v[1]], &c = mesh.nodes[t.v[2]];
    const double area = triangle_area(a, b, c);
    const double bcoef[3] = {b.y - c.y, c.y - a.y, a.y - b.y};
    const double ccoef[3] = {c.x - b.x, a.x - c.x, b.x - a.x};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double k = (bcoef[i] * bcoef[j] + ccoef[i] * ccoef[j]) / (4.0 * area);
        trip.emplace_back(t.v[i], t.v[j], k);
      }
    // load: -int f phi_i
    for (const auto& q : triangle_rule_deg5()) {
      const Vec2 p = a * q.l1 + b * q.l2 + c * q.l3;
      const double fv = f(p) * q.weight * area;
      rhs[t.v[0]] -= fv * q.l1;
      rhs[t.v[1]] -= fv * q.l2;
      rhs[t.v[2]] -= fv * q.l3;
    }
  }

  Eigen::SparseMatrix<double> stiff(n, n);
  stiff.setFromTriplets(trip.begin(), trip.end());

  // Dirichlet data by nodal interpolation, imposed symmetrically.
  Eigen::VectorXd dirichlet = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (mesh.on_boundary[i]) dirichlet[i] = g(mesh.nodes[i]);
  rhs -= stiff * dirichlet;

  std::vector<Eigen::Triplet<double>> reduced;
  reduced.reserve(trip.size());
  for (int k = 0; k < stiff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiff, k); it; ++it) {
      if (mesh.on_boundary[it.row()] || mesh.on_boundary[it.col()]) continue;
      reduced.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < n; ++i)
    if (mesh.on_boundary[i]) reduced.emplace_back(i, i, 1.0);
  Eigen::SparseMatrix<double> sys(n, n);
  sys.setFromTriplets(reduced.begin(), reduced.end());
  for (int i = 0; i < n; ++i)
    if (mesh.on_boundary[i]) rhs[i] = 0.0;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(sys);
  if (solver.info() != Eigen::Success)
    throw ComputationError("singular_system", "stiffness factorization failed");
  Eigen::VectorXd u = solver.solve(rhs);

  const double rhsNorm = rhs.norm();
  const double residual = rhsNorm > 0 ? (sys * u - rhs).norm() / rhsNorm : 0.0;
  if (residual > 1e-10)
    throw ComputationError("solver_residual", "linear solve did not reach the residual target");

  FemSolution sol;
  sol.mesh = mesh;
  sol.values.assign(n, 0.0);
  for (int i = 0; i < n; ++i) sol.values[i] = u[i] + dirichlet[i];
  sol.relative_residual = residual;
  return sol;
}

namespace detail_fem {

// Subdivision depth for quadrature on triangles near designated singular
// points: deepest when the triangle touches one.
inline int subdivision_level(const GradedMesh& mesh, const Triangle& t,
                             const std::vector<Vec2>& singular) {
  if (singular.empty()) return 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (const Vec2& s : singular)
    for (int e = 0; e < 3; ++e) dmin = std::min(dmin, (mesh.nodes[t.v[e]] - s).norm());
  const double hLocal = (mesh.nodes[t.v[0]] - mesh.nodes[t.v[1]]).norm();
  if (dmin < 0.5 * hLocal) return 4;
  if (dmin < 4.0 * hLocal) return 2;
  return 0;
}

}  // namespace detail_fem

// Energy (H1 semi-) norm of (u_h - u) given the exact gradient.
inline double energy_error(const FemSolution& sol, const GradientField& exactGrad,
                           const std::vector<Vec2>& singular = {}) {
  double total = 0;
  for (size_t i = 0; i < sol.mesh.tris.size(); ++i) {
    const Triangle& t = sol.mesh.tris[i];
    const Vec2 gh = sol.gradient_in(static_cast<int>(i));
    const Vec2 &a = sol.mesh.nodes[t.v[0]], &b = sol.mesh.nodes[t.v[1]], &c = sol.mesh.nodes[t.v[2]];
    const int levels = detail_fem::subdivision_level(sol.mesh, t, singular);
    total += integrate_triangle_subdivided(
        a, b, c,
        [&](Vec2 p) {
          const Vec2 d = exactGrad(p) - gh;
          return d.dot(d);
        },
        levels);
  }
  return std::sqrt(total);
}

inline double energy_norm(const FemSolution& sol) {
  double total = 0;
  for (size_t i = 0; i < sol.mesh.tris.size(); ++i) {
    const Triangle& t = sol.mesh.tris[i];
    const Vec2 gh = sol.gradient_in(static_cast<int>(i));
    const double area = triangle_area(sol.mesh.nodes[t.v[0]], sol.mesh.nodes[t.v[1]],
                                      sol.mesh.nodes[t.v[2]]);
    total += area * gh.dot(gh);
  }
  return std::sqrt(total);
}

// Weighted Sobolev seminorm data: weight exponent a and derivative order m,
// with the radial weight r^(-a-1+|alpha|) per derivative multi-index.
struct WeightedNormSpec {
  double a = 0.0;
  int m = 0;
};

// Nodal averaged-gradient recovery; second derivatives are the elementwise
// gradients of the recovered gradient.
struct RecoveredDerivatives {
  std::vector<Vec2> nodal_gradient;                 // per node
  std::vector<std::array<double, 3>> second;        // per triangle: uxx, uxy, uyy
};

inline RecoveredDerivatives recover_derivatives(const FemSolution& sol) {
  const GradedMesh& mesh = sol.mesh;
  RecoveredDerivatives rec;
  rec.nodal_gradient.assign(mesh.nodes.size(), Vec2{0, 0});
  std::vector<double> weight(mesh.nodes.size(), 0.0);
  for (size_t i = 0; i < mesh.tris.size(); ++i) {
    const Triangle& t = mesh.tris[i];
    const double area = std::abs(triangle_area(mesh.nodes[t.v[0]], mesh.nodes[t.v[1]],
                                               mesh.nodes[t.v[2]]));
    const Vec2 g = sol.gradient_in(static_cast<int>(i));
    for (int e = 0; e < 3; ++e) {
      rec.nodal_gradient[t.v[e]] = rec.nodal_gradient[t.v[e]] + g * area;
      weight[t.v[e]] += area;
    }
  }
  for (size_t i = 0; i < rec.nodal_gradient.size(); ++i)
    if (weight[i] > 0) rec.nodal_gradient[i] = rec.nodal_gradient[i] * (1.0 / weight[i]);

  rec.second.resize(mesh.tris.size());
  for (size_t i = 0; i < mesh.tris.size(); ++i) {
    const Triangle& t = mesh.tris[i];
    const Vec2 &a = mesh.nodes[t.v[0]], &b = mesh.nodes[t.v[1]], &c = mesh.nodes[t.v[2]];
    const double twoA = 2.0 * triangle_area(a, b, c);
    const double bc[3] = {b.y - c.y, c.y - a.y, a.y - b.y};
    const double cc[3] = {c.x - b.x, a.x - c.x, b.x - a.x};
    double uxx = 0, uxy = 0, uyx = 0, uyy = 0;
    for (int e = 0; e < 3; ++e) {
      const Vec2& gN = rec.nodal_gradient[t.v[e]];
      uxx += gN.x * bc[e] / twoA;
      uxy += gN.x * cc[e] / twoA;
      uyx += gN.y * bc[e] / twoA;
      uyy += gN.y * cc[e] / twoA;
    }
    rec.second[i] = {uxx, 0.5 * (uxy + uyx), uyy};
  }
  return rec;
}

// Weighted norm of a P1 solution with r = distance to the designated
// singular vertices.  First derivatives are elementwise constant; order-2
// terms use recovered derivatives and are approximate by construction.
inline double weighted_norm(const FemSolution& sol, const WeightedNormSpec& spec,
                            const std::vector<Vec2>& singular) {
  if (spec.m < 0 || spec.m > 2)
    throw InvalidArgument("bad_order", "weighted norms are computed for m <= 2");
  if (singular.empty())
    throw InvalidArgument("no_vertices", "need at least one singular vertex for the weight");

  RecoveredDerivatives rec;
  if (spec.m >= 2) rec = recover_derivatives(sol);

  auto dist = [&](Vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& s : singular) d = std::min(d, (p - s).norm());
    return d;
  };

  double total = 0;
  for (size_t i = 0; i < sol.mesh.tris.size(); ++i) {
    const Triangle& t = sol.mesh.tris[i];
    const Vec2 &a = sol.mesh.nodes[t.v[0]], &b = sol.mesh.nodes[t.v[1]], &c = sol.mesh.nodes[t.v[2]];
    const double u0 = sol.values[t.v[0]], u1 = sol.values[t.v[1]], u2 = sol.values[t.v[2]];
    const Vec2 gh = sol.gradient_in(static_cast<int>(i));
    const int levels = detail_fem::subdivision_level(sol.mesh, t, singular);
    const double area = triangle_area(a, b, c);

    total += integrate_triangle_subdivided(
        a, b, c,
        [&](Vec2 p) {
          const double l0 = triangle_area(p, b, c) / area;
          const double l1 = triangle_area(a, p, c) / area;
          const double l2 = 1.0 - l0 - l1;
          const double r = std::max(dist(p), 1e-300);
          double sum = 0;
          // |alpha| = 0
          const double uh = l0 * u0 + l1 * u1 + l2 * u2;
          sum += std::pow(r, 2.0 * (-spec.a - 1.0)) * uh * uh;
          if (spec.m >= 1) {
            const double w1 = std::pow(r, 2.0 * (-spec.a));
            sum += w1 * (gh.x * gh.x + gh.y * gh.y);
          }
          if (spec.m >= 2) {
            const auto& d2 = rec.second[i];
            const double w2 = std::pow(r, 2.0 * (-spec.a + 1.0));
            sum += w2 * (d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]);
          }
          return sum;
        },
        levels);
  }
  return std::sqrt(total);
}

struct ConvergenceRow {
  double h = 0.0;
  int dof = 0;
  double energy_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double rate = 0.0;  // least-squares slope of log(error) vs log(h)
};

// Least-squares slope of log(err) against log(h).
inline double fit_rate(const std::vector<ConvergenceRow>& rows) {
  const int n = static_cast<int>(rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(r.h), y = std::log(r.energy_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline ConvergenceStudy convergence_study(const Polygon& poly, const ScalarField& exact,
                                          const GradientField& exactGrad, const ScalarField& f,
                                          const std::vector<double>& kappa, double h0, int levels,
                                          const std::vector<Vec2>& singular = {}) {
  if (levels < 4)
    throw InvalidArgument("too_few_levels", "a rate estimate needs at least 4 mesh levels");
  ConvergenceStudy study;
  for (int l = 0; l < levels; ++l) {
    const double h = h0 / static_cast<double>(1 << l);
    GradedMesh mesh = generate_graded_mesh(poly, h, kappa);
    FemSolution sol = solve_poisson(mesh, f, exact);
    ConvergenceRow row;
    row.h = h;
    row.dof = mesh.node_count();
    row.energy_error = energy_error(sol, exactGrad, singular);
    study.rows.push_back(row);
  }
  study.rate = fit_rate(study.rows);
  return study;
}

// Local expansion fit near the origin corner of the unit square for
// Delta u = f, u = 0: least squares on the mesh nodes in an annulus against
// the resonant right-angle basis; returns the r^2 log(r) sin(2 theta)
// coefficient and friends.
struct CornerFit {
  double c_log = 0.0;    // r^2 log r sin(2 theta)
  double c_sin = 0.0;    // r^2 sin(2 theta)
  std::vector<double> all_coefficients;
  double residual = 0.0;  // relative fit residual
};

inline CornerFit fit_corner_expansion(const FemSolution& sol, double rMin = 0.03,
                                      double rMax = 0.25) {
  std::vector<int> sample;
  for (int i = 0; i < sol.mesh.node_count(); ++i) {
    const double r = sol.mesh.nodes[i].norm();
    if (r >= rMin && r <= rMax) sample.push_back(i);
  }
  const int rows = static_cast<int>(sample.size());
  const int cols = 13;
  if (rows < 4 * cols)
    throw ComputationError("fit_underdetermined", "not enough nodes in the fit annulus");

  Eigen::MatrixXd basis(rows, cols);
  Eigen::VectorXd target(rows);
  for (int s = 0; s < rows; ++s) {
    const Vec2 p = sol.mesh.nodes[sample[s]];
    const double r = p.norm();
    const double th = std::atan2(p.y, p.x);
    const double r2 = r * r, r4 = r2 * r2, r6 = r4 * r2, lg = std::log(r);
    basis(s, 0) = r2 * std::sin(2 * th);
    basis(s, 1) = r2 * lg * std::sin(2 * th);
    basis(s, 2) = r2;
    basis(s, 3) = r2 * std::cos(2 * th);
    basis(s, 4) = r2 * th * std::cos(2 * th);
    basis(s, 5) = r4 * std::sin(4 * th);
    basis(s, 6) = r4 * lg * std::sin(4 * th);
    basis(s, 7) = r4;
    basis(s, 8) = r4 * std::cos(4 * th);
    basis(s, 9) = r4 * th * std::cos(4 * th);
    basis(s, 10) = r6 * std::sin(6 * th);
    basis(s, 11) = r6;
    basis(s, 12) = r6 * std::cos(6 * th);
    target[s] = sol.values[sample[s]];
  }

  // Column scaling keeps the normal directions comparable.
  Eigen::VectorXd scale(cols);
  for (int c = 0; c < cols; ++c) {
    scale[c] = basis.col(c).norm();
    if (scale[c] < 1e-300) scale[c] = 1.0;
    basis.col(c) /= scale[c];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < cols)
    throw ComputationError("fit_ill_conditioned",
                           "corner fit basis is rank deficient on this annulus");
  Eigen::VectorXd coef = qr.solve(target);
  const double res = (basis * coef - target).norm() / std::max(target.norm(), 1e-300);
  for (int c = 0; c < cols; ++c) coef[c] /= scale[c];

  CornerFit fit;
  fit.c_sin = coef[0];
  fit.c_log = coef[1];
  fit.all_coefficients.assign(coef.data(), coef.data() + cols);
  fit.residual = res;
  return fit;
}

struct CornerProbe {
  CornerFit coarse;
  CornerFit fine;
  double relative_change = 0.0;  // of the log coefficient across refinement
};

inline CornerProbe corner_singularity_probe(const ScalarField& f, double h = 1.0 / 48.0) {
  const Polygon square = Polygon::unit_square();
  auto zero = [](Vec2) { return 0.0; };
  GradedMesh coarse = generate_graded_mesh(square, h, {});
  GradedMesh fine = generate_graded_mesh(square, h / 2.0, {});
  CornerProbe probe;
  probe.coarse = fit_corner_expansion(solve_poisson(coarse, f, zero));
  probe.fine = fit_corner_expansion(solve_poisson(fine, f, zero));
  const double denom = std::max(std::abs(probe.fine.c_log), 1e-300);
  probe.relative_change = std::abs(probe.fine.c_log - probe.coarse.c_log) / denom;
  return probe;
}

}  // namespace cornerkit
