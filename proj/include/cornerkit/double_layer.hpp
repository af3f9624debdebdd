#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "cornerkit/polygon.hpp"
#include "cornerkit/quadrature.hpp"

namespace cornerkit {

// 2D double layer kernel (y - x) . nu(y) / (2 pi |y - x|^2).  On a straight
// panel through both points the numerator vanishes identically.
inline double double_layer_kernel(const Vec2& x, const Vec2& y, const Vec2& normalAtY) {
  const Vec2 d = y - x;
  const double r2 = d.dot(d);
  if (r2 == 0.0) return 0.0;
  return d.dot(normalAtY) / (2.0 * 3.14159265358979323846 * r2);
}

struct PanelNode {
  Vec2 pos;
  Vec2 normal;        // outward unit normal of the carrying edge
  double weight = 0;  // quadrature weight (arc length measure)
  int edge = 0;       // polygon edge index
  double panel_length = 0;
};

struct Panel {
  Vec2 a, b;      // endpoints along the boundary
  Vec2 normal;
  int first = 0;  // index of the panel's first quadrature node
  int count = 0;  // nodes on this panel
};

// Nystrom panelization of a polygon boundary: each edge splits into panels
// graded geometrically (ratio 1/2, `depth` levels) toward both endpoints,
// with Gauss-Legendre nodes per panel.  No node ever sits on a vertex.
class BoundaryPanelization {
public:
  static BoundaryPanelization build(const Polygon& poly, int nodesPerPanel = 8, int depth = 10) {
    if (nodesPerPanel < 2 || nodesPerPanel > 32)
      throw InvalidArgument("bad_panel_order", "nodes per panel must be in [2, 32]");
    if (depth < 1 || depth > 30)
      throw InvalidArgument("bad_depth", "grading depth must be in [1, 30]");
    BoundaryPanelization p;
    p.poly_vertices_ = poly.vertices();
    std::vector<double> gx, gw;
    gauss_legendre(nodesPerPanel, gx, gw);

    const int ne = poly.size();
    double minEdge = std::numeric_limits<double>::infinity();
    for (int e = 0; e < ne; ++e)
      minEdge = std::min(minEdge,
                         (poly.vertices()[(e + 1) % ne] - poly.vertices()[e]).norm());
    const double maxPanel = 0.25 * minEdge;

    for (int e = 0; e < ne; ++e) {
      const Vec2 a = poly.vertices()[e];
      const Vec2 b = poly.vertices()[(e + 1) % ne];
      const Vec2 dir = b - a;
      const double len = dir.norm();
      const Vec2 normal{dir.y / len, -dir.x / len};

      // breakpoints in [0,1]: geometric toward both ends, middle capped
      std::vector<double> breaks;
      breaks.push_back(0.0);
      for (int j = depth; j >= 1; --j) breaks.push_back(0.5 * std::pow(0.5, j));
      breaks.push_back(0.5);
      for (int j = 1; j <= depth; ++j) breaks.push_back(1.0 - 0.5 * std::pow(0.5, j));
      breaks.push_back(1.0);
      std::sort(breaks.begin(), breaks.end());
      std::vector<double> refined;
      for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        refined.push_back(breaks[s]);
        const double gap = (breaks[s + 1] - breaks[s]) * len;
        const int pieces = static_cast<int>(std::ceil(gap / maxPanel));
        for (int k = 1; k < pieces; ++k)
          refined.push_back(breaks[s] + (breaks[s + 1] - breaks[s]) * k / pieces);
      }
      refined.push_back(1.0);
      breaks = std::move(refined);

      for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double t0 = breaks[s], t1 = breaks[s + 1];
        if (t1 <= t0) continue;
        const double plen = (t1 - t0) * len;
        Panel panel;
        panel.a = a + dir * t0;
        panel.b = a + dir * t1;
        panel.normal = normal;
        panel.first = static_cast<int>(p.nodes_.size());
        panel.count = nodesPerPanel;
        for (int q = 0; q < nodesPerPanel; ++q) {
          const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[q];
          PanelNode node;
          node.pos = a + dir * t;
          node.normal = normal;
          node.weight = 0.5 * (t1 - t0) * len * gw[q];
          node.edge = e;
          node.panel_length = plen;
          p.nodes_.push_back(node);
        }
        p.panels_.push_back(panel);
      }
    }
    return p;
  }

  const std::vector<PanelNode>& nodes() const { return nodes_; }
  const std::vector<Panel>& panels() const { return panels_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& polygon_vertices() const { return poly_vertices_; }

  double total_length() const {
    double s = 0;
    for (const auto& n : nodes_) s += n.weight;
    return s;
  }

private:
  std::vector<PanelNode> nodes_;
  std::vector<Panel> panels_;
  std::vector<Vec2> poly_vertices_;
};

struct DenseBoundaryOperator {
  Eigen::MatrixXd matrix;         // Nystrom matrix (weights folded in)
  bool identity_plus_kernel = false;
};

namespace detail_bie {

// Coefficients of the Lagrange basis on the reference nodes, ell_m(t) =
// sum_k coeff[m][k] t^k.
inline std::vector<std::vector<double>> lagrange_coefficients(const std::vector<double>& t) {
  const int q = static_cast<int>(t.size());
  std::vector<std::vector<double>> coeff(q);
  for (int m = 0; m < q; ++m) {
    std::vector<double> poly = {1.0};
    double denom = 1.0;
    for (int j = 0; j < q; ++j) {
      if (j == m) continue;
      denom *= t[m] - t[j];
      std::vector<double> next(poly.size() + 1, 0.0);
      for (size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k] * (-t[j]);
        next[k + 1] += poly[k];
      }
      poly = std::move(next);
    }
    for (double& c : poly) c /= denom;
    coeff[m] = std::move(poly);
  }
  return coeff;
}

// Closed-form moments I_k = int_0^1 t^k / (t^2 + 2 b t + g) dt for the
// straight-panel double layer; g - b^2 = d^2 > 0 is the squared scaled
// distance from the target to the panel line.
inline void panel_moments(double b, double d, int count, std::vector<double>& out) {
  out.assign(count, 0.0);
  std::vector<double> J(count, 0.0);
  J[0] = (std::atan2(1.0 + b, d) - std::atan2(b, d)) / d;
  if (count > 1) {
    const double num = (1.0 + b) * (1.0 + b) + d * d;
    const double den = b * b + d * d;
    J[1] = 0.5 * std::log(num / den);
  }
  for (int j = 2; j < count; ++j) {
    J[j] = (std::pow(1.0 + b, j - 1) - std::pow(b, j - 1)) / (j - 1) - d * d * J[j - 2];
  }
  // I_k = sum_j C(k,j) (-b)^(k-j) J_j
  for (int k = 0; k < count; ++k) {
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * (k - j + 1) / j;
      out[k] += binom * std::pow(-b, k - j) * J[j];
    }
  }
}

}  // namespace detail_bie

// Nystrom / product-integration matrix of K.  Well-separated entries use the
// plain Gauss rule; targets within two panel lengths use the closed-form
// moments of the kernel against the panel's Lagrange basis (exact for
// polynomial densities, which removes the self-similar corner error).
// Straight-panel self interactions vanish by orthogonality; coincident
// distinct nodes are an error.
inline DenseBoundaryOperator double_layer_matrix(const BoundaryPanelization& p) {
  const int n = p.size();
  const auto& nodes = p.nodes();
  DenseBoundaryOperator op;
  op.matrix.setZero(n, n);

  std::vector<double> gx, gw;
  std::vector<std::vector<double>> lag;
  int cachedCount = -1;

  for (const Panel& panel : p.panels()) {
    const int first = panel.first;
    const int count = panel.count;
    const Vec2 nrm = panel.normal;
    const double plen = (panel.b - panel.a).norm();
    if (count != cachedCount) {
      gauss_legendre(count, gx, gw);
      std::vector<double> tref(count);
      for (int m = 0; m < count; ++m) tref[m] = 0.5 + 0.5 * gx[m];
      lag = detail_bie::lagrange_coefficients(tref);
      cachedCount = count;
    }

    for (int i = 0; i < n; ++i) {
      const Vec2 xi = nodes[i].pos;
      const double c0 = (panel.a - xi).dot(nrm);
      if (std::abs(c0) < 1e-14 * std::max(1.0, plen)) {
        // target on the panel's line (including its own panel): kernel zero
        continue;
      }
      const double dist = point_segment_distance(xi, panel.a, panel.b);
      if (dist < 1e-14)
        throw ComputationError("coincident_nodes", "target node touches a foreign panel");
      if (dist > 2.0 * plen) {
        for (int m = 0; m < count; ++m) {
          const int j = first + m;
          op.matrix(i, j) = nodes[j].weight * double_layer_kernel(xi, nodes[j].pos, nrm);
        }
        continue;
      }
      // near target: closed-form product integration
      const Vec2 ax = panel.a - xi;
      const double beta = ax.dot(panel.b - panel.a) / (plen * plen);
      const double gamma = ax.dot(ax) / (plen * plen);
      const double d = std::sqrt(std::max(gamma - beta * beta, 0.0));
      std::vector<double> moments;
      detail_bie::panel_moments(beta, std::max(d, 1e-300), count, moments);
      const double scale = c0 / (2.0 * 3.14159265358979323846 * plen);
      for (int m = 0; m < count; ++m) {
        double v = 0;
        for (int k = 0; k < count; ++k) v += lag[m][k] * moments[k];
        op.matrix(i, first + m) = scale * v;
      }
    }
  }
  return op;
}

inline DenseBoundaryOperator half_identity_plus(const DenseBoundaryOperator& k) {
  DenseBoundaryOperator op;
  op.matrix = k.matrix;
  op.matrix.diagonal().array() += 0.5;
  op.identity_plus_kernel = true;
  return op;
}

// Hager-style 1-norm condition estimate using LU solves.
inline double condition_estimate_1norm(const Eigen::MatrixXd& a,
                                       const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const int n = static_cast<int>(a.rows());
  const double normA = a.cwiseAbs().colwise().sum().maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    Eigen::VectorXd y = lu.solve(x);
    est = y.lpNorm<1>();
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0 ? 1.0 : -1.0;
    Eigen::VectorXd z = lu.transpose().solve(xi);
    int jmax = 0;
    z.cwiseAbs().maxCoeff(&jmax);
    if (iter > 0 && std::abs(z[jmax]) <= z.dot(x)) break;
    x.setZero();
    x[jmax] = 1.0;
  }
  return est * normA;
}

// Boundary density + interior evaluator for the Dirichlet problem on a
// polygon via (1/2 I + K) f = g.
class DirichletSolution {
public:
  DirichletSolution(BoundaryPanelization panels, Eigen::VectorXd density, double cond)
      : panels_(std::move(panels)), density_(std::move(density)), cond_(cond) {}

  const BoundaryPanelization& panels() const { return panels_; }
  const Eigen::VectorXd& density() const { return density_; }
  double condition_estimate() const { return cond_; }

  struct Value {
    double value = 0.0;
    bool reliable = true;  // false within one panel length of the boundary
  };

  Value evaluate(const Vec2& z) const {
    Value out;
    double nearestDist = std::numeric_limits<double>::infinity();
    double nearestPanel = 0.0;
    double sum = 0.0;
    for (int j = 0; j < panels_.size(); ++j) {
      const PanelNode& node = panels_.nodes()[j];
      sum += node.weight * double_layer_kernel(z, node.pos, node.normal) * density_[j];
      const double d = (z - node.pos).norm();
      if (d < nearestDist) {
        nearestDist = d;
        nearestPanel = node.panel_length;
      }
    }
    out.value = sum;
    out.reliable = nearestDist >= nearestPanel;
    return out;
  }

private:
  BoundaryPanelization panels_;
  Eigen::VectorXd density_;
  double cond_;
};

inline DirichletSolution solve_dirichlet(const Polygon& poly,
                                         const std::function<double(Vec2)>& g,
                                         int nodesPerPanel = 8, int depth = 10,
                                         double conditionCap = 1e12) {
  BoundaryPanelization panels = BoundaryPanelization::build(poly, nodesPerPanel, depth);
  DenseBoundaryOperator system = half_identity_plus(double_layer_matrix(panels));

  Eigen::VectorXd rhs(panels.size());
  for (int i = 0; i < panels.size(); ++i) rhs[i] = g(panels.nodes()[i].pos);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.matrix);
  const double cond = condition_estimate_1norm(system.matrix, lu);
  if (!std::isfinite(cond) || cond > conditionCap)
    throw ComputationError("ill_conditioned",
                           "boundary system condition estimate exceeds the cap");
  Eigen::VectorXd density = lu.solve(rhs);
  const double residual = (system.matrix * density - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (residual > 1e-10)
    throw ComputationError("solver_failure", "dense boundary solve did not converge");
  return DirichletSolution(std::move(panels), std::move(density), cond);
}

// Residual of the Gauss identity (1/2 I + K) 1 = 1, the basic consistency
// check of kernel, normals, and quadrature.
inline double gauss_identity_residual(const BoundaryPanelization& panels) {
  DenseBoundaryOperator system = half_identity_plus(double_layer_matrix(panels));
  Eigen::VectorXd one = Eigen::VectorXd::Ones(panels.size());
  return ((system.matrix * one).array() - 1.0).abs().maxCoeff();
}

// Essential-norm proxy at each polygon corner: L2 operator norm of K
// restricted to densities supported within radius 2^-j of the corner,
// j = jmin..jmax.  A smooth boundary point sends the proxy to zero; a true
// corner stabilizes at a positive value.
struct CornerNormProxy {
  int vertex = 0;
  std::vector<double> radii;
  std::vector<double> norms;
};

inline std::vector<CornerNormProxy> corner_compactness_probe(const Polygon& poly,
                                                             int nodesPerPanel = 8,
                                                             int depth = 14, int jmin = 2,
                                                             int jmax = 8) {
  BoundaryPanelization panels = BoundaryPanelization::build(poly, nodesPerPanel, depth);
  DenseBoundaryOperator kOp = double_layer_matrix(panels);
  const int n = panels.size();

  // symmetrized L2 scaling: B = W^(1/2) K_kernel W^(1/2) = W^(1/2) M W^(-1/2)
  Eigen::MatrixXd b = kOp.matrix;
  for (int i = 0; i < n; ++i) {
    const double wi = std::sqrt(panels.nodes()[i].weight);
    for (int j = 0; j < n; ++j) {
      const double wj = std::sqrt(panels.nodes()[j].weight);
      b(i, j) = wi * kOp.matrix(i, j) / wj;
    }
  }

  std::vector<CornerNormProxy> out;
  for (size_t v = 0; v < poly.vertices().size(); ++v) {
    CornerNormProxy proxy;
    proxy.vertex = static_cast<int>(v);
    const Vec2 corner = poly.vertices()[v];
    for (int j = jmin; j <= jmax; ++j) {
      const double radius = std::pow(0.5, j);
      std::vector<int> support;
      for (int i = 0; i < n; ++i)
        if ((panels.nodes()[i].pos - corner).norm() <= radius) support.push_back(i);
      proxy.radii.push_back(radius);
      if (support.empty()) {
        proxy.norms.push_back(0.0);
        continue;
      }
      Eigen::MatrixXd sub(n, support.size());
      for (size_t c = 0; c < support.size(); ++c) sub.col(c) = b.col(support[c]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
      proxy.norms.push_back(svd.singularValues()[0]);
    }
    out.push_back(std::move(proxy));
  }
  return out;
}

}  // namespace cornerkit
