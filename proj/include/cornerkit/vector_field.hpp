#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cornerkit/lie_algebra.hpp"
#include "cornerkit/polynomial.hpp"
#include "cornerkit/rational_linalg.hpp"

namespace cornerkit {

// Model corner chart [0,inf)^k x R^(n-k).  The first `boundary` coordinates
// are the boundary-defining ones.
struct CornerChart {
  int dim = 0;
  int boundary = 0;
  std::vector<std::string> names;

  CornerChart(int n, int k) : dim(n), boundary(k) {
    if (n <= 0) throw InvalidArgument("bad_chart", "chart dimension must be positive");
    if (k < 0 || k > n) throw InvalidArgument("bad_chart", "boundary count must satisfy 0 <= k <= n");
    for (int i = 0; i < n; ++i)
      names.push_back(i < k ? "x" + std::to_string(i + 1) : "y" + std::to_string(i + 1));
  }

  CornerChart(int n, int k, std::vector<std::string> customNames)
      : CornerChart(n, k) {
    if (static_cast<int>(customNames.size()) != n)
      throw InvalidArgument("bad_chart", "need one name per coordinate");
    for (size_t i = 0; i < customNames.size(); ++i)
      for (size_t j = i + 1; j < customNames.size(); ++j)
        if (customNames[i] == customNames[j])
          throw InvalidArgument("bad_chart", "coordinate names must be distinct");
    names = std::move(customNames);
  }

  bool operator==(const CornerChart& other) const {
    return dim == other.dim && boundary == other.boundary && names == other.names;
  }
};

// Vector field sum_l coeff_l(x,y) d/dcoord_l with polynomial coefficients.
class VectorField {
public:
  VectorField(CornerChart chart, std::vector<Polynomial> coefficients)
      : chart_(std::move(chart)), coeff_(std::move(coefficients)) {
    if (static_cast<int>(coeff_.size()) != chart_.dim)
      throw InvalidArgument("bad_field", "need one coefficient per coordinate");
  }

  static VectorField zero(const CornerChart& chart) {
    return VectorField(chart, std::vector<Polynomial>(chart.dim, Polynomial::zero(chart.dim)));
  }

  const CornerChart& chart() const { return chart_; }
  const Polynomial& coefficient(int l) const { return coeff_[l]; }
  const std::vector<Polynomial>& coefficients() const { return coeff_; }

  bool is_zero() const {
    for (const auto& c : coeff_)
      if (!c.is_zero()) return false;
    return true;
  }

  // Tangency to all faces: the x_j coefficient is divisible by x_j.
  bool tangent_to_faces() const {
    for (int j = 0; j < chart_.boundary; ++j)
      if (!coeff_[j].is_zero() && !coeff_[j].divisible_by_var(j)) return false;
    return true;
  }

  VectorField operator+(const VectorField& other) const {
    require_same_chart(other);
    std::vector<Polynomial> c;
    for (int l = 0; l < chart_.dim; ++l) c.push_back(coeff_[l] + other.coeff_[l]);
    return VectorField(chart_, std::move(c));
  }

  VectorField operator-() const {
    std::vector<Polynomial> c;
    for (const auto& p : coeff_) c.push_back(-p);
    return VectorField(chart_, std::move(c));
  }

  friend VectorField operator*(const Polynomial& f, const VectorField& X) {
    std::vector<Polynomial> c;
    for (const auto& p : X.coeff_) c.push_back(f * p);
    return VectorField(X.chart_, std::move(c));
  }

  bool operator==(const VectorField& other) const {
    return chart_ == other.chart_ && coeff_ == other.coeff_;
  }

  // Exact Lie bracket: [X,Y]_l = sum_k X_k d_k(Y_l) - Y_k d_k(X_l).
  VectorField bracket(const VectorField& other) const {
    require_same_chart(other);
    const int n = chart_.dim;
    std::vector<Polynomial> c(n, Polynomial::zero(n));
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k < n; ++k) {
        c[l] += coeff_[k] * other.coeff_[l].derivative(k);
        c[l] -= other.coeff_[k] * coeff_[l].derivative(k);
      }
    }
    return VectorField(chart_, std::move(c));
  }

  // Directional derivative of a scalar polynomial.
  Polynomial apply(const Polynomial& f) const {
    Polynomial r = Polynomial::zero(chart_.dim);
    for (int k = 0; k < chart_.dim; ++k) r += coeff_[k] * f.derivative(k);
    return r;
  }

  RatVector evaluate(const std::vector<Rat>& point) const {
    RatVector v;
    for (const auto& c : coeff_) v.push_back(c.evaluate(point));
    return v;
  }

  std::string str() const {
    std::string out;
    bool first = true;
    for (int l = 0; l < chart_.dim; ++l) {
      if (coeff_[l].is_zero()) continue;
      if (!first) out += " + ";
      first = false;
      out += "(" + coeff_[l].str(chart_.names) + ") d/d" + chart_.names[l];
    }
    return first ? "0" : out;
  }

private:
  void require_same_chart(const VectorField& other) const {
    if (!(chart_ == other.chart_))
      throw InvalidArgument("chart_mismatch", "vector fields live on different charts");
  }

  CornerChart chart_;
  std::vector<Polynomial> coeff_;
};

struct ClosureWitness {
  int i = 0;
  int j = 0;
  VectorField bracket;  // the bracket with no polynomial expansion
};

struct ClosureReport {
  bool closed = false;
  // (i,j) -> expansion coefficients of [X_i, X_j] in the generator basis.
  std::map<std::pair<int, int>, std::vector<Polynomial>> table;
  std::optional<ClosureWitness> witness;
};

// A candidate local basis X_1..X_n of a Lie manifold structure on the chart.
class VectorFieldModule {
public:
  VectorFieldModule(CornerChart chart, std::vector<VectorField> generators)
      : chart_(std::move(chart)), gens_(std::move(generators)) {
    if (static_cast<int>(gens_.size()) != chart_.dim)
      throw InvalidArgument("bad_module", "need exactly dim generators");
    for (const auto& g : gens_) {
      if (!(g.chart() == chart_))
        throw InvalidArgument("chart_mismatch", "generator on a different chart");
      if (!g.tangent_to_faces())
        throw InvalidArgument("not_tangent", "generator not tangent to all faces: " + g.str());
    }
  }

  const CornerChart& chart() const { return chart_; }
  const std::vector<VectorField>& generators() const { return gens_; }

  // Coefficient matrix A[l][m] = (X_m)_l as polynomials.
  PolyMatrix coefficient_matrix() const {
    const int n = chart_.dim;
    PolyMatrix a(n, std::vector<Polynomial>(n, Polynomial::zero(n)));
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) a[l][m] = gens_[m].coefficient(l);
    return a;
  }

  // Generic-point linear independence, decided symbolically: det A != 0 as a
  // polynomial, never by sampling.
  bool generically_independent() const { return !det().is_zero(); }

  // Expands a field in the generator basis over the fraction field, then
  // verifies the solution is polynomial by exact division (Cramer quotients).
  // nullopt when some coefficient is a genuine rational function.
  std::optional<std::vector<Polynomial>> expand(const VectorField& field) const {
    const int n = chart_.dim;
    const Polynomial d = det();
    if (d.is_zero())
      throw ComputationError("dependent_generators",
                             "generators are linearly dependent at a generic point");
    PolyMatrix a = coefficient_matrix();
    std::vector<Polynomial> coeffs;
    for (int m = 0; m < n; ++m) {
      PolyMatrix am = a;
      for (int l = 0; l < n; ++l) am[l][m] = field.coefficient(l);
      Polynomial dm = poly_det(std::move(am), n);
      auto q = dm.exact_divide(d);
      if (!q) return std::nullopt;
      coeffs.push_back(std::move(*q));
    }
    return coeffs;
  }

  ClosureReport check_closure() const {
    ClosureReport rep;
    rep.closed = true;
    const int n = chart_.dim;
    for (int i = 0; i < n && rep.closed; ++i) {
      for (int j = i + 1; j < n; ++j) {
        VectorField br = gens_[i].bracket(gens_[j]);
        auto coeffs = expand(br);
        if (!coeffs) {
          rep.closed = false;
          rep.witness = ClosureWitness{i, j, br};
          rep.table.clear();
          break;
        }
        rep.table[{i, j}] = std::move(*coeffs);
      }
    }
    return rep;
  }

  // Isotropy Lie algebra at a chart point: kernel of the anchor with the
  // bracket induced from the module, expressed in an exact kernel basis.
  // Also returns the kernel basis (coefficient vectors in generator space).
  struct Isotropy {
    LieAlgebraStructure algebra;
    std::vector<RatVector> basis;
  };

  Isotropy isotropy_algebra(const std::vector<Rat>& point) const {
    const int n = chart_.dim;
    if (static_cast<int>(point.size()) != n)
      throw InvalidArgument("bad_point", "point has wrong dimension");
    ClosureReport closure = check_closure();
    if (!closure.closed)
      throw ComputationError("not_closed", "module is not closed under the bracket");

    // Anchor at p: columns are generator values.
    RatMatrix anchor(n, RatVector(n, 0));
    for (int m = 0; m < n; ++m) {
      RatVector v = gens_[m].evaluate(point);
      for (int l = 0; l < n; ++l) anchor[l][m] = v[l];
    }
    std::vector<RatVector> basis = kernel_basis(anchor);
    const int d = static_cast<int>(basis.size());
    LieAlgebraStructure algebra(d);

    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        // [sum_i v_i X_i, sum_j w_j X_j](p) expanded in generators, evaluated
        // at p, then solved in the kernel basis.
        RatVector u(n, 0);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            Rat f = basis[a][i] * basis[b][j];
            if (f == 0 || i == j) continue;
            const auto& coeffs = (i < j) ? closure.table.at({i, j}) : closure.table.at({j, i});
            Rat sign = (i < j) ? f : -f;
            for (int m = 0; m < n; ++m) u[m] += sign * coeffs[m].evaluate(point);
          }
        }
        // Express u in the kernel basis.
        RatMatrix bm(n, RatVector(d, 0));
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < d; ++c) bm[r][c] = basis[c][r];
        auto sol = solve_linear(std::move(bm), u);
        if (!sol)
          throw ComputationError("anchor_leak",
                                 "bracket of isotropy elements left the kernel of the anchor");
        algebra.set_bracket(a, b, *sol);
      }
    }
    algebra.validate();
    return Isotropy{std::move(algebra), std::move(basis)};
  }

private:
  Polynomial det() const { return poly_det(coefficient_matrix(), chart_.dim); }

  CornerChart chart_;
  std::vector<VectorField> gens_;
};

// Ready-made bases from the standard calculi on a chart with one boundary
// variable: b (x dx, dy...), zero (x dx, x dy...), scattering (x^2 dx, x dy...),
// and edge (x dx, dy_2..dy_k tangential to a base, x dz...).
namespace model_bases {

inline VectorFieldModule b_calculus(int dim) {
  CornerChart chart(dim, 1);
  std::vector<VectorField> gens;
  for (int m = 0; m < dim; ++m) {
    std::vector<Polynomial> c(dim, Polynomial::zero(dim));
    if (m == 0)
      c[0] = Polynomial::variable(dim, 0);  // x d/dx
    else
      c[m] = Polynomial::constant(dim, 1);
    gens.emplace_back(chart, std::move(c));
  }
  return VectorFieldModule(chart, std::move(gens));
}

inline VectorFieldModule zero_calculus(int dim) {
  CornerChart chart(dim, 1);
  std::vector<VectorField> gens;
  for (int m = 0; m < dim; ++m) {
    std::vector<Polynomial> c(dim, Polynomial::zero(dim));
    c[m] = Polynomial::variable(dim, 0);  // x d/dcoord
    gens.emplace_back(chart, std::move(c));
  }
  return VectorFieldModule(chart, std::move(gens));
}

inline VectorFieldModule scattering_calculus(int dim) {
  CornerChart chart(dim, 1);
  std::vector<VectorField> gens;
  for (int m = 0; m < dim; ++m) {
    std::vector<Polynomial> c(dim, Polynomial::zero(dim));
    if (m == 0)
      c[0] = Polynomial::variable(dim, 0) * Polynomial::variable(dim, 0);  // x^2 d/dx
    else
      c[m] = Polynomial::variable(dim, 0);
    gens.emplace_back(chart, std::move(c));
  }
  return VectorFieldModule(chart, std::move(gens));
}

// Edge fields on (x, y_2, .., y_base+1, z...): x d/dx, d/dy (base directions),
// x d/dz (fiber directions).
inline VectorFieldModule edge_calculus(int dim, int baseDims) {
  if (baseDims < 0 || baseDims > dim - 1)
    throw InvalidArgument("bad_module", "edge base dimensions out of range");
  CornerChart chart(dim, 1);
  std::vector<VectorField> gens;
  for (int m = 0; m < dim; ++m) {
    std::vector<Polynomial> c(dim, Polynomial::zero(dim));
    if (m == 0)
      c[0] = Polynomial::variable(dim, 0);
    else if (m <= baseDims)
      c[m] = Polynomial::constant(dim, 1);
    else
      c[m] = Polynomial::variable(dim, 0);
    gens.emplace_back(chart, std::move(c));
  }
  return VectorFieldModule(chart, std::move(gens));
}

}  // namespace model_bases

}  // namespace cornerkit
