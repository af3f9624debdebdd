#pragma once

#include <vector>

#include "cornerkit/rational_linalg.hpp"

namespace cornerkit {

struct SolvabilityReport {
  bool solvable = false;
  bool nilpotent = false;
};

// Finite-dimensional Lie algebra over the rationals given by structure
// constants [e_i, e_j] = sum_k c[i][j][k] e_k.
class LieAlgebraStructure {
public:
  explicit LieAlgebraStructure(int dim)
      : dim_(dim), c_(dim, std::vector<RatVector>(dim, RatVector(dim, 0))) {}

  int dim() const { return dim_; }

  const Rat& structure_constant(int i, int j, int k) const { return c_[i][j][k]; }

  // Sets [e_i, e_j] and the antisymmetric partner in one go.
  void set_bracket(int i, int j, const RatVector& coeffs) {
    c_[i][j] = coeffs;
    RatVector neg(dim_);
    for (int k = 0; k < dim_; ++k) neg[k] = -coeffs[k];
    c_[j][i] = neg;
  }

  // Raw access for constructing deliberately invalid tables in tests.
  void set_bracket_raw(int i, int j, const RatVector& coeffs) { c_[i][j] = coeffs; }

  RatVector bracket(const RatVector& x, const RatVector& y) const {
    RatVector z(dim_, 0);
    for (int i = 0; i < dim_; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < dim_; ++j) {
        if (y[j] == 0) continue;
        Rat f = x[i] * y[j];
        for (int k = 0; k < dim_; ++k) z[k] += f * c_[i][j][k];
      }
    }
    return z;
  }

  bool antisymmetric() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          if (c_[i][j][k] != -c_[j][i][k]) return false;
    return true;
  }

  bool jacobi_holds() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          RatVector sum(dim_, 0);
          accumulate_double_bracket(i, j, k, sum);
          accumulate_double_bracket(j, k, i, sum);
          accumulate_double_bracket(k, i, j, sum);
          for (const Rat& v : sum)
            if (v != 0) return false;
        }
    return true;
  }

  void validate() const {
    if (!antisymmetric())
      throw InvalidArgument("not_antisymmetric", "structure constants are not antisymmetric");
    if (!jacobi_holds())
      throw InvalidArgument("jacobi_violation", "structure constants violate the Jacobi identity");
  }

  bool is_abelian() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          if (c_[i][j][k] != 0) return false;
    return true;
  }

  // Derived series for solvability, lower central series for nilpotency,
  // both over exact rationals.
  SolvabilityReport solvability() const {
    validate();
    SolvabilityReport rep;
    rep.solvable = series_terminates(/*lower_central=*/false);
    rep.nilpotent = series_terminates(/*lower_central=*/true);
    return rep;
  }

private:
  void accumulate_double_bracket(int a, int b, int c, RatVector& sum) const {
    // [e_a, [e_b, e_c]]
    for (int m = 0; m < dim_; ++m) {
      const Rat& inner = c_[b][c][m];
      if (inner == 0) continue;
      for (int k = 0; k < dim_; ++k) sum[k] += inner * c_[a][m][k];
    }
  }

  // Full basis of the algebra as coefficient vectors.
  std::vector<RatVector> full_basis() const {
    std::vector<RatVector> basis(dim_, RatVector(dim_, 0));
    for (int i = 0; i < dim_; ++i) basis[i][i] = 1;
    return basis;
  }

  static std::vector<RatVector> reduce_span(std::vector<RatVector> gens) {
    if (gens.empty()) return {};
    RatMatrix m(gens.begin(), gens.end());
    std::vector<int> pivots = rref(m);
    std::vector<RatVector> out;
    for (size_t r = 0; r < pivots.size(); ++r) out.push_back(m[r]);
    return out;
  }

  bool series_terminates(bool lower_central) const {
    std::vector<RatVector> current = full_basis();
    const std::vector<RatVector> whole = full_basis();
    for (int step = 0; step <= dim_ + 1; ++step) {
      if (current.empty()) return true;
      const auto& left = lower_central ? whole : current;
      std::vector<RatVector> next;
      for (const auto& x : left)
        for (const auto& y : current) {
          RatVector z = bracket(x, y);
          bool nonzero = false;
          for (const Rat& v : z)
            if (v != 0) nonzero = true;
          if (nonzero) next.push_back(std::move(z));
        }
      next = reduce_span(std::move(next));
      if (next.size() == current.size() && !next.empty()) return false;  // stabilized nonzero
      current = std::move(next);
    }
    return current.empty();
  }

  int dim_;
  std::vector<std::vector<RatVector>> c_;  // c_[i][j] = coefficients of [e_i, e_j]
};

}  // namespace cornerkit
