#pragma once

#include <vector>

#include "cornerkit/polynomial.hpp"
#include "cornerkit/rational.hpp"

namespace cornerkit {

using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>;  // row major

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int sel = -1;
    for (int r = row; r < rows; ++r)
      if (m[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    Rat inv = m[row][col];
    for (int c = col; c < cols; ++c) m[row][c] /= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Basis of the null space of m (as column-coefficient vectors).
inline std::vector<RatVector> kernel_basis(RatMatrix m) {
  if (m.empty()) return {};
  const int cols = static_cast<int>(m[0].size());
  std::vector<int> pivots = rref(m);
  std::vector<bool> isPivot(cols, false);
  for (int p : pivots) isPivot[p] = true;
  std::vector<RatVector> basis;
  for (int freeCol = 0; freeCol < cols; ++freeCol) {
    if (isPivot[freeCol]) continue;
    RatVector v(cols, 0);
    v[freeCol] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      if (pivots[r] < cols) v[pivots[r]] = -m[r][freeCol];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves m x = b exactly; nullopt when inconsistent.  For underdetermined
// systems returns the solution with free variables set to zero.
inline std::optional<RatVector> solve_linear(RatMatrix m, RatVector b) {
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return RatVector{};
  const int cols = static_cast<int>(m[0].size());
  for (int r = 0; r < rows; ++r) m[r].push_back(b[r]);
  std::vector<int> pivots = rref(m);
  // A pivot in the appended column means the system is inconsistent.
  for (int p : pivots)
    if (p == cols) return std::nullopt;
  RatVector x(cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
  return x;
}

// Span dimension of a set of vectors.
inline int span_rank(std::vector<RatVector> vectors) {
  if (vectors.empty()) return 0;
  RatMatrix m(std::move(vectors));
  return static_cast<int>(rref(m).size());
}

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Determinant of a square polynomial matrix by fraction-free (Bareiss)
// elimination; every interior division is exact by the Sylvester identity.
inline Polynomial poly_det(PolyMatrix m, int nvars) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return Polynomial::constant(nvars, 1);
  bool negate = false;
  Polynomial prev = Polynomial::constant(nvars, 1);
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      int sel = -1;
      for (int r = k + 1; r < n; ++r)
        if (!m[r][k].is_zero()) {
          sel = r;
          break;
        }
      if (sel < 0) return Polynomial::zero(nvars);
      std::swap(m[k], m[sel]);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Polynomial num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = num.exact_divide(prev);
        if (!q) throw ComputationError("bareiss", "non-exact division in fraction-free elimination");
        m[i][j] = *q;
      }
      m[i][k] = Polynomial::zero(nvars);
    }
    prev = m[k][k];
  }
  Polynomial det = m[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace cornerkit
