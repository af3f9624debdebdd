#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cornerkit/errors.hpp"

namespace cornerkit {

// Number of eigenvalues of the symmetric tridiagonal (diag, offdiag) that are
// strictly below x, by Sturm sequence count.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag,
                       double x) {
  const size_t n = diag.size();
  int count = 0;
  double q = diag[0] - x;
  if (q < 0) ++count;
  for (size_t i = 1; i < n; ++i) {
    double e = offdiag[i - 1];
    if (q == 0.0) q = std::numeric_limits<double>::epsilon() * (std::abs(e) + 1.0);
    q = diag[i] - x - e * e / q;
    if (q < 0) ++count;
  }
  return count;
}

// The k smallest eigenvalues by bisection.  Deterministic; accuracy limited
// only by double-precision bisection (64 halvings of the Gershgorin bound).
inline std::vector<double> tridiagonal_smallest_eigenvalues(const std::vector<double>& diag,
                                                            const std::vector<double>& offdiag,
                                                            int k) {
  const int n = static_cast<int>(diag.size());
  if (n == 0 || offdiag.size() + 1 != diag.size())
    throw InvalidArgument("bad_tridiagonal", "inconsistent tridiagonal sizes");
  if (k > n) k = n;
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::abs(offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  std::vector<double> eigs;
  eigs.reserve(k);
  for (int j = 1; j <= k; ++j) {
    double a = lo, b = hi;
    for (int iter = 0; iter < 80 && a < b; ++iter) {
      double mid = 0.5 * (a + b);
      if (sturm_count(diag, offdiag, mid) >= j)
        b = mid;
      else
        a = mid;
    }
    eigs.push_back(0.5 * (a + b));
    lo = eigs.back();  // eigenvalues come out in increasing order
  }
  return eigs;
}

}  // namespace cornerkit
