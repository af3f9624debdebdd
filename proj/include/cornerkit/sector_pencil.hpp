#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cornerkit/errors.hpp"
#include "cornerkit/tridiagonal.hpp"

namespace cornerkit {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class EdgeBC { dirichlet, neumann };

// Plane sector of opening alpha with a boundary condition on each edge.
struct SectorModel {
  double alpha = kPi;
  EdgeBC bc0 = EdgeBC::dirichlet;  // edge theta = 0
  EdgeBC bc1 = EdgeBC::dirichlet;  // edge theta = alpha

  void validate() const {
    if (!(alpha > 0.0) || alpha > 2.0 * kPi + 1e-14)
      throw InvalidArgument("bad_angle", "sector angle must lie in (0, 2*pi]");
  }

  bool mixed() const { return bc0 != bc1; }
};

// Eigenvalues of the operator pencil lambda^2 + d^2/dtheta^2 on (0, alpha).
// The spectrum is symmetric about 0; only the nonnegative part is stored.
struct PencilReport {
  std::vector<double> positive;  // strictly increasing positive eigenvalues
  bool has_zero = false;         // lambda = 0 (Neumann-Neumann constant mode)
  bool mixed_bc = false;         // half-integer family; outside the stated
                                 // polygon scope, reported but flagged

  std::vector<double> full() const {
    std::vector<double> all;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) all.push_back(-*it);
    if (has_zero) all.push_back(0.0);
    for (double v : positive) all.push_back(v);
    return all;
  }
};

// Closed-form pencil eigenvalues: Dirichlet-Dirichlet k*pi/alpha (k >= 1),
// Neumann-Neumann k*pi/alpha (k >= 0), mixed (k - 1/2)*pi/alpha (k >= 1).
inline PencilReport sector_pencil_eigenvalues(const SectorModel& s, int count) {
  s.validate();
  if (count < 1) throw InvalidArgument("bad_count", "need count >= 1");
  PencilReport rep;
  rep.mixed_bc = s.mixed();
  const double base = kPi / s.alpha;
  if (s.mixed()) {
    for (int k = 1; k <= count; ++k) rep.positive.push_back((k - 0.5) * base);
  } else if (s.bc0 == EdgeBC::neumann) {
    rep.has_zero = true;
    for (int k = 1; k < count; ++k) rep.positive.push_back(k * base);
  } else {
    for (int k = 1; k <= count; ++k) rep.positive.push_back(k * base);
  }
  return rep;
}

// Finite-difference pencil oracle: second-order central differences for
// -d^2/dtheta^2 on a cell-centered grid, symmetric eigenproblem for
// mu = lambda^2 solved by Sturm bisection, square roots paired +/-.
inline PencilReport fd_pencil_eigenvalues(const SectorModel& s, int gridPoints, int count) {
  s.validate();
  if (gridPoints < 16) throw InvalidArgument("bad_grid", "need at least 16 grid points");
  if (count < 1) throw InvalidArgument("bad_count", "need count >= 1");
  const double h = s.alpha / gridPoints;
  const double invH2 = 1.0 / (h * h);
  std::vector<double> diag(gridPoints, 2.0 * invH2);
  std::vector<double> off(gridPoints - 1, -invH2);
  // Ghost reflection: Dirichlet u(-1) = -u(0) adds 1/h^2, Neumann removes it.
  diag.front() += (s.bc0 == EdgeBC::dirichlet ? invH2 : -invH2);
  diag.back() += (s.bc1 == EdgeBC::dirichlet ? invH2 : -invH2);

  std::vector<double> mu = tridiagonal_smallest_eigenvalues(diag, off, count);
  PencilReport rep;
  rep.mixed_bc = s.mixed();
  for (double m : mu) {
    double lambda = std::sqrt(std::max(m, 0.0));
    // The smallest genuine positive eigenvalue is pi/alpha >= 1/2; anything
    // far below that is the (roundoff-perturbed) zero mode.
    if (lambda < 1e-3)
      rep.has_zero = true;
    else
      rep.positive.push_back(lambda);
  }
  return rep;
}

// Fredholm/invertible weight window (-eta, eta) of the sector.  eta is the
// smallest positive pencil eigenvalue; a Neumann-Neumann sector has a zero
// eigenvalue and the window collapses, reported rather than thrown.
struct WeightWindow {
  double eta = 0.0;
  bool empty = false;
  bool mixed_bc = false;
};

inline WeightWindow weight_window(const SectorModel& s) {
  PencilReport rep = sector_pencil_eigenvalues(s, 1);
  WeightWindow w;
  w.mixed_bc = rep.mixed_bc;
  if (s.bc0 == EdgeBC::neumann && s.bc1 == EdgeBC::neumann) {
    w.eta = 0.0;
    w.empty = true;
  } else {
    w.eta = rep.positive.front();
  }
  return w;
}

// Dirichlet polygon window: minimum of the per-vertex windows, i.e.
// eta = pi / max(angle).
inline WeightWindow polygon_weight_window(const std::vector<double>& angles) {
  if (angles.empty()) throw InvalidArgument("bad_polygon", "need at least one vertex angle");
  WeightWindow w;
  w.eta = std::numeric_limits<double>::infinity();
  for (double a : angles) {
    SectorModel s{a, EdgeBC::dirichlet, EdgeBC::dirichlet};
    w.eta = std::min(w.eta, weight_window(s).eta);
  }
  return w;
}

// Energy-norm convergence rate prediction for degree-p elements on a
// quasi-uniform mesh: min(p, eta).
inline double predicted_h1_rate(const std::vector<double>& angles, int degree) {
  if (degree < 1) throw InvalidArgument("bad_degree", "element degree must be >= 1");
  return std::min(static_cast<double>(degree), polygon_weight_window(angles).eta);
}

}  // namespace cornerkit
