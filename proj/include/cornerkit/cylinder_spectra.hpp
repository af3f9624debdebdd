#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cornerkit/spectrum_set.hpp"

namespace cornerkit {

enum class CrossKind { laplace, dirac };
enum class Provenance { analytic, discretized };
enum class SpinStructure { bounding, nonbounding };

// Discretized eigenvalues within this distance of 0 count as kernel elements;
// analytic data use exact zero.
inline constexpr double kDiracKernelTol = 1e-6;

// Eigenvalue data of the cross-section operator on one face at infinity.
struct CrossSectionData {
  CrossKind kind = CrossKind::laplace;
  std::vector<double> eigenvalues;  // sorted ascending
  Provenance provenance = Provenance::analytic;

  void validate() const {
    if (eigenvalues.empty())
      throw InvalidArgument("empty_cross_section", "cross-section needs at least one eigenvalue");
    if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end()))
      throw InvalidArgument("unsorted_eigenvalues", "cross-section eigenvalues must be sorted");
    if (kind == CrossKind::laplace && eigenvalues.front() < -1e-9)
      throw InvalidArgument("negative_laplace_mode", "Laplace cross-section must be nonnegative");
  }

  bool has_kernel() const {
    const double tol = provenance == Provenance::discretized ? kDiracKernelTol : 0.0;
    for (double e : eigenvalues)
      if (std::abs(e) <= tol) return true;
    return false;
  }

  double smallest_modulus() const {
    double c = std::numeric_limits<double>::infinity();
    for (double e : eigenvalues) c = std::min(c, std::abs(e));
    return c;
  }
};

struct Face {
  int dim = 0;
  CrossSectionData data;
};

// Faces-at-infinity description of a manifold with multi-cylindrical ends.
struct EndStructure {
  std::vector<Face> faces;
  bool has_zero_dim_face = false;

  void validate() const {
    if (faces.empty() && !has_zero_dim_face)
      throw InvalidArgument("no_faces", "the boundary at infinity must be nonempty");
    for (const auto& f : faces) {
      if (f.dim < 0) throw InvalidArgument("bad_face_dim", "face dimension must be >= 0");
      f.data.validate();
    }
  }

  int max_face_dim() const {
    int d = -1;
    for (const auto& f : faces) d = std::max(d, f.dim);
    return d;
  }
};

// Essential spectrum of the Laplace operator with the given ends:
// [mu_min, inf) where mu_min is the smallest cross-section eigenvalue; equal
// to [0, inf) whenever some cross-section is a connected closed manifold.
inline SpectrumSet essential_spectrum_laplace(const EndStructure& end) {
  end.validate();
  if (end.faces.empty())
    throw InvalidArgument("no_faces", "Laplace spectrum needs at least one hyperface");
  double muMin = std::numeric_limits<double>::infinity();
  for (const auto& f : end.faces) {
    if (f.data.kind != CrossKind::laplace)
      throw InvalidArgument("wrong_kind", "all faces must carry Laplace cross-section data");
    muMin = std::min(muMin, f.data.eigenvalues.front());
  }
  return SpectrumSet::half_line(muMin);
}

// Laplace - lambda is Fredholm exactly when lambda < mu_min, i.e. the
// transformed family mu + tau^2 - lambda is invertible for every real tau.
inline bool laplace_fredholm(const EndStructure& end, double lambda) {
  SpectrumSet ess = essential_spectrum_laplace(end);
  return !ess.contains(lambda);
}

// Essential spectrum of the Dirac operator: the real line when a face has
// dimension zero or carries a kernel mode; otherwise (-inf,-c] u [c,inf) with
// c the smallest eigenvalue modulus over the hyperfaces (self-adjoint
// cross-section operators, so 1/c is the largest inverse norm).
inline SpectrumSet essential_spectrum_dirac(const EndStructure& end) {
  end.validate();
  if (end.has_zero_dim_face) return SpectrumSet::real_line();
  if (end.faces.empty())
    throw InvalidArgument("no_faces", "Dirac spectrum needs at least one face");
  for (const auto& f : end.faces) {
    if (f.data.kind != CrossKind::dirac)
      throw InvalidArgument("wrong_kind", "all faces must carry Dirac cross-section data");
    if (f.data.has_kernel()) return SpectrumSet::real_line();
  }
  const int hyperDim = end.max_face_dim();
  double c = std::numeric_limits<double>::infinity();
  for (const auto& f : end.faces)
    if (f.dim == hyperDim) c = std::min(c, f.data.smallest_modulus());
  return SpectrumSet::gapped(c);
}

struct FredholmInvertible {
  bool fredholm = false;
  bool invertible = false;
};

inline FredholmInvertible dirac_fredholm_invertible(const EndStructure& end, bool hasL2Kernel) {
  end.validate();
  bool faceKernel = end.has_zero_dim_face;
  for (const auto& f : end.faces)
    if (f.data.has_kernel()) faceKernel = true;
  FredholmInvertible r;
  r.fredholm = !faceKernel;
  r.invertible = r.fredholm && !hasL2Kernel;
  return r;
}

namespace detail {

inline constexpr double kSpectraPi = 3.14159265358979323846264338327950288;

// Cell-centered Neumann 1D Laplacian on [0, L] with m cells.
inline Eigen::MatrixXd neumann_second_difference(double length, int m) {
  const double h = length / m;
  const double invH2 = 1.0 / (h * h);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    double d = 2.0 * invH2;
    if (i == 0 || i == m - 1) d = invH2;
    t(i, i) = d;
    if (i + 1 < m) {
      t(i, i + 1) = -invH2;
      t(i + 1, i) = -invH2;
    }
  }
  return t;
}

// Periodic 1D Laplacian on the unit circle (arc length 2*pi) with n points.
inline Eigen::MatrixXd periodic_second_difference(int n) {
  const double h = 2.0 * kSpectraPi / n;
  const double invH2 = 1.0 / (h * h);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = 2.0 * invH2;
    t(i, (i + 1) % n) = -invH2;
    t((i + 1) % n, i) = -invH2;
  }
  return t;
}

}  // namespace detail

struct SpectraSizeCap {
  int max_cross_modes = 4096;
  int max_t_grid = 8192;
};

// Eigenvalues of the finite-difference Laplacian on [0,L] x S^1, periodic in
// theta and Neumann at the t ends.  The discretized operator is a Kronecker
// sum, so its spectrum is exactly the sum set of the two 1D spectra.
inline std::vector<double> discretized_laplace_cylinder(int crossModes, double length, int tGrid,
                                                        const SpectraSizeCap& cap = {}) {
  if (crossModes < 16 || tGrid < 16)
    throw InvalidArgument("grid_too_small", "need at least 16 modes in each direction");
  if (length <= 0) throw InvalidArgument("bad_length", "cylinder length must be positive");
  if (crossModes > cap.max_cross_modes || tGrid > cap.max_t_grid)
    throw CapExceeded("discretized cylinder size exceeds the configured cap");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> thetaSolve(
      detail::periodic_second_difference(crossModes), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tSolve(
      detail::neumann_second_difference(length, tGrid), Eigen::EigenvaluesOnly);

  std::vector<double> eigs;
  eigs.reserve(static_cast<size_t>(crossModes) * tGrid);
  for (int a = 0; a < crossModes; ++a)
    for (int b = 0; b < tGrid; ++b) eigs.push_back(thetaSolve.eigenvalues()[a] + tSolve.eigenvalues()[b]);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

// Largest gap between consecutive values of `sorted` within [lo, hi],
// measuring from the window edges as well.
inline double max_spectral_gap(const std::vector<double>& sorted, double lo, double hi) {
  double prev = lo, gap = 0.0;
  for (double v : sorted) {
    if (v < lo) continue;
    if (v > hi) break;
    gap = std::max(gap, v - prev);
    prev = v;
  }
  gap = std::max(gap, hi - prev);
  return gap;
}

// Circle Dirac eigenvalues by Fourier modes.  The `nonbounding` tag follows
// the CLI convention: half-integer spectrum without kernel; `bounding` gives
// the integer spectrum containing 0.
inline std::vector<double> discretized_dirac_circle(SpinStructure spin, int modes) {
  if (modes < 16 || modes % 2 != 0)
    throw InvalidArgument("bad_modes", "need an even mode count >= 16");
  std::vector<double> eigs;
  for (int k = -modes / 2; k < modes / 2; ++k)
    eigs.push_back(spin == SpinStructure::nonbounding ? k + 0.5 : static_cast<double>(k));
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

struct DiracCylinderSpectrum {
  std::vector<double> eigenvalues;          // sorted ascending
  std::vector<double> end_mass_fraction;    // aligned: eigenvector mass in the
                                            // outer 10% of the cylinder (each end)
};

// Cylinder Dirac operator D = D_circle + c(dt) d/dt assembled per theta
// Fourier mode m as the 2x2 block [[m, d/dt], [-d/dt, -m]], discretized by
// skew-symmetric central differences in t with plain truncation at the ends.
inline DiracCylinderSpectrum discretized_dirac_cylinder(SpinStructure spin, int modes,
                                                        double length, int tGrid,
                                                        const SpectraSizeCap& cap = {}) {
  if (modes < 16 || modes % 2 != 0)
    throw InvalidArgument("bad_modes", "need an even mode count >= 16");
  if (tGrid < 16) throw InvalidArgument("grid_too_small", "need at least 16 t cells");
  if (length <= 0) throw InvalidArgument("bad_length", "cylinder length must be positive");
  if (modes > cap.max_cross_modes || tGrid > cap.max_t_grid)
    throw CapExceeded("discretized cylinder size exceeds the configured cap");

  const double h = length / tGrid;
  const double c = 1.0 / (2.0 * h);
  const int outer = std::max(1, tGrid / 10);

  std::vector<std::pair<double, double>> entries;  // (eigenvalue, end mass)
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * tGrid, 2 * tGrid);
  for (int k = -modes / 2; k < modes / 2; ++k) {
    const double m = spin == SpinStructure::nonbounding ? k + 0.5 : static_cast<double>(k);
    block.setZero();
    for (int i = 0; i < tGrid; ++i) {
      block(i, i) = m;
      block(tGrid + i, tGrid + i) = -m;
      if (i + 1 < tGrid) {
        block(i, tGrid + i + 1) = c;
        block(i + 1, tGrid + i) = -c;
        block(tGrid + i, i + 1) = -c;
        block(tGrid + i + 1, i) = c;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(block);
    for (int e = 0; e < 2 * tGrid; ++e) {
      const auto v = solve.eigenvectors().col(e);
      double total = v.squaredNorm(), ends = 0.0;
      for (int i = 0; i < outer; ++i) {
        ends += v[i] * v[i] + v[tGrid + i] * v[tGrid + i];
        const int j = tGrid - 1 - i;
        ends += v[j] * v[j] + v[tGrid + j] * v[tGrid + j];
      }
      entries.emplace_back(solve.eigenvalues()[e], ends / total);
    }
  }
  std::sort(entries.begin(), entries.end());
  DiracCylinderSpectrum out;
  out.eigenvalues.reserve(entries.size());
  out.end_mass_fraction.reserve(entries.size());
  for (const auto& [ev, mass] : entries) {
    out.eigenvalues.push_back(ev);
    out.end_mass_fraction.push_back(mass);
  }
  return out;
}

// Analytic circle cross-section data.
inline CrossSectionData circle_laplace_data(int modes) {
  CrossSectionData d;
  d.kind = CrossKind::laplace;
  d.provenance = Provenance::analytic;
  d.eigenvalues.push_back(0.0);
  for (int k = 1; k <= modes; ++k) {
    d.eigenvalues.push_back(static_cast<double>(k) * k);
    d.eigenvalues.push_back(static_cast<double>(k) * k);
  }
  return d;
}

inline CrossSectionData circle_dirac_data(SpinStructure spin, int modes) {
  CrossSectionData d;
  d.kind = CrossKind::dirac;
  d.provenance = Provenance::analytic;
  d.eigenvalues = discretized_dirac_circle(spin, modes);
  return d;
}

}  // namespace cornerkit
