#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cornerkit/b_operator.hpp"
#include "cornerkit/cylinder_spectra.hpp"
#include "cornerkit/double_layer.hpp"
#include "cornerkit/poisson_fem.hpp"
#include "cornerkit/sector_pencil.hpp"
#include "cornerkit/vector_field.hpp"

namespace cornerkit {

// One verification criterion of the desk-scale suite.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

struct AcceptanceConfig {
  std::uint64_t seed = 20240801;
  double cap = 1.0;  // 1.0 = full sizes; 0.5 = documented reduced sizes
};

// Documented tolerance/size rows.  Halving the size cap loosens exactly the
// tolerances listed here; anything below 0.5 is not a supported regime.
struct SuiteSizes {
  // criterion 1
  int pencil_grid = 65536;
  double pencil_oracle_tol = 1e-6;
  // criteria 2, 3
  int random_pairs = 100;
  int vanish_reps = 60;
  // criterion 5
  int laplace_modes = 64;
  int laplace_mt_per_length = 16;
  // criteria 7, 8
  int dirac_modes = 64;
  int dirac_tgrid = 320;
  double dirac_gap_tol = 0.499;
  double dirac_symmetry_tol = 1e-9;
  int square_modes = 32;
  int square_tgrid = 160;
  double square_tol = 1e-8;
  // criterion 9
  double fem_h0 = 0.125;
  int fem_levels = 5;
  double fem_rate_tol = 0.05;
  // criterion 10
  double probe_h = 1.0 / 24.0;
  double probe_stability = 0.20;
  double probe_control_tol = 1e-4;
  // criterion 11
  int bie_nodes_per_panel = 8;
  int bie_depth = 10;
  double bie_gauss_tol = 1e-6;
  double bie_harmonic_tol = 1e-5;
  double bie_cross_tol = 1e-3;

  static SuiteSizes from_cap(double cap) {
    if (cap >= 1.0) return SuiteSizes{};
    if (cap < 0.5)
      throw InvalidArgument("bad_cap", "size caps below 0.5 are not a documented regime");
    SuiteSizes s;
    s.pencil_grid = 32768;
    s.pencil_oracle_tol = 4e-6;
    s.random_pairs = 50;
    s.vanish_reps = 30;
    s.laplace_modes = 32;
    s.laplace_mt_per_length = 8;
    s.dirac_modes = 32;
    s.dirac_tgrid = 160;
    s.dirac_symmetry_tol = 1e-8;
    s.square_modes = 16;
    s.square_tgrid = 80;
    s.square_tol = 1e-7;
    s.fem_levels = 4;
    s.fem_rate_tol = 0.08;
    s.probe_h = 1.0 / 16.0;
    s.probe_stability = 0.30;
    s.probe_control_tol = 2e-4;
    s.bie_nodes_per_panel = 6;
    s.bie_depth = 8;
    s.bie_gauss_tol = 1e-5;
    s.bie_harmonic_tol = 1e-4;
    s.bie_cross_tol = 3e-3;
    return s;
  }
};

namespace acceptance_detail {

inline XTrigPoly random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coefDist(-3, 3);
  std::uniform_int_distribution<int> degDist(0, 2);
  std::uniform_int_distribution<int> modeDist(0, 1);
  std::uniform_int_distribution<int> kindDist(0, 1);
  XTrigPoly out;
  for (int t = 0; t < 2; ++t) {
    const int c = coefDist(rng);
    if (c == 0) continue;
    TrigPoly tp = kindDist(rng) ? TrigPoly::cosine(modeDist(rng), c)
                                : TrigPoly::sine(modeDist(rng), c);
    if (tp.is_zero()) tp = TrigPoly::constant(c);
    XTrigPoly term;
    term.set(degDist(rng), tp);
    out += term;
  }
  return out;
}

inline BOperator random_boperator(std::mt19937_64& rng, int maxOrder) {
  std::uniform_int_distribution<int> orderDist(0, maxOrder);
  BOperator p;
  for (int t = 0; t < 3; ++t) {
    int i = orderDist(rng);
    int j = orderDist(rng);
    if (i + j > maxOrder) j = std::max(0, maxOrder - i);
    p.add(i, j, random_coefficient(rng));
  }
  return p;
}

inline double lshape_theta(Vec2 p) {
  double th = std::atan2(p.y, p.x);
  if (th < 0) th += 2.0 * kPi;
  return th;
}

inline double lshape_exact(Vec2 p) {
  const double r = p.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * lshape_theta(p) / 3.0);
}

inline Vec2 lshape_grad(Vec2 p) {
  const double r = p.norm();
  if (r == 0.0) return {0, 0};
  const double th = lshape_theta(p);
  const double lam = 2.0 / 3.0;
  const double f = lam * std::pow(r, lam - 1.0);
  const Vec2 er{std::cos(th), std::sin(th)};
  const Vec2 et{-std::sin(th), std::cos(th)};
  return er * (f * std::sin(lam * th)) + et * (f * std::cos(lam * th));
}

template <typename Fn>
CriterionResult timed(int id, const std::string& name, Fn&& body) {
  CriterionResult result;
  result.id = id;
  result.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::ostringstream details;
    result.pass = body(details);
    result.details = details.str();
  } catch (const std::exception& e) {
    result.pass = false;
    result.details = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace acceptance_detail

// 1. Weight window eta = pi/alpha, analytic to 1e-10 and against the
//    finite-difference pencil oracle.
inline CriterionResult criterion_weight_window(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(1, "weight window eta = pi/alpha", [&](std::ostringstream& out) {
    bool ok = true;
    for (double alpha : {0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi}) {
      const SectorModel s{alpha, EdgeBC::dirichlet, EdgeBC::dirichlet};
      const double eta = weight_window(s).eta;
      const double analyticErr = std::abs(eta - kPi / alpha);
      const auto fd = fd_pencil_eigenvalues(s, sz.pencil_grid, 1);
      const double oracleErr = std::abs(fd.positive.front() - eta);
      ok = ok && analyticErr < 1e-10 && oracleErr < sz.pencil_oracle_tol;
      out << "alpha=" << alpha << " eta=" << eta << " d_analytic=" << analyticErr
          << " d_oracle=" << oracleErr << "; ";
    }
    return ok;
  });
}

// 2. Indicial multiplicativity on random operator pairs, exact equality.
inline CriterionResult criterion_indicial_multiplicativity(const SuiteSizes& sz,
                                                           std::uint64_t seed) {
  using namespace acceptance_detail;
  return timed(2, "indicial family is multiplicative", [&](std::ostringstream& out) {
    std::mt19937_64 rng(seed ^ 0x1d1cUL);
    int checked = 0;
    for (int rep = 0; rep < sz.random_pairs; ++rep) {
      BOperator p = random_boperator(rng, 3);
      BOperator q = random_boperator(rng, 3);
      if (!(p.compose(q).indicial_family() ==
            p.indicial_family().compose(q.indicial_family()))) {
        out << "counterexample at pair " << rep;
        return false;
      }
      ++checked;
    }
    out << checked << " random pairs, exact symbolic equality";
    return true;
  });
}

// 3. Vanishing law: the indicial family vanishes exactly when P = x Q.
inline CriterionResult criterion_vanishing_law(const SuiteSizes& sz, std::uint64_t seed) {
  using namespace acceptance_detail;
  return timed(3, "indicial family vanishes iff P = xQ", [&](std::ostringstream& out) {
    std::mt19937_64 rng(seed ^ 0x7a9bUL);
    int factored = 0, generic = 0;
    for (int rep = 0; rep < sz.vanish_reps; ++rep) {
      BOperator q = random_boperator(rng, 3);
      BOperator p = BOperator::multiplication(XTrigPoly::x_power(1)).compose(q);
      if (!p.indicial_family().is_zero() || !p.divisible_by_x()) {
        out << "xQ with nonvanishing family at rep " << rep;
        return false;
      }
      if (!q.is_zero() && !(p.quotient_by_x() == q)) {
        out << "quotient mismatch at rep " << rep;
        return false;
      }
      ++factored;
      if (!q.indicial_family().is_zero()) {
        if (q.divisible_by_x()) {
          out << "divisible operator with nonzero family at rep " << rep;
          return false;
        }
        ++generic;
      }
    }
    out << factored << " factored cases, " << generic << " generic nonvanishing cases";
    return true;
  });
}

// 4. Lie closure of the model calculi and their isotropy algebras.
inline CriterionResult criterion_lie_closure(const SuiteSizes&) {
  using namespace acceptance_detail;
  return timed(4, "closure and isotropy of the model calculi", [&](std::ostringstream& out) {
    if (!model_bases::b_calculus(2).check_closure().closed) return false;
    if (!model_bases::zero_calculus(2).check_closure().closed) return false;
    if (!model_bases::scattering_calculus(2).check_closure().closed) return false;
    if (!model_bases::edge_calculus(3, 1).check_closure().closed) return false;

    // the non-example: d/dx, x d/dy needs the coefficient 1/x
    CornerChart open(2, 0);
    VectorField dx(open, {Polynomial::constant(2, 1), Polynomial::zero(2)});
    VectorField xdy(open, {Polynomial::zero(2), Polynomial::variable(2, 0)});
    auto bad = VectorFieldModule(open, {dx, xdy}).check_closure();
    if (bad.closed || !bad.witness.has_value()) return false;

    const std::vector<Rat> p = {Rat(0), Rat(1)};
    auto b = model_bases::b_calculus(2).isotropy_algebra(p);
    auto zero = model_bases::zero_calculus(2).isotropy_algebra(p);
    auto sc = model_bases::scattering_calculus(2).isotropy_algebra(p);
    const auto zeroRep = zero.algebra.solvability();
    const auto scRep = sc.algebra.solvability();
    const bool ok = b.algebra.dim() == 1 && b.algebra.is_abelian() && zero.algebra.dim() == 2 &&
                    zeroRep.solvable && !zeroRep.nilpotent &&
                    zero.algebra.structure_constant(0, 1, 1) == 1 && sc.algebra.dim() == 2 &&
                    sc.algebra.is_abelian() && scRep.solvable && scRep.nilpotent;
    out << "b: dim 1 abelian; zero: dim 2 solvable non-nilpotent [T,X]=X; "
        << "sc: dim 2 abelian; witness bracket " << bad.witness->bracket.str();
    return ok;
  });
}

// 5. Laplace essential spectrum [0, inf) and the truncated-cylinder filling
//    oracle.  The max-gap statistic is reported in both the eigenvalue scale
//    (monotone decrease) and the frequency scale sqrt(mu), whose resolution
//    pi/L carries the 0.1 threshold at L = 40.
inline CriterionResult criterion_laplace_spectrum(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(5, "Laplace essential spectrum and filling", [&](std::ostringstream& out) {
    EndStructure cyl;
    cyl.faces.push_back({1, circle_laplace_data(8)});
    if (!(essential_spectrum_laplace(cyl) == SpectrumSet::half_line(0.0))) return false;
    EndStructure multi;
    multi.faces.push_back({1, circle_laplace_data(8)});
    multi.faces.push_back({1, circle_laplace_data(12)});
    if (!(essential_spectrum_laplace(multi) == SpectrumSet::half_line(0.0))) return false;

    double prevGap = std::numeric_limits<double>::infinity();
    double freqGap40 = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double length : {10.0, 20.0, 40.0}) {
      const int mt = static_cast<int>(sz.laplace_mt_per_length * length);
      auto eigs = discretized_laplace_cylinder(sz.laplace_modes, length, mt);
      if (eigs.front() < -1e-9) {
        out << "negative eigenvalue " << eigs.front() << " at L=" << length;
        return false;
      }
      const double gapMu = max_spectral_gap(eigs, 0.0, 4.0);
      std::vector<double> freq;
      for (double e : eigs)
        if (e >= 0.0) freq.push_back(std::sqrt(e));
      const double gapFreq = max_spectral_gap(freq, 0.0, 2.0);
      ok = ok && gapMu < prevGap;
      prevGap = gapMu;
      if (length == 40.0) freqGap40 = gapFreq;
      out << "L=" << length << " gap_mu=" << gapMu << " gap_freq=" << gapFreq << "; ";
    }
    ok = ok && freqGap40 < 0.1;
    return ok;
  });
}

// 6. Fredholm predicate: Laplace - lambda is Fredholm iff lambda < 0.
inline CriterionResult criterion_fredholm_predicate(const SuiteSizes&) {
  using namespace acceptance_detail;
  return timed(6, "Fredholm exactly below the spectrum", [&](std::ostringstream& out) {
    EndStructure cyl;
    cyl.faces.push_back({1, circle_laplace_data(8)});
    bool ok = laplace_fredholm(cyl, -10.0) && laplace_fredholm(cyl, -0.001) &&
              !laplace_fredholm(cyl, 0.0) && !laplace_fredholm(cyl, 0.5) &&
              !laplace_fredholm(cyl, 7.0);
    out << "lambda in {-10, -0.001} Fredholm; {0, 0.5, 7} not";
    return ok;
  });
}

// 7. Dirac gap, symmetry, and the full-line degenerations.
inline CriterionResult criterion_dirac_gap(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(7, "Dirac essential spectrum gap", [&](std::ostringstream& out) {
    EndStructure nb;
    nb.faces.push_back({1, circle_dirac_data(SpinStructure::nonbounding, sz.dirac_modes)});
    if (!(essential_spectrum_dirac(nb) == SpectrumSet::gapped(0.5))) {
      out << "nonbounding gap is not 1/2";
      return false;
    }
    EndStructure bounding;
    bounding.faces.push_back({1, circle_dirac_data(SpinStructure::bounding, sz.dirac_modes)});
    if (!(essential_spectrum_dirac(bounding) == SpectrumSet::real_line())) {
      out << "bounding structure did not give the real line";
      return false;
    }
    EndStructure zeroFace = nb;
    zeroFace.has_zero_dim_face = true;
    if (!(essential_spectrum_dirac(zeroFace) == SpectrumSet::real_line())) {
      out << "zero-dimensional face did not give the real line";
      return false;
    }

    const auto spec =
        discretized_dirac_cylinder(SpinStructure::nonbounding, sz.dirac_modes, 20.0, sz.dirac_tgrid);
    double minInterior = std::numeric_limits<double>::infinity();
    double minAll = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      minAll = std::min(minAll, std::abs(spec.eigenvalues[i]));
      if (spec.end_mass_fraction[i] < 0.01)
        minInterior = std::min(minInterior, std::abs(spec.eigenvalues[i]));
    }
    double sym = 0.0;
    const auto& e = spec.eigenvalues;
    for (size_t i = 0; i < e.size(); ++i)
      sym = std::max(sym, std::abs(e[i] + e[e.size() - 1 - i]));
    out << "min |lambda| over all modes=" << minAll << " (interior-supported: " << minInterior
        << "), symmetry defect=" << sym;
    return minInterior >= sz.dirac_gap_tol && sym < sz.dirac_symmetry_tol;
  });
}

// 8. Square law: block Dirac squared against the directly assembled sum
//    operator, mode by mode.
inline CriterionResult criterion_dirac_square_law(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(8, "Dirac square law", [&](std::ostringstream& out) {
    const int tg = sz.square_tgrid;
    const double length = 10.0;
    const double h = length / tg;
    const double c = 1.0 / (2.0 * h);
    Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(tg, tg);
    for (int i = 0; i + 1 < tg; ++i) {
      dc(i, i + 1) = c;
      dc(i + 1, i) = -c;
    }
    double worst = 0.0;
    for (int k = 0; k < sz.square_modes / 2; ++k) {
      const double m = k + 0.5;
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * tg, 2 * tg);
      block.topLeftCorner(tg, tg) = m * Eigen::MatrixXd::Identity(tg, tg);
      block.bottomRightCorner(tg, tg) = -m * Eigen::MatrixXd::Identity(tg, tg);
      block.topRightCorner(tg, tg) = dc;
      block.bottomLeftCorner(tg, tg) = -dc;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> blockSolve(block, Eigen::EigenvaluesOnly);

      Eigen::MatrixXd sum = m * m * Eigen::MatrixXd::Identity(tg, tg) - dc * dc;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sumSolve(sum, Eigen::EigenvaluesOnly);

      std::vector<double> squared(2 * tg);
      for (int i = 0; i < 2 * tg; ++i)
        squared[i] = blockSolve.eigenvalues()[i] * blockSolve.eigenvalues()[i];
      std::sort(squared.begin(), squared.end());
      for (int i = 0; i < tg; ++i) {
        worst = std::max(worst, std::abs(squared[2 * i] - sumSolve.eigenvalues()[i]));
        worst = std::max(worst, std::abs(squared[2 * i + 1] - sumSolve.eigenvalues()[i]));
      }
    }
    out << "max defect " << worst << " over " << sz.square_modes / 2 << " modes";
    return worst < sz.square_tol;
  });
}

// 9. FEM rate dichotomy on the L-shape.
inline CriterionResult criterion_fem_rates(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(9, "FEM rate dichotomy on the L-shape", [&](std::ostringstream& out) {
    auto quasi = convergence_study(Polygon::l_shape(), lshape_exact, lshape_grad,
                                   [](Vec2) { return 0.0; }, {}, sz.fem_h0, sz.fem_levels,
                                   {{0, 0}});
    auto graded = convergence_study(Polygon::l_shape(), lshape_exact, lshape_grad,
                                    [](Vec2) { return 0.0; }, {0.3, 1, 1, 1, 1, 1}, sz.fem_h0,
                                    sz.fem_levels, {{0, 0}});
    out << "quasi-uniform rate " << quasi.rate << ", graded rate " << graded.rate;
    return std::abs(quasi.rate - 2.0 / 3.0) < sz.fem_rate_tol &&
           std::abs(graded.rate - 1.0) < sz.fem_rate_tol;
  });
}

// 10. Corner non-smoothness: the log coefficient is present and stable for
//     f(0,0) != 0, absent when f vanishes quadratically.
inline CriterionResult criterion_corner_probe(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(10, "corner log singularity", [&](std::ostringstream& out) {
    auto forced = corner_singularity_probe([](Vec2) { return 1.0; }, sz.probe_h);
    auto control =
        corner_singularity_probe([](Vec2 p) { return p.x * p.x + p.y * p.y; }, sz.probe_h);
    out << "c_log=" << forced.fine.c_log << " change=" << forced.relative_change
        << " control=" << control.fine.c_log;
    return std::abs(forced.fine.c_log) > 1e-3 && forced.relative_change < sz.probe_stability &&
           std::abs(control.fine.c_log) < sz.probe_control_tol;
  });
}

// 11. Layer potential: Gauss identity, harmonic reproduction, and the
//     cross-check against the volume solver.
inline CriterionResult criterion_layer_potential(const SuiteSizes& sz) {
  using namespace acceptance_detail;
  return timed(11, "double layer potential", [&](std::ostringstream& out) {
    const double gaussSquare = gauss_identity_residual(
        BoundaryPanelization::build(Polygon::unit_square(), sz.bie_nodes_per_panel, sz.bie_depth));
    const double gaussL = gauss_identity_residual(
        BoundaryPanelization::build(Polygon::l_shape(), sz.bie_nodes_per_panel, sz.bie_depth));

    auto g3 = [](Vec2 p) { return p.x * p.x * p.x - 3.0 * p.x * p.y * p.y; };
    auto sol = solve_dirichlet(Polygon::unit_square(), g3, sz.bie_nodes_per_panel, sz.bie_depth);
    double harmonicErr = 0.0;
    for (Vec2 z : {Vec2{0.5, 0.5}, Vec2{0.3, 0.62}, Vec2{0.81, 0.2}, Vec2{0.15, 0.15}})
      harmonicErr = std::max(harmonicErr, std::abs(sol.evaluate(z).value - g3(z)));

    auto trace = [](Vec2 p) { return std::exp(p.x) * std::cos(p.y); };
    auto bie = solve_dirichlet(Polygon::l_shape(), trace, sz.bie_nodes_per_panel, sz.bie_depth);
    auto mesh = generate_graded_mesh(Polygon::l_shape(), 1.0 / 64, {});
    auto fem = solve_poisson(mesh, [](Vec2) { return 0.0; }, trace);
    double crossErr = 0.0;
    for (Vec2 z : {Vec2{-0.5, 0.5}, Vec2{0.5, 0.5}, Vec2{-0.5, -0.5}, Vec2{0.4, 0.7}})
      crossErr = std::max(crossErr, std::abs(bie.evaluate(z).value - fem.evaluate(z)));

    out << "gauss(square)=" << gaussSquare << " gauss(L)=" << gaussL
        << " harmonic=" << harmonicErr << " cross=" << crossErr;
    return gaussSquare < sz.bie_gauss_tol && gaussL < sz.bie_gauss_tol &&
           harmonicErr < sz.bie_harmonic_tol && crossErr < sz.bie_cross_tol;
  });
}

// Runs criteria 1-11; criterion 12 (the aggregate: everything passes, the
// seeded randomized criteria are reproducible, total runtime bounded) is
// appended from the collected results.
inline std::vector<CriterionResult> run_acceptance_suite(const AcceptanceConfig& config = {}) {
  const SuiteSizes sz = SuiteSizes::from_cap(config.cap);
  std::vector<CriterionResult> results;
  results.push_back(criterion_weight_window(sz));
  results.push_back(criterion_indicial_multiplicativity(sz, config.seed));
  results.push_back(criterion_vanishing_law(sz, config.seed));
  results.push_back(criterion_lie_closure(sz));
  results.push_back(criterion_laplace_spectrum(sz));
  results.push_back(criterion_fredholm_predicate(sz));
  results.push_back(criterion_dirac_gap(sz));
  results.push_back(criterion_dirac_square_law(sz));
  results.push_back(criterion_fem_rates(sz));
  results.push_back(criterion_corner_probe(sz));
  results.push_back(criterion_layer_potential(sz));

  CriterionResult agg;
  agg.id = 12;
  agg.name = "full suite";
  bool allPass = true;
  double total = 0.0;
  for (const auto& r : results) {
    allPass = allPass && r.pass;
    total += r.seconds;
  }
  // determinism of the seeded criteria: identical outcomes and details on a
  // second run with the same seed
  const auto start = std::chrono::steady_clock::now();
  auto rerun2 = criterion_indicial_multiplicativity(sz, config.seed);
  auto rerun3 = criterion_vanishing_law(sz, config.seed);
  const bool deterministic = rerun2.pass == results[1].pass && rerun2.details == results[1].details &&
                             rerun3.pass == results[2].pass && rerun3.details == results[2].details;
  agg.seconds = total + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  agg.pass = allPass && deterministic && agg.seconds < 1200.0;
  std::ostringstream out;
  out << (allPass ? "criteria 1-11 pass" : "criteria 1-11 have failures")
      << (deterministic ? ", seeded reruns identical" : ", seeded reruns differ") << ", total "
      << agg.seconds << " s";
  agg.details = out.str();
  results.push_back(agg);
  return results;
}

}  // namespace cornerkit
