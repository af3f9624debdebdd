#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cornerkit/cylinder_spectra.hpp"

using namespace cornerkit;

namespace {

EndStructure cylinder_end(CrossSectionData data) {
  EndStructure end;
  end.faces.push_back({1, std::move(data)});
  return end;
}

}  // namespace

TEST_CASE("spectrum set normalization") {
  SECTION("canonical form is unique and order independent") {
    SpectrumSet a({{ {0.0, 2.0}, {1.0, 3.0} }}, {5.0, 2.5, 5.0});
    SpectrumSet b({{ {1.0, 3.0}, {0.0, 2.0} }}, {2.5, 5.0});
    CHECK(a == b);
    REQUIRE(a.intervals().size() == 1);
    CHECK(a.intervals()[0].lo == 0.0);
    CHECK(a.intervals()[0].hi == 3.0);
    REQUIRE(a.points().size() == 1);
    CHECK(a.points()[0] == 5.0);
  }

  SECTION("normalization is idempotent") {
    SpectrumSet s({{ {-1.0, 0.0} }}, {0.0, 7.0});
    SpectrumSet t = s;
    t.normalize();
    CHECK(s == t);
  }

  SECTION("degenerate intervals become points") {
    SpectrumSet s({{ {3.0, 3.0} }}, {});
    CHECK(s.intervals().empty());
    REQUIRE(s.points().size() == 1);
    CHECK(s.points()[0] == 3.0);
  }

  SECTION("contains and printing") {
    SpectrumSet s = SpectrumSet::gapped(0.5);
    CHECK(s.contains(0.5));
    CHECK(s.contains(-3.0));
    CHECK_FALSE(s.contains(0.0));
    CHECK(s.str() == "(-inf, -0.5] u [0.5, inf)");
  }
}

TEST_CASE("essential spectrum of the Laplace operator") {
  SECTION("cylinder over the circle fills the half line") {
    auto end = cylinder_end(circle_laplace_data(8));
    CHECK(essential_spectrum_laplace(end) == SpectrumSet::half_line(0.0));
  }

  SECTION("two-face multi-cylinder, both connected") {
    EndStructure end;
    end.faces.push_back({1, circle_laplace_data(8)});
    end.faces.push_back({1, circle_laplace_data(12)});
    CHECK(essential_spectrum_laplace(end) == SpectrumSet::half_line(0.0));
  }

  SECTION("shifted cross-section data shifts the spectrum") {
    CrossSectionData d;
    d.kind = CrossKind::laplace;
    d.eigenvalues = {3.0, 4.0, 7.0};
    CHECK(essential_spectrum_laplace(cylinder_end(d)) == SpectrumSet::half_line(3.0));
  }

  SECTION("empty face list is an error") {
    EndStructure end;
    CHECK_THROWS_AS(essential_spectrum_laplace(end), InvalidArgument);
  }
}

TEST_CASE("Fredholm predicate matches the essential spectrum") {
  auto end = cylinder_end(circle_laplace_data(8));
  CHECK(laplace_fredholm(end, -1.0));
  CHECK(laplace_fredholm(end, -0.001));
  CHECK_FALSE(laplace_fredholm(end, 0.0));
  CHECK_FALSE(laplace_fredholm(end, 0.5));
  CHECK_FALSE(laplace_fredholm(end, 7.0));

  CrossSectionData shifted;
  shifted.kind = CrossKind::laplace;
  shifted.eigenvalues = {3.0, 5.0};
  CHECK(laplace_fredholm(cylinder_end(shifted), 2.999));

  // duality with the spectrum on a sweep
  auto ess = essential_spectrum_laplace(end);
  for (double lambda = -2.0; lambda < 6.0; lambda += 0.37) {
    CHECK(laplace_fredholm(end, lambda) == !ess.contains(lambda));
  }
}

TEST_CASE("essential spectrum of the Dirac operator") {
  SECTION("nonbounding circle: gap of 1/2") {
    auto end = cylinder_end(circle_dirac_data(SpinStructure::nonbounding, 64));
    CHECK(essential_spectrum_dirac(end) == SpectrumSet::gapped(0.5));
  }

  SECTION("bounding circle contains a kernel mode: full line") {
    auto end = cylinder_end(circle_dirac_data(SpinStructure::bounding, 64));
    CHECK(essential_spectrum_dirac(end) == SpectrumSet::real_line());
  }

  SECTION("zero-dimensional face forces the full line") {
    auto end = cylinder_end(circle_dirac_data(SpinStructure::nonbounding, 64));
    end.has_zero_dim_face = true;
    CHECK(essential_spectrum_dirac(end) == SpectrumSet::real_line());
  }

  SECTION("gap is the minimum over hyperfaces") {
    EndStructure end;
    CrossSectionData wide;
    wide.kind = CrossKind::dirac;
    wide.eigenvalues = {-2.5, -1.5, 1.5, 2.5};
    CrossSectionData narrow;
    narrow.kind = CrossKind::dirac;
    narrow.eigenvalues = {-0.75, 0.75};
    end.faces.push_back({1, wide});
    end.faces.push_back({1, narrow});
    CHECK(essential_spectrum_dirac(end) == SpectrumSet::gapped(0.75));
  }

  SECTION("discretized kernel tolerance") {
    CrossSectionData d;
    d.kind = CrossKind::dirac;
    d.provenance = Provenance::discretized;
    d.eigenvalues = {-1.0, 1e-7, 1.0};
    CHECK(essential_spectrum_dirac(cylinder_end(d)) == SpectrumSet::real_line());
    d.provenance = Provenance::analytic;
    CHECK_FALSE(essential_spectrum_dirac(cylinder_end(d)) == SpectrumSet::real_line());
  }
}

TEST_CASE("Dirac Fredholm and invertibility") {
  auto gapped = cylinder_end(circle_dirac_data(SpinStructure::nonbounding, 32));
  auto r1 = dirac_fredholm_invertible(gapped, false);
  CHECK(r1.fredholm);
  CHECK(r1.invertible);
  auto r2 = dirac_fredholm_invertible(gapped, true);
  CHECK(r2.fredholm);
  CHECK_FALSE(r2.invertible);
  auto kernelFace = cylinder_end(circle_dirac_data(SpinStructure::bounding, 32));
  auto r3 = dirac_fredholm_invertible(kernelFace, false);
  CHECK_FALSE(r3.fredholm);
  CHECK_FALSE(r3.invertible);
}

TEST_CASE("discretized Laplace cylinder", "[oracle]") {
  SECTION("smallest eigenvalue is the Neumann constant mode") {
    auto eigs = discretized_laplace_cylinder(64, 10.0, 256);
    REQUIRE_FALSE(eigs.empty());
    CHECK_THAT(eigs.front(), Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK(std::is_sorted(eigs.begin(), eigs.end()));
  }

  SECTION("window count grows with the cylinder length") {
    auto count = [](const std::vector<double>& eigs) {
      int c = 0;
      for (double e : eigs)
        if (e >= 0.0 && e <= 4.0) ++c;
      return c;
    };
    auto e10 = discretized_laplace_cylinder(32, 10.0, 160);
    auto e20 = discretized_laplace_cylinder(32, 20.0, 320);
    CHECK(count(e20) > count(e10));
  }

  SECTION("max gap in [0,4] decreases with length") {
    double prev = std::numeric_limits<double>::infinity();
    for (double length : {10.0, 20.0, 40.0}) {
      auto eigs = discretized_laplace_cylinder(64, length, static_cast<int>(16 * length));
      double gap = max_spectral_gap(eigs, 0.0, 4.0);
      CHECK(gap < prev);
      prev = gap;
    }
  }

  SECTION("size validation and caps") {
    CHECK_THROWS_AS(discretized_laplace_cylinder(8, 10.0, 64), InvalidArgument);
    CHECK_THROWS_AS(discretized_laplace_cylinder(64, -1.0, 64), InvalidArgument);
    SpectraSizeCap cap;
    cap.max_t_grid = 100;
    CHECK_THROWS_AS(discretized_laplace_cylinder(64, 10.0, 256, cap), CapExceeded);
  }
}

TEST_CASE("discretized circle Dirac mode lists", "[oracle]") {
  auto nb = discretized_dirac_circle(SpinStructure::nonbounding, 64);
  CHECK(nb.size() == 64);
  CHECK_THAT(nb[32], Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(nb[31], Catch::Matchers::WithinAbs(-0.5, 1e-15));
  for (double e : nb) CHECK(std::abs(e) >= 0.5);

  auto b = discretized_dirac_circle(SpinStructure::bounding, 64);
  CHECK(std::count(b.begin(), b.end(), 0.0) == 1);

  CHECK_THROWS_AS(discretized_dirac_circle(SpinStructure::bounding, 15), InvalidArgument);
}

TEST_CASE("discretized cylinder Dirac", "[oracle][slow]") {
  const int modes = 32;
  const double length = 10.0;
  const int tGrid = 160;
  auto spec = discretized_dirac_cylinder(SpinStructure::nonbounding, modes, length, tGrid);

  SECTION("spectrum is symmetric about zero") {
    const auto& e = spec.eigenvalues;
    REQUIRE_FALSE(e.empty());
    double scale = std::max(std::abs(e.front()), std::abs(e.back()));
    for (size_t i = 0; i < e.size(); ++i) {
      CHECK_THAT(e[i], Catch::Matchers::WithinAbs(-e[e.size() - 1 - i], 1e-9 * scale));
    }
  }

  SECTION("interior-supported modes respect the gap") {
    for (size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      if (spec.end_mass_fraction[i] < 0.01) {
        CHECK(std::abs(spec.eigenvalues[i]) >= 0.5 - 1e-3);
      }
    }
  }

  SECTION("square law against the independently assembled sum operator") {
    // For each theta mode m the block Dirac squares to (m^2 - Dc^2) I_2; the
    // sum operator is assembled directly and both spectra are compared.
    const double h = length / tGrid;
    const double c = 1.0 / (2.0 * h);
    for (double m : {0.5, 1.5, 2.5}) {
      Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(tGrid, tGrid);
      for (int i = 0; i + 1 < tGrid; ++i) {
        dc(i, i + 1) = c;
        dc(i + 1, i) = -c;
      }
      Eigen::MatrixXd sum = m * m * Eigen::MatrixXd::Identity(tGrid, tGrid) - dc * dc;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sumSolve(sum, Eigen::EigenvaluesOnly);

      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * tGrid, 2 * tGrid);
      block.topLeftCorner(tGrid, tGrid) = m * Eigen::MatrixXd::Identity(tGrid, tGrid);
      block.bottomRightCorner(tGrid, tGrid) = -m * Eigen::MatrixXd::Identity(tGrid, tGrid);
      block.topRightCorner(tGrid, tGrid) = dc;
      block.bottomLeftCorner(tGrid, tGrid) = -dc;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> blockSolve(block, Eigen::EigenvaluesOnly);

      std::vector<double> squared;
      for (int i = 0; i < 2 * tGrid; ++i)
        squared.push_back(blockSolve.eigenvalues()[i] * blockSolve.eigenvalues()[i]);
      std::sort(squared.begin(), squared.end());
      // each sum-operator eigenvalue appears twice in the squared block
      for (int i = 0; i < tGrid; ++i) {
        CHECK_THAT(squared[2 * i], Catch::Matchers::WithinAbs(sumSolve.eigenvalues()[i], 1e-8));
        CHECK_THAT(squared[2 * i + 1], Catch::Matchers::WithinAbs(sumSolve.eigenvalues()[i], 1e-8));
      }
    }
  }

  SECTION("bounding structure has no gap: smallest modulus ~ pi/(2L)") {
    auto smallestAt = [](double len, int grid) {
      auto spec = discretized_dirac_cylinder(SpinStructure::bounding, 16, len, grid);
      double smallest = std::numeric_limits<double>::infinity();
      for (double e : spec.eigenvalues) smallest = std::min(smallest, std::abs(e));
      return smallest;
    };
    const double s10 = smallestAt(10.0, 64);
    const double s20 = smallestAt(20.0, 128);
    CHECK(s10 < 0.2);  // well inside the nonbounding gap of 1/2
    CHECK(s20 < 0.6 * s10);
  }
}
