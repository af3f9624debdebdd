#include <catch2/catch_amalgamated.hpp>

#include "cornerkit/sector_pencil.hpp"

using namespace cornerkit;

TEST_CASE("analytic sector pencil eigenvalues") {
  SECTION("half plane, Dirichlet: integers") {
    auto rep = sector_pencil_eigenvalues({kPi, EdgeBC::dirichlet, EdgeBC::dirichlet}, 5);
    REQUIRE(rep.positive.size() == 5);
    for (int k = 1; k <= 5; ++k)
      CHECK_THAT(rep.positive[k - 1], Catch::Matchers::WithinAbs(static_cast<double>(k), 1e-14));
    CHECK_FALSE(rep.has_zero);
  }

  SECTION("reentrant 3*pi/2: smallest eigenvalue 2/3") {
    auto rep = sector_pencil_eigenvalues({1.5 * kPi, EdgeBC::dirichlet, EdgeBC::dirichlet}, 1);
    CHECK_THAT(rep.positive.front(), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-14));
  }

  SECTION("right angle: smallest eigenvalue 2") {
    auto rep = sector_pencil_eigenvalues({0.5 * kPi, EdgeBC::dirichlet, EdgeBC::dirichlet}, 1);
    CHECK_THAT(rep.positive.front(), Catch::Matchers::WithinAbs(2.0, 1e-14));
  }

  SECTION("mixed conditions give the half-integer family and are flagged") {
    auto rep = sector_pencil_eigenvalues({kPi, EdgeBC::dirichlet, EdgeBC::neumann}, 3);
    CHECK(rep.mixed_bc);
    CHECK_THAT(rep.positive[0], Catch::Matchers::WithinAbs(0.5, 1e-14));
    CHECK_THAT(rep.positive[1], Catch::Matchers::WithinAbs(1.5, 1e-14));
  }

  SECTION("full spectrum is symmetric about zero") {
    auto rep = sector_pencil_eigenvalues({1.3, EdgeBC::dirichlet, EdgeBC::dirichlet}, 4);
    auto all = rep.full();
    REQUIRE(all.size() == 8);
    for (size_t i = 0; i < all.size(); ++i)
      CHECK_THAT(all[i], Catch::Matchers::WithinAbs(-all[all.size() - 1 - i], 1e-14));
  }

  SECTION("angle range validated") {
    CHECK_THROWS_AS(sector_pencil_eigenvalues({0.0, EdgeBC::dirichlet, EdgeBC::dirichlet}, 1),
                    InvalidArgument);
    CHECK_THROWS_AS(sector_pencil_eigenvalues({2.5 * kPi, EdgeBC::dirichlet, EdgeBC::dirichlet}, 1),
                    InvalidArgument);
  }
}

TEST_CASE("finite-difference oracle agrees with the analytic pencil", "[oracle]") {
  const std::vector<double> angles = {0.25 * kPi, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi};
  for (double alpha : angles) {
    SectorModel s{alpha, EdgeBC::dirichlet, EdgeBC::dirichlet};
    auto analytic = sector_pencil_eigenvalues(s, 10);
    auto fd = fd_pencil_eigenvalues(s, 65536, 10);
    REQUIRE(fd.positive.size() >= 10);
    for (int k = 0; k < 10; ++k) {
      CHECK_THAT(fd.positive[k], Catch::Matchers::WithinAbs(analytic.positive[k], 1e-6));
    }
  }
}

TEST_CASE("oracle handles Neumann and mixed conditions") {
  SECTION("Neumann-Neumann has the zero mode") {
    SectorModel s{kPi, EdgeBC::neumann, EdgeBC::neumann};
    auto fd = fd_pencil_eigenvalues(s, 8192, 5);
    CHECK(fd.has_zero);
    auto analytic = sector_pencil_eigenvalues(s, 5);
    CHECK(analytic.has_zero);
    for (size_t k = 0; k < fd.positive.size() && k < analytic.positive.size(); ++k)
      CHECK_THAT(fd.positive[k], Catch::Matchers::WithinAbs(analytic.positive[k], 1e-5));
  }

  SECTION("Dirichlet-Neumann half integers") {
    SectorModel s{kPi, EdgeBC::dirichlet, EdgeBC::neumann};
    auto fd = fd_pencil_eigenvalues(s, 16384, 6);
    auto analytic = sector_pencil_eigenvalues(s, 6);
    for (int k = 0; k < 6; ++k)
      CHECK_THAT(fd.positive[k], Catch::Matchers::WithinAbs(analytic.positive[k], 1e-5));
  }
}

TEST_CASE("weight windows") {
  SECTION("square: eta = 2") {
    auto w = polygon_weight_window({0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi});
    CHECK_THAT(w.eta, Catch::Matchers::WithinAbs(2.0, 1e-14));
    CHECK_FALSE(w.empty);
  }

  SECTION("L-shape: eta = 2/3") {
    auto w = polygon_weight_window(
        {0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 1.5 * kPi});
    CHECK_THAT(w.eta, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-14));
  }

  SECTION("slit: eta = 1/2") {
    auto w = weight_window({2.0 * kPi, EdgeBC::dirichlet, EdgeBC::dirichlet});
    CHECK_THAT(w.eta, Catch::Matchers::WithinAbs(0.5, 1e-14));
  }

  SECTION("Neumann-Neumann window is reported empty") {
    auto w = weight_window({kPi, EdgeBC::neumann, EdgeBC::neumann});
    CHECK(w.empty);
    CHECK(w.eta == 0.0);
  }

  SECTION("window monotonicity and square/L-shape consistency") {
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.3, 0.9, 1.7, 2.8, 4.4, 6.2}) {
      auto w = weight_window({alpha, EdgeBC::dirichlet, EdgeBC::dirichlet});
      CHECK(w.eta < prev);
      prev = w.eta;
    }
    auto square = polygon_weight_window({0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi});
    auto lshape = polygon_weight_window(
        {0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 1.5 * kPi});
    CHECK(square.eta > lshape.eta);
  }
}

TEST_CASE("predicted convergence rates") {
  const std::vector<double> lshape = {0.5 * kPi, 0.5 * kPi, 0.5 * kPi,
                                      0.5 * kPi, 0.5 * kPi, 1.5 * kPi};
  CHECK_THAT(predicted_h1_rate(lshape, 1), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-14));
  const std::vector<double> square = {0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi};
  CHECK_THAT(predicted_h1_rate(square, 2), Catch::Matchers::WithinAbs(2.0, 1e-14));
  // convex polygon with all angles below pi/2 has eta > 2
  const std::vector<double> triangle = {kPi / 3, kPi / 3, kPi / 3};
  CHECK_THAT(predicted_h1_rate(triangle, 1), Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THROWS_AS(predicted_h1_rate(square, 0), InvalidArgument);
}
