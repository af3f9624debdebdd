#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cornerkit/poisson_fem.hpp"

using namespace cornerkit;

namespace {

constexpr double kTestPi = 3.14159265358979323846;

// L-shape benchmark: u = r^(2/3) sin(2 theta / 3), theta in [0, 3 pi/2]
// measured from the positive x axis at the reentrant corner.
double lshape_theta(Vec2 p) {
  double th = std::atan2(p.y, p.x);
  if (th < 0) th += 2.0 * kTestPi;
  return th;
}

double lshape_exact(Vec2 p) {
  const double r = p.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * lshape_theta(p) / 3.0);
}

Vec2 lshape_grad(Vec2 p) {
  const double r = p.norm();
  if (r == 0.0) return {0, 0};
  const double th = lshape_theta(p);
  const double lam = 2.0 / 3.0;
  const double f = lam * std::pow(r, lam - 1.0);
  const Vec2 er{std::cos(th), std::sin(th)};
  const Vec2 et{-std::sin(th), std::cos(th)};
  return er * (f * std::sin(lam * th)) + et * (f * std::cos(lam * th));
}

// Test-side adaptive quadrature oracle over a triangle: refine until the
// 4-way subdivided value stabilizes.
double adaptive_triangle(const Vec2& a, const Vec2& b, const Vec2& c,
                         const std::function<double(Vec2)>& f, double tol, int depth = 0) {
  const double whole = integrate_triangle(a, b, c, f);
  const Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  const double split = integrate_triangle(a, ab, ca, f) + integrate_triangle(ab, b, bc, f) +
                       integrate_triangle(ca, bc, c, f) + integrate_triangle(ab, bc, ca, f);
  if (depth > 14 || std::abs(split - whole) < tol) return split;
  return adaptive_triangle(a, ab, ca, f, tol / 4, depth + 1) +
         adaptive_triangle(ab, b, bc, f, tol / 4, depth + 1) +
         adaptive_triangle(ca, bc, c, f, tol / 4, depth + 1) +
         adaptive_triangle(ab, bc, ca, f, tol / 4, depth + 1);
}

}  // namespace

TEST_CASE("graded mesh generation") {
  SECTION("quasi-uniform square mesh is shape regular") {
    auto mesh = generate_graded_mesh(Polygon::unit_square(), 0.1, {1, 1, 1, 1});
    mesh.validate();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
    for (const auto& t : mesh.tris) {
      for (int e = 0; e < 3; ++e) {
        double len = (mesh.nodes[t.v[e]] - mesh.nodes[t.v[(e + 1) % 3]]).norm();
        dmin = std::min(dmin, len);
        dmax = std::max(dmax, len);
      }
    }
    CHECK(dmax / dmin <= 4.0);
    CHECK(mesh.min_angle_outside_graded_layers() >= 15.0 * kTestPi / 180.0);
  }

  SECTION("meshes are deterministic") {
    auto a = generate_graded_mesh(Polygon::l_shape(), 0.22, {0.3, 1, 1, 1, 1, 1});
    auto b = generate_graded_mesh(Polygon::l_shape(), 0.22, {0.3, 1, 1, 1, 1, 1});
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (size_t i = 0; i < a.nodes.size(); ++i) {
      CHECK(a.nodes[i].x == b.nodes[i].x);  // bit identical
      CHECK(a.nodes[i].y == b.nodes[i].y);
    }
  }

  SECTION("graded node count stays O(h^-2)") {
    auto uniform = generate_graded_mesh(Polygon::l_shape(), 0.1, {});
    auto graded = generate_graded_mesh(Polygon::l_shape(), 0.1, {0.3, 1, 1, 1, 1, 1});
    CHECK(graded.node_count() == uniform.node_count());  // moved, not added
    CHECK(graded.min_area() > 0);
    CHECK(graded.conforming());
  }

  SECTION("grading compresses the first layer") {
    auto graded = generate_graded_mesh(Polygon::l_shape(), 0.2, {0.3, 1, 1, 1, 1, 1});
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& p : graded.nodes) {
      const double r = p.norm();
      if (r > 1e-12) nearest = std::min(nearest, r);
    }
    auto uniform = generate_graded_mesh(Polygon::l_shape(), 0.2, {});
    double nearestU = std::numeric_limits<double>::infinity();
    for (const auto& p : uniform.nodes) {
      const double r = p.norm();
      if (r > 1e-12) nearestU = std::min(nearestU, r);
    }
    CHECK(nearest < 0.05 * nearestU);
  }

  SECTION("parameter validation") {
    CHECK_THROWS_AS(generate_graded_mesh(Polygon::unit_square(), -0.1, {}), InvalidArgument);
    CHECK_THROWS_AS(generate_graded_mesh(Polygon::unit_square(), 0.1, {0.5, 1, 1, 1.5}),
                    InvalidArgument);
    CHECK_THROWS_AS(generate_graded_mesh(Polygon::unit_square(), 0.1, {0.5}), InvalidArgument);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidArgument);
  }
}

TEST_CASE("poisson solve on the unit square") {
  const Polygon square = Polygon::unit_square();

  SECTION("harmonic polynomial data is reproduced to O(h^2)") {
    auto exact = [](Vec2 p) { return p.x * p.x - p.y * p.y; };
    auto mesh = generate_graded_mesh(square, 1.0 / 16, {});
    auto sol = solve_poisson(mesh, [](Vec2) { return 0.0; }, exact);
    double maxErr = 0;
    for (int i = 0; i < mesh.node_count(); ++i)
      maxErr = std::max(maxErr, std::abs(sol.values[i] - exact(mesh.nodes[i])));
    CHECK(maxErr < 5e-4);
  }

  SECTION("center value against the separation-of-variables oracle") {
    // Frozen from the double sine series: for -Lap w = 1 with w = 0 on the
    // boundary, w(1/2,1/2) = 0.07367135326500.  With the analyst convention
    // Delta u = f this gives u = -f w for constant f.
    const double wCenter = 0.07367135326500296;
    auto mesh = generate_graded_mesh(square, 1.0 / 32, {});
    auto sol2 = solve_poisson(mesh, [](Vec2) { return 2.0; }, [](Vec2) { return 0.0; });
    CHECK_THAT(sol2.evaluate({0.5, 0.5}), Catch::Matchers::WithinAbs(-2.0 * wCenter, 2e-3));
    auto sol1 = solve_poisson(mesh, [](Vec2) { return 1.0; }, [](Vec2) { return 0.0; });
    CHECK_THAT(std::abs(sol1.evaluate({0.5, 0.5})), Catch::Matchers::WithinAbs(wCenter, 2e-3));
  }

  SECTION("zero data gives the zero solution") {
    auto mesh = generate_graded_mesh(square, 1.0 / 8, {});
    auto sol = solve_poisson(mesh, [](Vec2) { return 0.0; }, [](Vec2) { return 0.0; });
    for (double v : sol.values) CHECK(v == 0.0);
  }

  SECTION("discrete maximum principle on the right-triangle mesh") {
    auto mesh = generate_graded_mesh(square, 1.0 / 16, {});
    auto sol = solve_poisson(mesh, [](Vec2) { return -2.0; }, [](Vec2) { return 0.0; });
    for (double v : sol.values) CHECK(v >= -1e-12);
  }

  SECTION("solves are deterministic and Galerkin residual is tiny") {
    auto mesh = generate_graded_mesh(square, 1.0 / 16, {});
    auto f = [](Vec2 p) { return std::sin(3 * p.x) + p.y; };
    auto g = [](Vec2 p) { return p.x * p.y; };
    auto s1 = solve_poisson(mesh, f, g);
    auto s2 = solve_poisson(mesh, f, g);
    REQUIRE(s1.values.size() == s2.values.size());
    for (size_t i = 0; i < s1.values.size(); ++i) CHECK(s1.values[i] == s2.values[i]);
    CHECK(s1.relative_residual < 1e-10);
  }
}

TEST_CASE("weighted Sobolev norms") {
  const Polygon square = Polygon::unit_square();
  const std::vector<Vec2> corners = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto mesh = generate_graded_mesh(square, 1.0 / 32, {});
  auto one = solve_poisson(mesh, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; });

  SECTION("a = -1/2, m = 0 against the adaptive quadrature oracle") {
    // integrand r^(2(-a-1)) = 1/r with r the distance to the nearest corner;
    // closed form 4 log(1+sqrt 2), cross-checked by the adaptive oracle.
    auto integrand = [&](Vec2 p) {
      double r = std::numeric_limits<double>::infinity();
      for (const auto& c : corners) r = std::min(r, (p - c).norm());
      return 1.0 / r;
    };
    double oracle = 0;
    for (const auto& t : mesh.tris)
      oracle += adaptive_triangle(mesh.nodes[t.v[0]], mesh.nodes[t.v[1]], mesh.nodes[t.v[2]],
                                  integrand, 1e-9);
    CHECK_THAT(oracle, Catch::Matchers::WithinAbs(3.5254943480781717, 1e-4));

    const double norm = weighted_norm(one, {-0.5, 0}, corners);
    CHECK_THAT(norm * norm, Catch::Matchers::WithinRel(oracle, 2e-3));
  }

  SECTION("a = -1 with m = 0 reduces to the plain L2 norm") {
    const double norm = weighted_norm(one, {-1.0, 0}, corners);
    CHECK_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-12));  // |u|_L2 on the unit square
  }

  SECTION("homogeneity and the zero function") {
    auto scaled = one;
    for (double& v : scaled.values) v *= -3.5;
    CHECK_THAT(weighted_norm(scaled, {-0.5, 1}, corners),
               Catch::Matchers::WithinRel(3.5 * weighted_norm(one, {-0.5, 1}, corners), 1e-12));
    auto zero = one;
    for (double& v : zero.values) v = 0.0;
    CHECK(weighted_norm(zero, {0.3, 2}, corners) == 0.0);
  }

  SECTION("order above 2 is rejected") {
    CHECK_THROWS_AS(weighted_norm(one, {0.0, 3}, corners), InvalidArgument);
  }
}

TEST_CASE("convergence studies", "[slow]") {
  SECTION("smooth solution on the square converges at rate 1") {
    auto exact = [](Vec2 p) { return std::sin(kTestPi * p.x) * std::sinh(kTestPi * p.y); };
    auto grad = [](Vec2 p) {
      return Vec2{kTestPi * std::cos(kTestPi * p.x) * std::sinh(kTestPi * p.y),
                  kTestPi * std::sin(kTestPi * p.x) * std::cosh(kTestPi * p.y)};
    };
    auto study = convergence_study(Polygon::unit_square(), exact, grad,
                                   [](Vec2) { return 0.0; }, {}, 0.25, 4);
    CHECK_THAT(study.rate, Catch::Matchers::WithinAbs(1.0, 0.05));
    for (size_t i = 1; i < study.rows.size(); ++i)
      CHECK(study.rows[i].energy_error < study.rows[i - 1].energy_error);
  }

  SECTION("L-shape: quasi-uniform rate is the pencil prediction 2/3") {
    auto study = convergence_study(Polygon::l_shape(), lshape_exact, lshape_grad,
                                   [](Vec2) { return 0.0; }, {}, 0.125, 4, {{0, 0}});
    CHECK_THAT(study.rate, Catch::Matchers::WithinAbs(2.0 / 3.0, 0.06));
  }

  SECTION("L-shape: grading kappa = 0.3 restores rate 1") {
    auto study = convergence_study(Polygon::l_shape(), lshape_exact, lshape_grad,
                                   [](Vec2) { return 0.0; }, {0.3, 1, 1, 1, 1, 1}, 0.125, 4,
                                   {{0, 0}});
    CHECK_THAT(study.rate, Catch::Matchers::WithinAbs(1.0, 0.08));
  }

  SECTION("level count below 4 is rejected") {
    CHECK_THROWS_AS(convergence_study(Polygon::unit_square(), lshape_exact, lshape_grad,
                                      [](Vec2) { return 0.0; }, {}, 0.25, 3),
                    InvalidArgument);
  }
}

TEST_CASE("corner singularity probe", "[slow]") {
  SECTION("forcing with f(0,0) != 0 produces a stable log coefficient") {
    auto probe = corner_singularity_probe([](Vec2) { return 1.0; }, 1.0 / 24);
    CHECK(std::abs(probe.fine.c_log) > 1e-3);
    CHECK(probe.relative_change < 0.2);
    // local analysis for Delta u = 1 at a right angle gives c_log = 1/pi
    CHECK_THAT(probe.fine.c_log, Catch::Matchers::WithinAbs(1.0 / kTestPi, 0.08));
  }

  SECTION("quadratically vanishing forcing leaves no log term") {
    auto probe = corner_singularity_probe([](Vec2 p) { return p.x * p.x + p.y * p.y; },
                                          1.0 / 24);
    CHECK(std::abs(probe.fine.c_log) < 1e-4);
  }

  SECTION("harmonic data keeps every singular coefficient near zero") {
    auto mesh = generate_graded_mesh(Polygon::unit_square(), 1.0 / 32, {});
    auto sol = solve_poisson(mesh, [](Vec2) { return 0.0; },
                             [](Vec2 p) { return p.x * p.x - p.y * p.y; });
    auto fit = fit_corner_expansion(sol);
    CHECK(std::abs(fit.c_log) < 1e-4);
    CHECK(std::abs(fit.c_sin) < 1e-4);
    CHECK_THAT(fit.all_coefficients[3], Catch::Matchers::WithinAbs(1.0, 1e-3));  // r^2 cos 2theta
  }
}
