#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cornerkit/polynomial.hpp"
#include "cornerkit/rational_linalg.hpp"
#include "cornerkit/trig_poly.hpp"

using namespace cornerkit;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int nvars, int maxDeg, int maxTerms) {
  std::uniform_int_distribution<int> expDist(0, maxDeg);
  std::uniform_int_distribution<int> coefDist(-4, 4);
  std::uniform_int_distribution<int> termDist(1, maxTerms);
  Polynomial p(nvars);
  const int terms = termDist(rng);
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars);
    int total = 0;
    for (int v = 0; v < nvars; ++v) {
      m[v] = expDist(rng);
      total += m[v];
      if (total > maxDeg) m[v] = 0;
    }
    p.add_term(m, coefDist(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
  const int n = 2;
  Polynomial x = Polynomial::variable(n, 0);
  Polynomial y = Polynomial::variable(n, 1);
  Polynomial p = x * x + Rat(3) * y - Polynomial::constant(n, Rat(1, 2));

  CHECK(p.evaluate({Rat(2), Rat(1)}) == Rat(13, 2));
  CHECK(p.derivative(0) == Rat(2) * x);
  CHECK(p.derivative(1) == Polynomial::constant(n, 3));
  CHECK((p - p).is_zero());
  CHECK(p.str({"x", "y"}) == "x^2 + 3*y - 1/2");
}

TEST_CASE("exact division detects divisibility") {
  const int n = 2;
  Polynomial x = Polynomial::variable(n, 0);
  Polynomial y = Polynomial::variable(n, 1);
  Polynomial g = x * y + Polynomial::constant(n, 2);
  Polynomial f = g * (x + y) * (x + y);

  auto q = f.exact_divide(g);
  REQUIRE(q.has_value());
  CHECK(*q == (x + y) * (x + y));

  Polynomial h = f + Polynomial::constant(n, 1);
  CHECK_FALSE(h.exact_divide(g).has_value());
  CHECK((x * y).divisible_by_var(0));
  CHECK_FALSE((x + y).divisible_by_var(0));
}

TEST_CASE("random exact division round trip", "[property]") {
  std::mt19937_64 rng(20240201);
  for (int rep = 0; rep < 60; ++rep) {
    Polynomial a = random_poly(rng, 3, 3, 4);
    Polynomial b = random_poly(rng, 3, 3, 4);
    if (b.is_zero()) continue;
    Polynomial prod = a * b;
    auto q = prod.exact_divide(b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
  }
}

TEST_CASE("bareiss determinant matches cofactor expansion on rationals") {
  // Constant matrices reduce to ordinary determinants.
  const int n = 0 + 3;
  auto c = [&](int v) { return Polynomial::constant(3, v); };
  PolyMatrix m = {{c(2), c(1), c(0)}, {c(1), c(3), c(1)}, {c(0), c(1), c(2)}};
  Polynomial det = poly_det(m, 3);
  CHECK(det == Polynomial::constant(3, 8));
  (void)n;
}

TEST_CASE("polynomial determinant with variable entries") {
  const int n = 2;
  Polynomial x = Polynomial::variable(n, 0);
  Polynomial y = Polynomial::variable(n, 1);
  PolyMatrix m = {{x, y}, {y, x}};
  CHECK(poly_det(m, n) == x * x - y * y);

  PolyMatrix sing = {{x, x}, {x, x}};
  CHECK(poly_det(sing, n).is_zero());
}

TEST_CASE("rational kernel and solve") {
  RatMatrix m = {{1, 0, 2}, {0, 1, 3}};
  auto kernel = kernel_basis(m);
  REQUIRE(kernel.size() == 1);
  CHECK(kernel[0][0] == Rat(-2));
  CHECK(kernel[0][1] == Rat(-3));
  CHECK(kernel[0][2] == Rat(1));

  auto sol = solve_linear({{2, 1}, {1, 3}}, {5, 5});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Rat(2));
  CHECK((*sol)[1] == Rat(1));

  CHECK_FALSE(solve_linear({{1, 1}, {1, 1}}, {1, 2}).has_value());
}

TEST_CASE("trig polynomial products reduce exactly") {
  TrigPoly s = TrigPoly::sine(1);
  TrigPoly c = TrigPoly::cosine(1);
  // sin^2 + cos^2 = 1
  CHECK(s * s + c * c == TrigPoly::constant(1));
  // sin*cos = sin(2y)/2
  CHECK(s * c == TrigPoly::sine(2, Rat(1, 2)));
  // derivative of sin is cos
  CHECK(s.derivative() == c);
  CHECK(c.derivative() == -s);

  TrigPoly mix = TrigPoly::cosine(3, Rat(2, 3)) + TrigPoly::sine(2, Rat(-1, 5));
  const double y = 0.7381;
  CHECK_THAT(mix.evaluate(y),
             Catch::Matchers::WithinAbs(2.0 / 3.0 * std::cos(3 * y) - 0.2 * std::sin(2 * y), 1e-15));
}

TEST_CASE("x-trig coefficients") {
  XTrigPoly a = XTrigPoly::x_power(2, Rat(3)) + XTrigPoly::pure(TrigPoly::sine(1));
  CHECK(a.xdegree() == 2);
  CHECK_FALSE(a.divisible_by_x());
  CHECK(a.shift_x().divisible_by_x());
  CHECK(a.shift_x().quotient_by_x() == a);
  // x d/dx (3x^2 + sin y) = 6x^2
  CHECK(a.x_dx() == XTrigPoly::x_power(2, Rat(6)));
  CHECK(a.dy() == XTrigPoly::pure(TrigPoly::cosine(1)));
}
