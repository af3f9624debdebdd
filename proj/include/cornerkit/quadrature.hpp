#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "cornerkit/polygon.hpp"

namespace cornerkit {

struct TrianglePoint {
  double l1, l2, l3;  // barycentric coordinates
  double weight;      // normalized to sum 1
};

// Symmetric degree-5 rule (7 points).
inline const std::vector<TrianglePoint>& triangle_rule_deg5() {
  static const std::vector<TrianglePoint> rule = [] {
    std::vector<TrianglePoint> r;
    r.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225});
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    for (int rot = 0; rot < 3; ++rot) {
      double c1[3] = {a1, b1, b1};
      double c2[3] = {a2, b2, b2};
      r.push_back({c1[rot % 3], c1[(rot + 1) % 3], c1[(rot + 2) % 3], w1});
      r.push_back({c2[rot % 3], c2[(rot + 1) % 3], c2[(rot + 2) % 3], w2});
    }
    return r;
  }();
  return rule;
}

// Integral of f over the triangle (a,b,c) with the degree-5 rule.
inline double integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c,
                                 const std::function<double(Vec2)>& f) {
  const double area = std::abs(triangle_area(a, b, c));
  double sum = 0;
  for (const auto& q : triangle_rule_deg5()) {
    Vec2 p = a * q.l1 + b * q.l2 + c * q.l3;
    sum += q.weight * f(p);
  }
  return area * sum;
}

// Same with uniform 4-way subdivision `levels` deep; used near integrand
// singularities.
inline double integrate_triangle_subdivided(const Vec2& a, const Vec2& b, const Vec2& c,
                                            const std::function<double(Vec2)>& f, int levels) {
  if (levels <= 0) return integrate_triangle(a, b, c, f);
  const Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  return integrate_triangle_subdivided(a, ab, ca, f, levels - 1) +
         integrate_triangle_subdivided(ab, b, bc, f, levels - 1) +
         integrate_triangle_subdivided(ca, bc, c, f, levels - 1) +
         integrate_triangle_subdivided(ab, bc, ca, f, levels - 1);
}

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre recurrence.  Deterministic for fixed n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846264338327950288;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace cornerkit
