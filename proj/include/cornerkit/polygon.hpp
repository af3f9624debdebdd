#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cornerkit/errors.hpp"

namespace cornerkit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * (b - a).cross(c - a);
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::max(0.0, std::min(1.0, t));
  return (p - (a + ab * t)).norm();
}

// Simple polygon with counterclockwise vertex order.
class Polygon {
public:
  explicit Polygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) { validate(); }

  static Polygon unit_square() {
    return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  }

  // (-1,1)^2 minus the closed quadrant [0,1] x [-1,0]; the reentrant corner
  // sits at the origin with the first edge along the positive x axis.
  static Polygon l_shape() {
    return Polygon({{0, 0}, {1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {0, -1}});
  }

  static Polygon regular_ngon(int n, double radius = 1.0) {
    if (n < 3) throw InvalidArgument("bad_polygon", "need at least 3 vertices");
    std::vector<Vec2> v;
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * 3.14159265358979323846 * i / n;
      v.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return Polygon(std::move(v));
  }

  const std::vector<Vec2>& vertices() const { return verts_; }
  int size() const { return static_cast<int>(verts_.size()); }

  double signed_area() const {
    double s = 0;
    for (int i = 0; i < size(); ++i) {
      const Vec2& a = verts_[i];
      const Vec2& b = verts_[(i + 1) % size()];
      s += a.cross(b);
    }
    return 0.5 * s;
  }

  double diameter() const {
    double d = 0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j) d = std::max(d, (verts_[i] - verts_[j]).norm());
    return d;
  }

  // Interior angle at each vertex, in (0, 2*pi).
  std::vector<double> interior_angles() const {
    std::vector<double> angles;
    const int n = size();
    for (int i = 0; i < n; ++i) {
      const Vec2 prev = verts_[(i + n - 1) % n] - verts_[i];
      const Vec2 next = verts_[(i + 1) % n] - verts_[i];
      double a = std::atan2(next.cross(prev), next.dot(prev));
      if (a < 0) a += 2.0 * 3.14159265358979323846;
      angles.push_back(a);
    }
    return angles;
  }

  double max_angle() const {
    double m = 0;
    for (double a : interior_angles()) m = std::max(m, a);
    return m;
  }

  bool contains(const Vec2& p) const {
    // Ray casting; boundary points are not guaranteed either way.
    bool inside = false;
    const int n = size();
    for (int i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = verts_[i];
      const Vec2& b = verts_[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        double t = (p.y - a.y) / (b.y - a.y);
        if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
      }
    }
    return inside;
  }

  double distance_to_boundary(const Vec2& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
      d = std::min(d, point_segment_distance(p, verts_[i], verts_[(i + 1) % size()]));
    return d;
  }

private:
  static bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
      double v = (q - p).cross(r - p);
      return v > 1e-14 ? 1 : (v < -1e-14 ? -1 : 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4;
  }

  void validate() const {
    const int n = size();
    if (n < 3) throw InvalidArgument("bad_polygon", "need at least 3 vertices");
    for (int i = 0; i < n; ++i) {
      if ((verts_[i] - verts_[(i + 1) % n]).norm() < 1e-14)
        throw InvalidArgument("bad_polygon", "repeated consecutive vertices");
    }
    if (signed_area() <= 0)
      throw InvalidArgument("bad_polygon", "vertices must be in counterclockwise order");
    // Non-adjacent edges must not intersect.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
        if (segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j], verts_[(j + 1) % n]))
          throw InvalidArgument("bad_polygon", "polygon is self-intersecting");
      }
    }
  }

  std::vector<Vec2> verts_;
};

}  // namespace cornerkit
