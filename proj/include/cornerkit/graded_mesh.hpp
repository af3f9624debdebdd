#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "cornerkit/polygon.hpp"

namespace cornerkit {

struct Triangle {
  int v[3];
};

// Conforming triangulation of a polygon, graded toward its vertices by the
// per-vertex power law r_j = R (j/n)^(1/kappa); kappa = 1 is quasi-uniform.
struct GradedMesh {
  std::vector<Vec2> nodes;
  std::vector<Triangle> tris;
  std::vector<bool> on_boundary;  // per node
  double h = 0.0;                 // nominal (requested) mesh size
  std::vector<double> kappa;      // per polygon vertex
  std::vector<Vec2> polygon_vertices;
  std::vector<double> grading_radius;  // per polygon vertex

  int node_count() const { return static_cast<int>(nodes.size()); }

  double min_area() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& t : tris)
      m = std::min(m, triangle_area(nodes[t.v[0]], nodes[t.v[1]], nodes[t.v[2]]));
    return m;
  }

  double max_edge() const {
    double m = 0;
    for (const auto& t : tris)
      for (int e = 0; e < 3; ++e)
        m = std::max(m, (nodes[t.v[e]] - nodes[t.v[(e + 1) % 3]]).norm());
    return m;
  }

  static double min_angle_of(const Vec2& a, const Vec2& b, const Vec2& c) {
    auto angle = [](const Vec2& u, const Vec2& v) {
      return std::atan2(std::abs(u.cross(v)), u.dot(v));
    };
    double m = angle(b - a, c - a);
    m = std::min(m, angle(a - b, c - b));
    m = std::min(m, angle(a - c, b - c));
    return m;
  }

  // Minimum angle over triangles whose vertices all lie outside every
  // grading disk.
  double min_angle_outside_graded_layers() const {
    double m = 3.2;
    for (const auto& t : tris) {
      bool graded = false;
      for (int e = 0; e < 3 && !graded; ++e) {
        for (size_t v = 0; v < polygon_vertices.size(); ++v) {
          if (kappa.empty() || kappa[v] >= 1.0) continue;
          if ((nodes[t.v[e]] - polygon_vertices[v]).norm() < grading_radius[v] + 1e-12)
            graded = true;
        }
      }
      if (!graded) m = std::min(m, min_angle_of(nodes[t.v[0]], nodes[t.v[1]], nodes[t.v[2]]));
    }
    return m;
  }

  // Conformity: every edge belongs to one (boundary) or two triangles.
  bool conforming() const {
    std::map<std::pair<int, int>, int> edgeCount;
    for (const auto& t : tris) {
      for (int e = 0; e < 3; ++e) {
        int a = t.v[e], b = t.v[(e + 1) % 3];
        if (a > b) std::swap(a, b);
        ++edgeCount[{a, b}];
      }
    }
    for (const auto& [edge, count] : edgeCount) {
      if (count > 2) return false;
      if (count == 1 && !(on_boundary[edge.first] && on_boundary[edge.second])) return false;
    }
    return true;
  }

  void validate() const {
    if (min_area() <= 0) throw ComputationError("bad_mesh", "non-positive triangle area");
    if (!conforming()) throw ComputationError("bad_mesh", "triangulation is not conforming");
  }
};

namespace meshing {

// Ear clipping that always removes the best-quality available ear.
inline std::vector<Triangle> ear_clip(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;

  std::vector<Triangle> tris;
  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    int best = -1;
    double bestQuality = -1.0;
    for (int i = 0; i < m; ++i) {
      const int ia = ring[(i + m - 1) % m], ib = ring[i], ic = ring[(i + 1) % m];
      const Vec2 &a = pts[ia], &b = pts[ib], &c = pts[ic];
      if (triangle_area(a, b, c) <= 1e-14) continue;  // reflex or flat
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        const int id = ring[j];
        if (id == ia || id == ib || id == ic) continue;
        const Vec2& p = pts[id];
        const double a1 = triangle_area(a, b, p);
        const double a2 = triangle_area(b, c, p);
        const double a3 = triangle_area(c, a, p);
        if (a1 >= -1e-14 && a2 >= -1e-14 && a3 >= -1e-14) blocked = true;
      }
      if (blocked) continue;
      const double q = GradedMesh::min_angle_of(a, b, c);
      if (q > bestQuality) {
        bestQuality = q;
        best = i;
      }
    }
    if (best < 0) throw ComputationError("ear_clip_failed", "no ear found; polygon not simple?");
    const int m2 = static_cast<int>(ring.size());
    tris.push_back({ring[(best + m2 - 1) % m2], ring[best], ring[(best + 1) % m2]});
    ring.erase(ring.begin() + best);
  }
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

inline bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double ax = a.x - d.x, ay = a.y - d.y;
  const double bx = b.x - d.x, by = b.y - d.y;
  const double cx = c.x - d.x, cy = c.y - d.y;
  const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
  return det > 1e-12;
}

// Lawson flips on interior edges until locally Delaunay.
inline void delaunay_flips(const std::vector<Vec2>& pts, std::vector<Triangle>& tris) {
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 200) {
    changed = false;
    for (size_t t1 = 0; t1 < tris.size() && !changed; ++t1) {
      for (size_t t2 = t1 + 1; t2 < tris.size() && !changed; ++t2) {
        int shared[2], only1 = -1, only2 = -1, count = 0;
        for (int i = 0; i < 3; ++i) {
          bool found = false;
          for (int j = 0; j < 3; ++j)
            if (tris[t1].v[i] == tris[t2].v[j]) found = true;
          if (found) {
            if (count < 2) shared[count] = tris[t1].v[i];
            ++count;
          } else {
            only1 = tris[t1].v[i];
          }
        }
        if (count != 2) continue;
        for (int j = 0; j < 3; ++j) {
          bool found = false;
          for (int i = 0; i < 3; ++i)
            if (tris[t2].v[j] == tris[t1].v[i]) found = true;
          if (!found) only2 = tris[t2].v[j];
        }
        if (!in_circumcircle(pts[tris[t1].v[0]], pts[tris[t1].v[1]], pts[tris[t1].v[2]],
                             pts[only2]))
          continue;
        // Flip only across a strictly convex quad: the two new triangles must
        // carry the same orientation with consistent winding.
        Triangle n1{only1, shared[0], only2};
        Triangle n2{only1, only2, shared[1]};
        double s1 = triangle_area(pts[n1.v[0]], pts[n1.v[1]], pts[n1.v[2]]);
        double s2 = triangle_area(pts[n2.v[0]], pts[n2.v[1]], pts[n2.v[2]]);
        if (s1 * s2 <= 1e-20) continue;
        if (s1 < 0) {
          std::swap(n1.v[1], n1.v[2]);
          std::swap(n2.v[1], n2.v[2]);
        }
        tris[t1] = n1;
        tris[t2] = n2;
        changed = true;
      }
    }
  }
}

}  // namespace meshing

// Deterministic graded mesh generator: ear-clip the polygon, flip to local
// Delaunay, red-refine until the edge length target is met, then pull node
// rings toward each kappa < 1 vertex along r' = R (r/R)^(1/kappa).
inline GradedMesh generate_graded_mesh(const Polygon& poly, double h, std::vector<double> kappa) {
  const int nv = poly.size();
  if (h <= 0) throw InvalidArgument("bad_h", "mesh size must be positive");
  if (kappa.empty()) kappa.assign(nv, 1.0);
  if (static_cast<int>(kappa.size()) != nv)
    throw InvalidArgument("bad_kappa", "need one grading parameter per vertex");
  for (double k : kappa)
    if (!(k > 0.0) || k > 1.0)
      throw InvalidArgument("bad_kappa", "grading parameters must lie in (0, 1]");

  GradedMesh mesh;
  mesh.h = h;
  mesh.kappa = kappa;
  mesh.polygon_vertices = poly.vertices();
  mesh.nodes = poly.vertices();
  mesh.tris = meshing::ear_clip(mesh.nodes);
  meshing::delaunay_flips(mesh.nodes, mesh.tris);

  // Boundary edges of the polygon; midpoints of boundary edges stay boundary.
  std::set<std::pair<int, int>> boundaryEdges;
  for (int i = 0; i < nv; ++i) {
    int a = i, b = (i + 1) % nv;
    if (a > b) std::swap(a, b);
    boundaryEdges.insert({a, b});
  }

  // Red refinement until the target edge length is reached.
  while (mesh.max_edge() > h) {
    std::map<std::pair<int, int>, int> midpoint;
    std::set<std::pair<int, int>> nextBoundary;
    auto mid = [&](int a, int b) {
      int lo = std::min(a, b), hi = std::max(a, b);
      auto it = midpoint.find({lo, hi});
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back((mesh.nodes[lo] + mesh.nodes[hi]) * 0.5);
      midpoint.emplace(std::make_pair(lo, hi), idx);
      if (boundaryEdges.count({lo, hi})) {
        nextBoundary.insert({std::min(lo, idx), std::max(lo, idx)});
        nextBoundary.insert({std::min(hi, idx), std::max(hi, idx)});
      }
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(mesh.tris.size() * 4);
    for (const auto& t : mesh.tris) {
      const int a = t.v[0], b = t.v[1], c = t.v[2];
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    mesh.tris = std::move(next);
    boundaryEdges = std::move(nextBoundary);
  }

  mesh.on_boundary.assign(mesh.nodes.size(), false);
  for (const auto& [a, b] : boundaryEdges) {
    mesh.on_boundary[a] = true;
    mesh.on_boundary[b] = true;
  }

  // Grading radius: a fixed fraction of the clearance around each vertex so
  // the disks stay inside the local sector and never overlap.
  mesh.grading_radius.assign(nv, 0.0);
  for (int i = 0; i < nv; ++i) {
    double clearance = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nv; ++j) {
      if (j == i) continue;
      clearance = std::min(clearance, (poly.vertices()[i] - poly.vertices()[j]).norm());
    }
    for (int j = 0; j < nv; ++j) {
      if (j == i || (j + 1) % nv == i) continue;  // skip incident edges
      clearance = std::min(clearance, point_segment_distance(poly.vertices()[i], poly.vertices()[j],
                                                             poly.vertices()[(j + 1) % nv]));
    }
    mesh.grading_radius[i] = 0.45 * clearance;
  }

  for (int i = 0; i < nv; ++i) {
    if (kappa[i] >= 1.0) continue;
    const Vec2 v = poly.vertices()[i];
    const double radius = mesh.grading_radius[i];
    const double power = 1.0 / kappa[i] - 1.0;
    for (auto& p : mesh.nodes) {
      const Vec2 d = p - v;
      const double r = d.norm();
      if (r >= radius || r == 0.0) continue;
      p = v + d * std::pow(r / radius, power);
    }
  }

  mesh.validate();
  return mesh;
}

}  // namespace cornerkit
