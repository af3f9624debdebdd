#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cornerkit/errors.hpp"

namespace cornerkit {

// Finite union of closed intervals and isolated points on the real line, in
// a unique canonical form: intervals sorted and pairwise disjoint, points
// sorted and outside every interval.
class SpectrumSet {
public:
  struct Interval {
    double lo = 0.0;  // may be -infinity
    double hi = 0.0;  // may be +infinity

    bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
  };

  SpectrumSet() = default;

  SpectrumSet(std::vector<Interval> intervals, std::vector<double> points) {
    for (const auto& iv : intervals) add_interval(iv.lo, iv.hi);
    for (double p : points) add_point(p);
    normalize();
  }

  static SpectrumSet empty() { return SpectrumSet(); }

  static SpectrumSet half_line(double a) {
    SpectrumSet s;
    s.add_interval(a, std::numeric_limits<double>::infinity());
    s.normalize();
    return s;
  }

  static SpectrumSet real_line() {
    return half_line(-std::numeric_limits<double>::infinity());
  }

  // (-inf, -c] united with [c, inf).
  static SpectrumSet gapped(double c) {
    SpectrumSet s;
    s.add_interval(-std::numeric_limits<double>::infinity(), -c);
    s.add_interval(c, std::numeric_limits<double>::infinity());
    s.normalize();
    return s;
  }

  void add_interval(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw InvalidArgument("bad_interval", "interval endpoints out of order");
    raw_intervals_.push_back({lo, hi});
    normalized_ = false;
  }

  void add_point(double p) {
    if (std::isnan(p) || std::isinf(p))
      throw InvalidArgument("bad_point", "isolated point must be finite");
    raw_points_.push_back(p);
    normalized_ = false;
  }

  void normalize() {
    std::sort(raw_intervals_.begin(), raw_intervals_.end(),
              [](const Interval& a, const Interval& b) {
                return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });
    std::vector<Interval> merged;
    for (const auto& iv : raw_intervals_) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    // Degenerate intervals are isolated points in canonical form.
    std::vector<Interval> proper;
    for (const auto& iv : merged) {
      if (iv.lo == iv.hi)
        raw_points_.push_back(iv.lo);
      else
        proper.push_back(iv);
    }
    merged = std::move(proper);
    std::sort(raw_points_.begin(), raw_points_.end());
    std::vector<double> pts;
    for (double p : raw_points_) {
      bool inside = false;
      for (const auto& iv : merged)
        if (p >= iv.lo && p <= iv.hi) inside = true;
      if (!inside && (pts.empty() || pts.back() != p)) pts.push_back(p);
    }
    raw_intervals_ = std::move(merged);
    raw_points_ = std::move(pts);
    normalized_ = true;
  }

  const std::vector<Interval>& intervals() const {
    require_normalized();
    return raw_intervals_;
  }

  const std::vector<double>& points() const {
    require_normalized();
    return raw_points_;
  }

  bool contains(double x) const {
    require_normalized();
    for (const auto& iv : raw_intervals_)
      if (x >= iv.lo && x <= iv.hi) return true;
    for (double p : raw_points_)
      if (p == x) return true;
    return false;
  }

  bool operator==(const SpectrumSet& other) const {
    require_normalized();
    other.require_normalized();
    return raw_intervals_ == other.raw_intervals_ && raw_points_ == other.raw_points_;
  }

  std::string str() const {
    require_normalized();
    if (raw_intervals_.empty() && raw_points_.empty()) return "{}";
    std::ostringstream out;
    bool first = true;
    auto fmt = [](double v) {
      if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
      std::ostringstream o;
      o << v;
      return o.str();
    };
    for (const auto& iv : raw_intervals_) {
      if (!first) out << " u ";
      first = false;
      out << (std::isinf(iv.lo) ? "(" : "[") << fmt(iv.lo) << ", " << fmt(iv.hi)
          << (std::isinf(iv.hi) ? ")" : "]");
    }
    for (double p : raw_points_) {
      if (!first) out << " u ";
      first = false;
      out << "{" << fmt(p) << "}";
    }
    return out.str();
  }

private:
  void require_normalized() const {
    if (!normalized_)
      throw ComputationError("not_normalized", "spectrum set used before normalize()");
  }

  std::vector<Interval> raw_intervals_;
  std::vector<double> raw_points_;
  bool normalized_ = true;
};

}  // namespace cornerkit
