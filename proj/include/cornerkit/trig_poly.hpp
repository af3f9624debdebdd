#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "cornerkit/rational.hpp"

namespace cornerkit {

// Trigonometric polynomial c_0 + sum_k a_k cos(k y) + b_k sin(k y) with exact
// rational coefficients.  Products reduce exactly via product-to-sum rules.
class TrigPoly {
public:
  TrigPoly() = default;

  static TrigPoly constant(const Rat& c) {
    TrigPoly t;
    t.add_cos(0, c);
    return t;
  }

  static TrigPoly cosine(int k, const Rat& c = 1) {
    TrigPoly t;
    t.add_cos(k, c);
    return t;
  }

  static TrigPoly sine(int k, const Rat& c = 1) {
    TrigPoly t;
    t.add_sin(k, c);
    return t;
  }

  bool is_zero() const { return modes_.empty(); }

  // cos(-k) = cos(k), sin(-k) = -sin(k), sin(0) = 0.
  void add_cos(int k, const Rat& c) {
    if (c == 0) return;
    insert(std::abs(k), c, 0);
  }

  void add_sin(int k, const Rat& c) {
    if (c == 0 || k == 0) return;
    insert(std::abs(k), 0, k < 0 ? Rat(-c) : c);
  }

  TrigPoly& operator+=(const TrigPoly& other) {
    for (const auto& [k, ab] : other.modes_) insert(k, ab.first, ab.second);
    return *this;
  }

  TrigPoly& operator-=(const TrigPoly& other) {
    for (const auto& [k, ab] : other.modes_) insert(k, -ab.first, -ab.second);
    return *this;
  }

  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }

  TrigPoly operator-() const {
    TrigPoly r;
    for (const auto& [k, ab] : modes_) r.insert(k, -ab.first, -ab.second);
    return r;
  }

  friend TrigPoly operator*(const Rat& s, const TrigPoly& t) {
    TrigPoly r;
    if (s == 0) return r;
    for (const auto& [k, ab] : t.modes_) r.insert(k, s * ab.first, s * ab.second);
    return r;
  }

  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly r;
    const Rat half(1, 2);
    for (const auto& [k1, ab1] : a.modes_) {
      for (const auto& [k2, ab2] : b.modes_) {
        const Rat &a1 = ab1.first, &b1 = ab1.second;
        const Rat &a2 = ab2.first, &b2 = ab2.second;
        const int sum = k1 + k2, diff = k1 - k2;
        // cos cos, cos sin, sin cos, sin sin
        r.add_cos(diff, half * a1 * a2);
        r.add_cos(sum, half * a1 * a2);
        r.add_sin(sum, half * a1 * b2);
        r.add_sin(-diff, half * a1 * b2);
        r.add_sin(sum, half * b1 * a2);
        r.add_sin(diff, half * b1 * a2);
        r.add_cos(diff, half * b1 * b2);
        r.add_cos(sum, -half * b1 * b2);
      }
    }
    return r;
  }

  bool operator==(const TrigPoly& other) const { return modes_ == other.modes_; }

  TrigPoly derivative() const {
    TrigPoly r;
    for (const auto& [k, ab] : modes_) {
      if (k == 0) continue;
      r.add_cos(k, Rat(k) * ab.second);
      r.add_sin(k, -Rat(k) * ab.first);
    }
    return r;
  }

  double evaluate(double y) const {
    double v = 0;
    for (const auto& [k, ab] : modes_)
      v += to_double(ab.first) * std::cos(k * y) + to_double(ab.second) * std::sin(k * y);
    return v;
  }

  int max_mode() const { return modes_.empty() ? 0 : modes_.rbegin()->first; }
  const std::map<int, std::pair<Rat, Rat>>& modes() const { return modes_; }

  std::string str(const std::string& var = "y") const {
    if (modes_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const Rat& c, const std::string& fn, int k) {
      if (c == 0) return;
      if (!first) out << (c < 0 ? " - " : " + ");
      if (first && c < 0) out << "-";
      first = false;
      Rat ac = abs(c);
      if (fn.empty()) {
        out << ac.str();
        return;
      }
      if (ac != 1) out << ac.str() << "*";
      out << fn << "(";
      if (k != 1) out << k << "*";
      out << var << ")";
    };
    for (const auto& [k, ab] : modes_) {
      if (k == 0)
        emit(ab.first, "", 0);
      else {
        emit(ab.first, "cos", k);
        emit(ab.second, "sin", k);
      }
    }
    return out.str();
  }

private:
  void insert(int k, const Rat& dcos, const Rat& dsin) {
    if (dcos == 0 && dsin == 0) return;
    auto it = modes_.find(k);
    if (it == modes_.end()) {
      modes_.emplace(k, std::make_pair(dcos, dsin));
      return;
    }
    it->second.first += dcos;
    it->second.second += dsin;
    if (it->second.first == 0 && it->second.second == 0) modes_.erase(it);
  }

  std::map<int, std::pair<Rat, Rat>> modes_;  // k -> (cos coeff, sin coeff)
};

// Polynomial in x whose coefficients are trig polynomials in y.
class XTrigPoly {
public:
  XTrigPoly() = default;

  static XTrigPoly constant(const Rat& c) {
    XTrigPoly p;
    p.set(0, TrigPoly::constant(c));
    return p;
  }

  static XTrigPoly x_power(int d, const Rat& c = 1) {
    XTrigPoly p;
    p.set(d, TrigPoly::constant(c));
    return p;
  }

  static XTrigPoly pure(const TrigPoly& t) {
    XTrigPoly p;
    p.set(0, t);
    return p;
  }

  void set(int xdeg, TrigPoly t) {
    if (xdeg >= static_cast<int>(coeff_.size())) coeff_.resize(xdeg + 1);
    coeff_[xdeg] = std::move(t);
    trim();
  }

  const TrigPoly& at(int xdeg) const {
    static const TrigPoly kZero;
    return xdeg < static_cast<int>(coeff_.size()) ? coeff_[xdeg] : kZero;
  }

  int xdegree() const { return static_cast<int>(coeff_.size()) - 1; }
  bool is_zero() const { return coeff_.empty(); }
  bool divisible_by_x() const { return coeff_.empty() || coeff_[0].is_zero(); }

  XTrigPoly& operator+=(const XTrigPoly& other) {
    if (other.coeff_.size() > coeff_.size()) coeff_.resize(other.coeff_.size());
    for (size_t d = 0; d < other.coeff_.size(); ++d) coeff_[d] += other.coeff_[d];
    trim();
    return *this;
  }

  friend XTrigPoly operator+(XTrigPoly a, const XTrigPoly& b) { return a += b; }

  XTrigPoly operator-() const {
    XTrigPoly r;
    r.coeff_.reserve(coeff_.size());
    for (const auto& t : coeff_) r.coeff_.push_back(-t);
    return r;
  }

  friend XTrigPoly operator-(XTrigPoly a, const XTrigPoly& b) { return a + (-b); }

  friend XTrigPoly operator*(const XTrigPoly& a, const XTrigPoly& b) {
    XTrigPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.coeff_.resize(a.coeff_.size() + b.coeff_.size() - 1);
    for (size_t i = 0; i < a.coeff_.size(); ++i)
      for (size_t j = 0; j < b.coeff_.size(); ++j) r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
    r.trim();
    return r;
  }

  friend XTrigPoly operator*(const Rat& s, const XTrigPoly& p) {
    XTrigPoly r;
    for (const auto& t : p.coeff_) r.coeff_.push_back(s * t);
    r.trim();
    return r;
  }

  bool operator==(const XTrigPoly& other) const { return coeff_ == other.coeff_; }

  // x d/dx applied to the coefficient function: x^d -> d x^d.
  XTrigPoly x_dx() const {
    XTrigPoly r;
    r.coeff_.resize(coeff_.size());
    for (size_t d = 1; d < coeff_.size(); ++d) r.coeff_[d] = Rat(d) * coeff_[d];
    r.trim();
    return r;
  }

  XTrigPoly dy() const {
    XTrigPoly r;
    r.coeff_.resize(coeff_.size());
    for (size_t d = 0; d < coeff_.size(); ++d) r.coeff_[d] = coeff_[d].derivative();
    r.trim();
    return r;
  }

  // Multiplication by x.
  XTrigPoly shift_x() const {
    XTrigPoly r;
    if (is_zero()) return r;
    r.coeff_.resize(coeff_.size() + 1);
    for (size_t d = 0; d < coeff_.size(); ++d) r.coeff_[d + 1] = coeff_[d];
    return r;
  }

  // Exact quotient by x; requires divisibility.
  XTrigPoly quotient_by_x() const {
    if (!divisible_by_x())
      throw ComputationError("not_divisible", "coefficient is not divisible by x");
    XTrigPoly r;
    if (coeff_.size() <= 1) return r;
    r.coeff_.assign(coeff_.begin() + 1, coeff_.end());
    return r;
  }

  double evaluate(double x, double y) const {
    double v = 0, xp = 1;
    for (const auto& t : coeff_) {
      v += xp * t.evaluate(y);
      xp *= x;
    }
    return v;
  }

  std::string str() const {
    if (coeff_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (size_t d = 0; d < coeff_.size(); ++d) {
      if (coeff_[d].is_zero()) continue;
      if (!first) out << " + ";
      first = false;
      if (d > 0) {
        out << "x";
        if (d > 1) out << "^" << d;
        out << "*";
      }
      out << "(" << coeff_[d].str() << ")";
    }
    return first ? "0" : out.str();
  }

private:
  void trim() {
    while (!coeff_.empty() && coeff_.back().is_zero()) coeff_.pop_back();
  }

  std::vector<TrigPoly> coeff_;  // index = power of x
};

}  // namespace cornerkit
