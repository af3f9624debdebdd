#pragma once

#include <complex>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "cornerkit/trig_poly.hpp"

namespace cornerkit {

class IndicialFamily;

// Totally characteristic operator sum a_ij(x,y) (x d/dx)^i (d/dy)^j on the
// model half-cylinder [0,inf) x S^1, with exact coefficient algebra.
class BOperator {
public:
  BOperator() = default;

  static BOperator term(int i, int j, XTrigPoly coeff) {
    BOperator p;
    p.add(i, j, std::move(coeff));
    return p;
  }

  static BOperator multiplication(XTrigPoly coeff) { return term(0, 0, std::move(coeff)); }
  static BOperator x_dx() { return term(1, 0, XTrigPoly::constant(1)); }
  static BOperator dy() { return term(0, 1, XTrigPoly::constant(1)); }

  void add(int i, int j, const XTrigPoly& coeff) {
    if (coeff.is_zero()) return;
    if (i < 0 || j < 0) throw InvalidArgument("bad_term", "negative derivative order");
    auto key = std::make_pair(i, j);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, coeff);
    } else {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<std::pair<int, int>, XTrigPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int m = 0;
    for (const auto& [ij, c] : terms_) m = std::max(m, ij.first + ij.second);
    return m;
  }

  BOperator& operator+=(const BOperator& other) {
    for (const auto& [ij, c] : other.terms_) add(ij.first, ij.second, c);
    return *this;
  }

  friend BOperator operator+(BOperator a, const BOperator& b) { return a += b; }

  BOperator operator-() const {
    BOperator r;
    for (const auto& [ij, c] : terms_) r.terms_.emplace(ij, -c);
    return r;
  }

  friend BOperator operator-(BOperator a, const BOperator& b) { return a += -b; }

  friend BOperator operator*(const Rat& s, const BOperator& p) {
    BOperator r;
    for (const auto& [ij, c] : p.terms_) r.add(ij.first, ij.second, s * c);
    return r;
  }

  bool operator==(const BOperator& other) const { return terms_ == other.terms_; }

  // Left composition with x d/dx:  (x dx) a = a (x dx) + x(da/dx).
  BOperator left_x_dx() const {
    BOperator r;
    for (const auto& [ij, c] : terms_) {
      r.add(ij.first + 1, ij.second, c);
      r.add(ij.first, ij.second, c.x_dx());
    }
    return r;
  }

  // Left composition with d/dy:  dy a = a dy + (da/dy).
  BOperator left_dy() const {
    BOperator r;
    for (const auto& [ij, c] : terms_) {
      r.add(ij.first, ij.second + 1, c);
      r.add(ij.first, ij.second, c.dy());
    }
    return r;
  }

  BOperator left_multiply(const XTrigPoly& a) const {
    BOperator r;
    for (const auto& [ij, c] : terms_) r.add(ij.first, ij.second, a * c);
    return r;
  }

  // Exact operator product (*this) o rhs via the commutation rules.
  BOperator compose(const BOperator& rhs) const {
    BOperator result;
    for (const auto& [ij, a] : terms_) {
      BOperator acc = rhs;
      for (int n = 0; n < ij.second; ++n) acc = acc.left_dy();
      for (int n = 0; n < ij.first; ++n) acc = acc.left_x_dx();
      result += acc.left_multiply(a);
    }
    return result;
  }

  bool divisible_by_x() const {
    for (const auto& [ij, c] : terms_)
      if (!c.divisible_by_x()) return false;
    return true;
  }

  // The operator Q with P = x Q, when it exists.
  BOperator quotient_by_x() const {
    BOperator r;
    for (const auto& [ij, c] : terms_) r.add(ij.first, ij.second, c.quotient_by_x());
    return r;
  }

  IndicialFamily indicial_family() const;

  // Principal symbol at a base point and covector:  sum over i+j = order of
  // a_ij(base) (i xi_b)^i (i xi_y)^j.
  std::complex<double> principal_symbol(double x0, double y0, double xiB, double xiY) const {
    if (xiB == 0.0 && xiY == 0.0)
      throw InvalidArgument("zero_covector", "principal symbol needs a nonzero covector");
    const int m = order();
    const std::complex<double> ib(0.0, xiB), iy(0.0, xiY);
    std::complex<double> sum = 0.0;
    for (const auto& [ij, c] : terms_) {
      if (ij.first + ij.second != m) continue;
      std::complex<double> v = c.evaluate(x0, y0);
      for (int n = 0; n < ij.first; ++n) v *= ib;
      for (int n = 0; n < ij.second; ++n) v *= iy;
      sum += v;
    }
    return sum;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [ij, c] : terms_) {
      if (!first) out << " + ";
      first = false;
      out << "[" << c.str() << "]";
      if (ij.first > 0) {
        out << " (x*d/dx)";
        if (ij.first > 1) out << "^" << ij.first;
      }
      if (ij.second > 0) {
        out << " (d/dy)";
        if (ij.second > 1) out << "^" << ij.second;
      }
    }
    return out.str();
  }

private:
  std::map<std::pair<int, int>, XTrigPoly> terms_;
};

// Base-frozen family: polynomial in the formal symbol iota (the transform of
// x d/dx) with trig-polynomial coefficients acting through d/dy powers.
class IndicialFamily {
public:
  IndicialFamily() = default;

  void add(int iotaPow, int dyPow, const TrigPoly& coeff) {
    if (coeff.is_zero()) return;
    auto key = std::make_pair(iotaPow, dyPow);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, coeff);
    } else {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<std::pair<int, int>, TrigPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int iota_degree() const {
    int d = 0;
    for (const auto& [ij, c] : terms_) d = std::max(d, ij.first);
    return d;
  }

  bool operator==(const IndicialFamily& other) const { return terms_ == other.terms_; }

  // Composition: iota commutes with everything; d/dy passes through the
  // coefficients by the Leibniz rule.
  IndicialFamily compose(const IndicialFamily& rhs) const {
    IndicialFamily result;
    for (const auto& [ij1, c1] : terms_) {
      for (const auto& [ij2, c2] : rhs.terms_) {
        // dy^j1 (c2 dy^j2) = sum_s C(j1,s) (d^s c2) dy^(j1-s+j2)
        const int j1 = ij1.second;
        TrigPoly derived = c2;
        Rat binom = 1;
        for (int s = 0; s <= j1; ++s) {
          if (s > 0) {
            binom = binom * Rat(j1 - s + 1) / Rat(s);
            derived = derived.derivative();
          }
          result.add(ij1.first + ij2.first, j1 - s + ij2.second, binom * (c1 * derived));
        }
      }
    }
    return result;
  }

  // Evaluation at iota = i*tau for real rational tau: an exact ordinary
  // differential operator in y with Gaussian-rational coefficients, stored as
  // (real part, imaginary part) per d/dy power.
  struct Pencil {
    std::map<int, std::pair<TrigPoly, TrigPoly>> coeff;  // dy power -> (re, im)

    bool operator==(const Pencil& other) const { return coeff == other.coeff; }
    bool is_real() const {
      for (const auto& [j, ri] : coeff)
        if (!ri.second.is_zero()) return false;
      return true;
    }
  };

  Pencil evaluate(const Rat& tau) const {
    Pencil p;
    for (const auto& [ij, c] : terms_) {
      Rat tpow = 1;
      for (int n = 0; n < ij.first; ++n) tpow *= tau;
      // i^i cycles 1, i, -1, -i.
      TrigPoly re, im;
      switch (ij.first % 4) {
        case 0: re = tpow * c; break;
        case 1: im = tpow * c; break;
        case 2: re = -(tpow * c); break;
        case 3: im = -(tpow * c); break;
      }
      auto& slot = p.coeff[ij.second];
      slot.first += re;
      slot.second += im;
    }
    for (auto it = p.coeff.begin(); it != p.coeff.end();) {
      if (it->second.first.is_zero() && it->second.second.is_zero())
        it = p.coeff.erase(it);
      else
        ++it;
    }
    return p;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [ij, c] : terms_) {
      if (!first) out << " + ";
      first = false;
      out << "[" << c.str() << "]";
      if (ij.first > 0) {
        out << " iota";
        if (ij.first > 1) out << "^" << ij.first;
      }
      if (ij.second > 0) {
        out << " (d/dy)";
        if (ij.second > 1) out << "^" << ij.second;
      }
    }
    return out.str();
  }

private:
  std::map<std::pair<int, int>, TrigPoly> terms_;
};

inline IndicialFamily BOperator::indicial_family() const {
  IndicialFamily f;
  for (const auto& [ij, c] : terms_) f.add(ij.first, ij.second, c.at(0));
  return f;
}

// Finite scan deciding ellipticity of the principal symbol on a grid of base
// points and unit covectors.  Exact nonvanishing is undecidable; the grid and
// threshold are the documented surrogate.
struct EllipticityGrid {
  int base_x = 4;
  int base_y = 8;
  int covectors = 64;
  double x_max = 1.0;
  double threshold = 1e-12;
};

inline bool is_elliptic(const BOperator& p, const EllipticityGrid& grid = {}) {
  const double twoPi = 6.283185307179586476925286766559;
  for (int bx = 0; bx < grid.base_x; ++bx) {
    const double x0 = grid.base_x == 1 ? 0.0 : grid.x_max * bx / (grid.base_x - 1);
    for (int by = 0; by < grid.base_y; ++by) {
      const double y0 = twoPi * by / grid.base_y;
      for (int c = 0; c < grid.covectors; ++c) {
        const double phi = twoPi * c / grid.covectors;
        const auto s = p.principal_symbol(x0, y0, std::cos(phi), std::sin(phi));
        if (std::abs(s) <= grid.threshold) return false;
      }
    }
  }
  return true;
}

}  // namespace cornerkit
