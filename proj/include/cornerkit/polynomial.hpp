#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cornerkit/rational.hpp"

namespace cornerkit {

// Exponent vector, one entry per chart variable.  The std::map key order
// (lexicographic on the vector) is a monomial order compatible with
// multiplication, which is what exact division relies on.
using Monomial = std::vector<unsigned>;

// Multivariate polynomial with exact rational coefficients.
class Polynomial {
public:
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial zero(int nvars) { return Polynomial(nvars); }

  static Polynomial constant(int nvars, const Rat& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }

  static Polynomial variable(int nvars, int index) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(m, 1);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rat>& terms() const { return terms_; }

  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  Polynomial& operator+=(const Polynomial& other) {
    check_vars(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) {
    check_vars(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_vars(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.nvars_);
        for (int v = 0; v < a.nvars_; ++v) m[v] = ma[v] + mb[v];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  friend Polynomial operator*(const Rat& s, const Polynomial& p) {
    Polynomial r(p.nvars_);
    if (s == 0) return r;
    for (const auto& [m, c] : p.terms_) r.terms_.emplace(m, s * c);
    return r;
  }

  bool operator==(const Polynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

  Polynomial derivative(int var) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d[var] -= 1;
      r.add_term(d, c * Rat(m[var]));
    }
    return r;
  }

  Rat evaluate(const std::vector<Rat>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
      throw InvalidArgument("bad_point", "evaluation point has wrong dimension");
    Rat sum = 0;
    for (const auto& [m, c] : terms_) {
      Rat t = c;
      for (int v = 0; v < nvars_; ++v)
        for (unsigned e = 0; e < m[v]; ++e) t *= point[v];
      sum += t;
    }
    return sum;
  }

  double evaluate(const std::vector<double>& point) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
      double t = to_double(c);
      for (int v = 0; v < nvars_; ++v)
        for (unsigned e = 0; e < m[v]; ++e) t *= point[v];
      sum += t;
    }
    return sum;
  }

  bool divisible_by_var(int var) const {
    for (const auto& [m, c] : terms_)
      if (m[var] == 0) return false;
    return true;
  }

  // Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
      int t = 0;
      for (unsigned e : m) t += static_cast<int>(e);
      if (t > d) d = t;
    }
    return d;
  }

  // Exact quotient this / g, or nullopt when g does not divide exactly.
  // Leading-term reduction under the lexicographic monomial order: if the
  // quotient exists, every reduction step succeeds.
  std::optional<Polynomial> exact_divide(const Polynomial& g) const {
    check_vars(g);
    if (g.is_zero()) throw InvalidArgument("division_by_zero", "polynomial division by zero");
    Polynomial rem = *this;
    Polynomial quot(nvars_);
    const auto& [gm, gc] = *g.terms_.rbegin();
    while (!rem.is_zero()) {
      const auto& [rm, rc] = *rem.terms_.rbegin();
      Monomial qm(nvars_);
      for (int v = 0; v < nvars_; ++v) {
        if (rm[v] < gm[v]) return std::nullopt;
        qm[v] = rm[v] - gm[v];
      }
      Rat qc = rc / gc;
      Polynomial step(nvars_);
      step.add_term(qm, qc);
      quot += step;
      rem -= step * g;
    }
    return quot;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Print highest monomial first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const Rat& c = it->second;
      if (!first) out << (c < 0 ? " - " : " + ");
      if (first && c < 0) out << "-";
      first = false;
      Rat ac = abs(c);
      bool hasVar = false;
      for (unsigned e : it->first)
        if (e > 0) hasVar = true;
      if (ac != 1 || !hasVar) out << ac.str();
      bool needStar = (ac != 1) && hasVar;
      for (int v = 0; v < nvars_; ++v) {
        unsigned e = it->first[v];
        if (e == 0) continue;
        if (needStar) out << "*";
        needStar = true;
        out << names[v];
        if (e > 1) out << "^" << e;
      }
    }
    return out.str();
  }

private:
  void check_vars(const Polynomial& other) const {
    if (nvars_ != other.nvars_)
      throw InvalidArgument("var_mismatch", "polynomials over different variable sets");
  }

  int nvars_;
  std::map<Monomial, Rat> terms_;
};

}  // namespace cornerkit
