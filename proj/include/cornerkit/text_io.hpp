#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cornerkit/b_operator.hpp"
#include "cornerkit/graded_mesh.hpp"
#include "cornerkit/polygon.hpp"
#include "cornerkit/vector_field.hpp"

namespace cornerkit {

// ---------------------------------------------------------------------------
// atomic file output: write to a temporary sibling, then rename
// ---------------------------------------------------------------------------

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("io_error", "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ComputationError("io_error", "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

// 17 significant digits: enough to make doubles round-trip, so determinism
// is checkable byte for byte.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  return line;
}

// ---------------------------------------------------------------------------
// key = value file scanning (lines, '#' comments)
// ---------------------------------------------------------------------------

struct KeyValueLine {
  std::string key;
  std::string value;
};

inline std::vector<KeyValueLine> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("io_error", "cannot read " + path.string());
  std::vector<KeyValueLine> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      // blank or malformed; only blank is allowed
      bool blank = true;
      for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) throw InvalidArgument("bad_line", "expected 'key = value': " + raw);
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    lines.push_back({trim(raw.substr(0, eq)), trim(raw.substr(eq + 1))});
  }
  return lines;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// ---------------------------------------------------------------------------
// polynomial expression parsing (sums of monomials over named variables)
// ---------------------------------------------------------------------------

namespace parse_detail {

struct Cursor {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::string s;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      s += text[pos++];
    }
    return s;
  }
  std::string number() {
    skip_ws();
    std::string s;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) s += text[pos++];
    if (pos < text.size() && text[pos] == '/') {
      s += text[pos++];
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) s += text[pos++];
    }
    return s;
  }
  unsigned uint() {
    skip_ws();
    std::string s;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) s += text[pos++];
    if (s.empty()) throw InvalidArgument("parse_error", "expected integer in '" + text + "'");
    return static_cast<unsigned>(std::stoul(s));
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InvalidArgument("parse_error", what + " at position " + std::to_string(pos) + " in '" +
                                             text + "'");
  }
};

}  // namespace parse_detail

// Monomial-sum expressions like "2*x^2*y - 1/3*x + 4" over the chart names.
inline Polynomial parse_polynomial(const std::string& text,
                                   const std::vector<std::string>& names) {
  using parse_detail::Cursor;
  const int n = static_cast<int>(names.size());
  Polynomial poly(n);
  Cursor c{text};
  bool first = true;
  while (!c.done()) {
    Rat sign = 1;
    if (c.accept('-'))
      sign = -1;
    else if (c.accept('+'))
      sign = 1;
    else if (!first)
      c.fail("expected '+' or '-'");
    first = false;

    Rat coef = sign;
    Monomial mono(n, 0);
    bool any = false;
    for (;;) {
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        coef *= parse_rational(c.number());
        any = true;
      } else if (std::isalpha(static_cast<unsigned char>(c.peek())) || c.peek() == '_') {
        std::string id = c.ident();
        int var = -1;
        for (int v = 0; v < n; ++v)
          if (names[v] == id) var = v;
        if (var < 0) c.fail("unknown variable '" + id + "'");
        unsigned e = 1;
        if (c.accept('^')) e = c.uint();
        mono[var] += e;
        any = true;
      } else {
        c.fail("expected a number or variable");
      }
      if (!c.accept('*')) break;
    }
    if (!any) c.fail("empty term");
    poly.add_term(mono, coef);
  }
  return poly;
}

// Coefficients of b-operators: polynomials in x with cos(k*y), sin(k*y)
// factors, e.g. "x^2*sin(2*y) + 3/2*cos(y) - 1".
inline XTrigPoly parse_xtrig(const std::string& text) {
  using parse_detail::Cursor;
  XTrigPoly out;
  Cursor c{text};
  bool first = true;
  while (!c.done()) {
    Rat sign = 1;
    if (c.accept('-'))
      sign = -1;
    else if (c.accept('+'))
      sign = 1;
    else if (!first)
      c.fail("expected '+' or '-'");
    first = false;

    Rat coef = sign;
    int xpow = 0;
    TrigPoly trig = TrigPoly::constant(1);
    for (;;) {
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        coef *= parse_rational(c.number());
      } else {
        std::string id = c.ident();
        if (id == "x") {
          unsigned e = 1;
          if (c.accept('^')) e = c.uint();
          xpow += e;
        } else if (id == "sin" || id == "cos") {
          if (!c.accept('(')) c.fail("expected '(' after " + id);
          unsigned k = 1;
          if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            k = c.uint();
            if (!c.accept('*')) c.fail("expected '*' between mode and y");
          }
          if (c.ident() != "y") c.fail("expected 'y' inside " + id);
          if (!c.accept(')')) c.fail("expected ')'");
          trig = trig * (id == "sin" ? TrigPoly::sine(static_cast<int>(k))
                                     : TrigPoly::cosine(static_cast<int>(k)));
        } else {
          c.fail("expected a number, x, sin(..) or cos(..)");
        }
      }
      if (!c.accept('*')) break;
    }
    XTrigPoly term;
    term.set(xpow, coef * trig);
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// vfcheck module files
// ---------------------------------------------------------------------------

struct VfFile {
  VectorFieldModule module;
  std::vector<std::vector<Rat>> points;  // isotropy evaluation points
};

inline VfFile parse_vf_file(const std::filesystem::path& path) {
  int dim = -1, boundary = -1;
  std::vector<std::string> names;
  std::vector<VectorField> gens;
  std::vector<std::vector<Rat>> points;
  std::optional<CornerChart> chart;

  auto require_chart = [&]() -> CornerChart& {
    if (!chart) {
      if (dim <= 0 || boundary < 0)
        throw InvalidArgument("bad_file", "dim and boundary must come before gen/point lines");
      if (names.empty())
        chart.emplace(dim, boundary);
      else
        chart.emplace(dim, boundary, names);
    }
    return *chart;
  };

  for (const auto& [key, value] : read_key_value_file(path)) {
    if (key == "dim") {
      dim = std::stoi(value);
    } else if (key == "boundary") {
      boundary = std::stoi(value);
    } else if (key == "vars") {
      std::istringstream in(value);
      std::string w;
      while (in >> w) names.push_back(w);
    } else if (key == "gen") {
      CornerChart& ch = require_chart();
      auto parts = split(value, ';');
      if (static_cast<int>(parts.size()) != ch.dim)
        throw InvalidArgument("bad_file", "generator needs one coefficient per coordinate");
      std::vector<Polynomial> coeffs;
      for (const auto& part : parts) coeffs.push_back(parse_polynomial(part, ch.names));
      gens.emplace_back(ch, std::move(coeffs));
    } else if (key == "point") {
      CornerChart& ch = require_chart();
      auto parts = split(value, ';');
      if (static_cast<int>(parts.size()) != ch.dim)
        throw InvalidArgument("bad_file", "point needs one coordinate per dimension");
      std::vector<Rat> pt;
      for (auto& part : parts) {
        auto trimmed = part;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        pt.push_back(parse_rational(trimmed));
      }
      points.push_back(std::move(pt));
    } else {
      throw InvalidArgument("unknown_key", "unknown key '" + key + "' in " + path.string());
    }
  }
  CornerChart& ch = require_chart();
  return VfFile{VectorFieldModule(ch, std::move(gens)), std::move(points)};
}

// ---------------------------------------------------------------------------
// b-operator files
// ---------------------------------------------------------------------------

inline BOperator parse_boperator_file(const std::filesystem::path& path) {
  BOperator op;
  bool any = false;
  for (const auto& [key, value] : read_key_value_file(path)) {
    if (key != "term")
      throw InvalidArgument("unknown_key", "unknown key '" + key + "' in " + path.string());
    const auto colon = value.find(':');
    if (colon == std::string::npos)
      throw InvalidArgument("bad_file", "term needs 'i j : coefficient': " + value);
    std::istringstream head(value.substr(0, colon));
    int i = -1, j = -1;
    head >> i >> j;
    if (i < 0 || j < 0) throw InvalidArgument("bad_file", "term orders must be nonnegative");
    op.add(i, j, parse_xtrig(value.substr(colon + 1)));
    any = true;
  }
  if (!any) throw InvalidArgument("bad_file", "operator file has no terms");
  return op;
}

// ---------------------------------------------------------------------------
// polygon files
// ---------------------------------------------------------------------------

struct PolygonFile {
  Polygon polygon;
  std::vector<double> kappa;  // empty when absent
};

inline double parse_coordinate(const std::string& text) {
  if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
  size_t used = 0;
  double v = std::stod(text, &used);
  return v;
}

inline PolygonFile parse_polygon_file(const std::filesystem::path& path) {
  std::vector<Vec2> verts;
  std::vector<double> kappa;
  for (const auto& [key, value] : read_key_value_file(path)) {
    if (key == "v") {
      std::istringstream in(value);
      std::string sx, sy;
      if (!(in >> sx >> sy))
        throw InvalidArgument("bad_file", "vertex needs two coordinates: " + value);
      verts.push_back({parse_coordinate(sx), parse_coordinate(sy)});
    } else if (key == "kappa") {
      std::istringstream in(value);
      std::string s;
      while (in >> s) kappa.push_back(parse_coordinate(s));
    } else {
      throw InvalidArgument("unknown_key", "unknown key '" + key + "' in " + path.string());
    }
  }
  return PolygonFile{Polygon(std::move(verts)), std::move(kappa)};
}

// Plain-text mesh export: one node per line, then one triangle per line.
inline std::string mesh_to_text(const GradedMesh& mesh) {
  std::ostringstream out;
  out << "nodes " << mesh.nodes.size() << "\n";
  for (const auto& p : mesh.nodes)
    out << format_double(p.x) << " " << format_double(p.y) << "\n";
  out << "triangles " << mesh.tris.size() << "\n";
  for (const auto& t : mesh.tris) out << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
  return out.str();
}

}  // namespace cornerkit
