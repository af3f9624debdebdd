#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "cornerkit/errors.hpp"

namespace cornerkit {

// Exact arbitrary-precision rational scalar used by all symbolic modules.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Accepts "n", "-n", "n/d" with optional sign on the numerator.
inline Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero_denominator", "rational with zero denominator: " + text);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw InvalidArgument("bad_rational", "cannot parse rational: '" + text + "'");
  }
}

inline std::string to_string(const Rat& r) { return r.str(); }

}  // namespace cornerkit
