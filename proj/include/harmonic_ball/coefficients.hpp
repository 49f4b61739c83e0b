#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

namespace harmonic_ball {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Coefficient-domain traits. Exact domains compare against zero exactly;
/// floating domains prune below a relative threshold.
template <class Coeff>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
  static constexpr bool is_exact = true;
  static bool is_zero(const Rational& c) { return c == 0; }
  static double to_double(const Rational& c) { return c.convert_to<double>(); }
  static double magnitude(const Rational& c) { return std::fabs(to_double(c)); }
  static std::string to_string(const Rational& c) { return c.str(); }
};

template <>
struct CoeffTraits<double> {
  static constexpr bool is_exact = false;
  /// Coefficients below this fraction of the largest coefficient are dropped.
  static constexpr double relative_prune = 1e-14;
  static bool is_zero(double c) { return c == 0.0; }
  static double to_double(double c) { return c; }
  static double magnitude(double c) { return std::fabs(c); }
  static std::string to_string(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
  }
};

/// Natural log of |q| for a non-zero rational, safe when |q| exceeds double range.
inline double log_abs(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::msb;
  using boost::multiprecision::numerator;
  const double direct = std::fabs(q.convert_to<double>());
  if (direct > 0.0 && std::isfinite(direct) && direct > 1e-300) return std::log(direct);
  auto log_int = [](Integer v) {
    if (v < 0) v = -v;
    const auto bits = msb(v);
    if (bits < 900) return std::log(v.convert_to<double>());
    const auto shift = bits - 60;
    Integer top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
  };
  return log_int(numerator(q)) - log_int(denominator(q));
}

}  // namespace harmonic_ball
