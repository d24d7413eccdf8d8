#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bqpmc {

using Rational = mpq_class;

// Exact conversion: every finite double is a dyadic rational.
inline Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::domain_error("to_rational: non-finite value");
  Rational r(v);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double v) { return v; }

// Accepts "3/10", "-2", "0.25" (decimal strings are read exactly).
inline Rational parse_rational(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational r(text);
    r.canonicalize();
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t exponent = text.size() - dot - 1;
  std::string den = "1" + std::string(exponent, '0');
  if (digits == "-" || digits.empty()) digits += "0";
  Rational r{mpz_class(digits), mpz_class(den)};
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Scalar traits so templated numerics can share one code path.
template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static double from(double v) { return v; }
};

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from(double v) { return to_rational(v); }
};

}  // namespace bqpmc
