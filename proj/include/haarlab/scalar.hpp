#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace haarlab {

// Exact rational backend. Expression templates are disabled so that `auto`
// always yields a value.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
concept Scalar = std::is_same_v<S, double> || std::is_same_v<S, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <Scalar S>
S from_double(double x) {
  if constexpr (is_exact_v<S>) {
    return Rational(x);  // exact binary expansion
  } else {
    return x;
  }
}

template <Scalar S>
S abs_value(const S& x) {
  return x < S(0) ? S(-x) : x;
}

// x^p for non-negative x. Exact for rationals when p is a small positive integer.
template <Scalar S>
S power(const S& x, double p) {
  if constexpr (is_exact_v<S>) {
    const double rounded = std::round(p);
    if (rounded == p && p >= 1 && p <= 64) {
      S result(1);
      for (int k = 0; k < static_cast<int>(p); ++k) result *= x;
      return result;
    }
    return Rational(std::pow(to_double(x), p));
  } else {
    return std::pow(x, p);
  }
}

// Equality test: exact for rationals, relative tolerance for floats.
template <Scalar S>
bool nearly_equal(const S& a, const S& b, double rel_tol = 1e-9) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
  }
}

// a <= b, with a relative slack for floats.
template <Scalar S>
bool less_or_close(const S& a, const S& b, double rel_tol = 1e-9) {
  if constexpr (is_exact_v<S>) {
    return a <= b;
  } else {
    return a <= b + rel_tol * std::max(std::abs(a), std::abs(b));
  }
}

}  // namespace haarlab
