#pragma once

// Arithmetic modes. Every law in the library is templated over a scalar type:
// `Rational` (exact, GMP-backed) or `double`. A whole computation runs in one
// mode; conversion happens only at the boundaries.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

namespace sscomp {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class ArithmeticMode { exact, floating };

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
constexpr ArithmeticMode mode_of() {
  return is_exact_v<S> ? ArithmeticMode::exact : ArithmeticMode::floating;
}

std::string to_string(ArithmeticMode mode);

/// "p/q" (or "p") for rationals, shortest round-trip decimal for doubles.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

double to_double(const Rational& x);
inline double to_double(double x) { return x; }

template <class S>
S from_rational(const Rational& x) {
  if constexpr (is_exact_v<S>) {
    return x;
  } else {
    return to_double(x);
  }
}

/// Parses "p/q" or an integer into an exact rational. Throws ParseError.
Rational parse_rational(std::string_view text);

/// A user-supplied parameter: fractions and integers stay exact, decimals
/// (anything with '.', 'e' or 'E') are floating.
using Parameter = std::variant<Rational, double>;
Parameter parse_parameter(std::string_view text);
bool is_exact(const Parameter& p);
double to_double(const Parameter& p);

/// Rising factorial (x)_k = x (x+1) ... (x+k-1), (x)_0 = 1.
template <class S>
S rising(const S& x, int k) {
  S r{1};
  for (int i = 0; i < k; ++i) r *= x + S(i);
  return r;
}

template <class S>
S binomial(int n, int k) {
  if (k < 0 || k > n) return S(0);
  if (k > n - k) k = n - k;
  S r{1};
  for (int i = 1; i <= k; ++i) {
    r *= S(n - k + i);
    r /= S(i);
  }
  return r;
}

template <class S>
S factorial(int n) {
  S r{1};
  for (int i = 2; i <= n; ++i) r *= S(i);
  return r;
}

template <class S>
S abs_value(const S& x) {
  return x < S(0) ? -x : x;
}

}  // namespace sscomp
