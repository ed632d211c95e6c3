#include "sscomp/scalar.hpp"

#include <charconv>
#include <cctype>
#include <system_error>

#include "sscomp/errors.hpp"

namespace sscomp {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? "rational" : "float";
}

std::string format_scalar(const Rational& x) { return x.str(); }

std::string format_scalar(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(text)) throw ParseError("not a fraction: '" + std::string(text) + "'");
    return Rational(boost::multiprecision::mpz_int(strip_plus(text)));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("not a fraction: '" + std::string(text) + "'");
  boost::multiprecision::mpz_int d(strip_plus(den));
  if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  return Rational(boost::multiprecision::mpz_int(strip_plus(num)), d);
}

Parameter parse_parameter(std::string_view text) {
  if (text.find_first_of(".eE") == std::string_view::npos) return parse_rational(text);
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw ParseError("not a number: '" + std::string(text) + "'");
  return value;
}

bool is_exact(const Parameter& p) { return std::holds_alternative<Rational>(p); }

double to_double(const Parameter& p) {
  return std::visit([](const auto& v) { return to_double(v); }, p);
}

}  // namespace sscomp
