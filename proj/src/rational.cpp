#include "ordertypes/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ordertypes {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto bad = [&] { return std::invalid_argument("malformed rational: '" + std::string(text) + "'"); };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) throw bad();
    Integer n(std::string(num.front() == '+' ? num.substr(1) : num));
    Integer d(std::string(den.front() == '+' ? den.substr(1) : den));
    if (d == 0) throw std::invalid_argument("zero denominator in rational");
    Rational r(n, d);
    r.canonicalize();
    return r;
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    const auto frac = text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    if (!is_integer_literal(digits)) throw bad();
    for (char c : frac) {
      if (c < '0' || c > '9') throw bad();
    }
    const bool negative = digits.front() == '-';
    Integer whole(std::string(digits.front() == '+' ? digits.substr(1) : digits));
    Integer scale = 1;
    Integer fraction = 0;
    for (char c : frac) {
      scale *= 10;
      fraction = fraction * 10 + (c - '0');
    }
    if (whole < 0) whole = -whole;
    Rational r(whole * scale + fraction, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  if (!is_integer_literal(text)) throw bad();
  return Rational(Integer(std::string(text.front() == '+' ? text.substr(1) : text)));
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite coordinate");
  return Rational(value);
}

Rational dyadic_round(double value, int bits) {
  const double scaled = std::ldexp(value, bits);
  Integer num(std::round(scaled));
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace ordertypes
