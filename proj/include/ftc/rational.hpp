#ifndef FTC_RATIONAL_HPP
#define FTC_RATIONAL_HPP

#include <string>
#include <string_view>

#include "ftc/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace ftc {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// "p/q" with the denominator always present ("5/1").
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

/// Accepts "p/q", integers and plain decimals ("0.25"), all converted exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  // BigInt's string constructor reads a leading 0 as octal
  auto integer = [](std::string d) {
    const auto nz = d.find_first_not_of('0');
    return BigInt(nz == std::string::npos ? std::string("0") : d.substr(nz));
  };
  auto bad = [&] { return PreconditionError("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto digits = [](std::string_view d, bool sign_ok) {
    if (sign_ok && !d.empty() && (d[0] == '-' || d[0] == '+')) d.remove_prefix(1);
    if (d.empty()) return false;
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!digits(a, true) || !digits(b, false)) throw bad();
    BigInt den = integer(b);
    if (den == 0) throw bad();
    const bool neg = a[0] == '-';
    if (a[0] == '-' || a[0] == '+') a.erase(0, 1);
    Rational r = Rational(integer(a)) / Rational(den);
    return neg ? Rational(-r) : r;
  }
  std::string whole = s, frac;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    whole = s.substr(0, dot);
    frac = s.substr(dot + 1);
    if (frac.empty() || !digits(frac, false)) throw bad();
  }
  const bool neg = !whole.empty() && whole[0] == '-';
  if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
  if (whole.empty()) whole = "0";
  if (!digits(whole, false)) throw bad();
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Rational r = Rational(integer(whole + frac)) / Rational(scale);
  return neg ? Rational(-r) : r;
}

}  // namespace ftc

#endif  // FTC_RATIONAL_HPP
