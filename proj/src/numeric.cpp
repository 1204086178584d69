#include "kodaira/numeric.hpp"

#include <charconv>
#include <limits>

namespace kodaira {

namespace mp = boost::multiprecision;

Integer floor_of(const Rational& q) {
  Integer n = mp::numerator(q);
  Integer d = mp::denominator(q);
  Integer r = n / d;  // truncates toward zero
  if (n < 0 && r * d != n) r -= 1;
  return r;
}

Integer ceil_of(const Rational& q) {
  return -floor_of(-q);
}

Integer lcm_of(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return mp::abs(a / mp::gcd(a, b) * b);
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw InputError("malformed rational \"" + std::string(whole) + "\"");
    }
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return Integer(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  Integer num = parse_integer(text.substr(0, slash), text);
  Integer den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min()) {
    throw Error("integer " + z.str() + " exceeds 64-bit range");
  }
  return z.convert_to<std::int64_t>();
}

IntVec to_int_vec(const LatticePoint& p) {
  return IntVec(p.begin(), p.end());
}

RatVec to_rat_vec(const IntVec& v) {
  return RatVec(v.begin(), v.end());
}

RatVec to_rat_vec(const LatticePoint& p) {
  RatVec out;
  out.reserve(p.size());
  for (auto x : p) out.emplace_back(x);
  return out;
}

Integer dot(const IntVec& a, const IntVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const IntVec& a, const RatVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

void make_primitive(IntVec& v) {
  Integer g = 0;
  for (const auto& x : v) g = mp::gcd(g, x);
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

IntVec clear_denominators(const RatVec& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm_of(l, mp::denominator(x));
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(mp::numerator(Rational(x * l)));
  return out;
}

}  // namespace kodaira
