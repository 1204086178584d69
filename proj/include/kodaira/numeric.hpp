#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kodaira {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

// Lattice points produced by enumeration. Coordinates are bounded by the
// polytopes we can afford to enumerate, so machine integers suffice.
using LatticePoint = std::vector<std::int64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// Empty or otherwise degenerate data where a nonempty object was required.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Two independent routes to the same quantity disagreed.
class CrossCheckError : public Error {
 public:
  using Error::Error;
};

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
Integer lcm_of(const Integer& a, const Integer& b);

// Accepts "p", "-p", "p/q". The result is in lowest terms.
Rational parse_rational(std::string_view text);
// "p" when the denominator is 1, otherwise "p/q".
std::string format_rational(const Rational& q);

std::int64_t to_int64(const Integer& z);

IntVec to_int_vec(const LatticePoint& p);
RatVec to_rat_vec(const IntVec& v);
RatVec to_rat_vec(const LatticePoint& p);

Integer dot(const IntVec& a, const IntVec& b);
Rational dot(const IntVec& a, const RatVec& b);

// Divides by the gcd of the entries; the zero vector is returned unchanged.
void make_primitive(IntVec& v);

// Clears denominators: returns the smallest positive multiple of v that is
// integral.
IntVec clear_denominators(const RatVec& v);

}  // namespace kodaira
