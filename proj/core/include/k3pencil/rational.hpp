#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace k3pencil {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision fraction, always reduced, denominator > 0.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

// Parses "a" or "a/b". Throws std::invalid_argument on malformed input.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
}

// Prime factorization by trial division; fine for the magnitudes that occur
// in lattice discriminants here.
inline std::map<BigInt, int> factorize(BigInt v) {
  if (v < 0) v = -v;
  if (v == 0) throw std::domain_error("factorize: zero has no factorization");
  std::map<BigInt, int> out;
  for (BigInt p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
    while (v % p == 0) {
      ++out[p];
      v /= p;
    }
  }
  if (v > 1) ++out[v];
  return out;
}

// "2^3*3^2*5*11" style rendering of a factorization; "1" for empty.
inline std::string format_factorization(const std::map<BigInt, int>& f) {
  if (f.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : f) {
    if (!first) os << "*";
    first = false;
    os << p.str();
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

}  // namespace k3pencil
