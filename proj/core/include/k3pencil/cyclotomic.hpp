#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "k3pencil/rational.hpp"

namespace k3pencil {

// Element of Q(zeta), zeta a fixed primitive 120th root of unity, stored as
// 32 rational coefficients against the power basis zeta^0..zeta^31 and kept
// reduced modulo the 120th cyclotomic polynomial. The field is large enough
// to hold i, omega, gamma (8th root), eps (5th root), sqrt2, sqrt5 and every
// eigenvalue of the finite rotation groups handled downstream, so all exact
// geometry runs over this one scalar type.
class CycNum {
 public:
  static constexpr int kDegree = 32;
  static constexpr int kRootOrder = 120;

  CycNum();  // zero
  explicit CycNum(const Rational& r);
  explicit CycNum(long v);

  static CycNum zero();
  static CycNum one();
  static CycNum zeta_pow(long e);  // zeta^e, e arbitrary (taken mod 120)
  static CycNum from_coeffs(const std::array<Rational, kDegree>& c);

  // Named constants used by the group constructions.
  static CycNum imag_unit();  // i      = zeta^30
  static CycNum omega();      // e^(2*pi*i/3) = zeta^40
  static CycNum gamma8();     // e^(2*pi*i/8) = zeta^15
  static CycNum eps5();       // e^(2*pi*i/5) = zeta^24
  static CycNum sqrt2();      // gamma8 + gamma8^-1
  static CycNum sqrt5();      // 1 + 2*eps5 + 2*eps5^4
  static CycNum golden();     // (1 + sqrt5)/2

  const Rational& coeff(int k) const { return c_[static_cast<size_t>(k)]; }
  const std::array<Rational, kDegree>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;        // true iff only the constant coeff is nonzero
  const Rational& rational_part() const;  // requires is_rational()

  CycNum operator+(const CycNum& o) const;
  CycNum operator-(const CycNum& o) const;
  CycNum operator-() const;
  CycNum operator*(const CycNum& o) const;
  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);

  CycNum mul_rational(const Rational& r) const;

  // Multiplicative inverse. Throws std::domain_error on zero (division by
  // zero has no meaning anywhere in this toolkit; there are no tolerances).
  CycNum inv() const;

  // The automorphism zeta -> zeta^-1 (complex conjugation on every
  // archimedean embedding used here).
  CycNum conj() const;

  // The automorphism zeta -> zeta^t for gcd(t, 120) = 1; conj() is t = 119.
  // Throws std::invalid_argument if t is not a unit mod 120.
  CycNum galois(long t) const;

  bool operator==(const CycNum& o) const { return c_ == o.c_; }
  bool operator!=(const CycNum& o) const { return !(*this == o); }

  // Total order on canonical coefficient vectors; used only to make
  // representative choices deterministic, no numeric meaning.
  static int compare(const CycNum& a, const CycNum& b);

  // Image in F_P under zeta -> (fixed primitive 120th root mod P); a ring
  // homomorphism wherever denominators are invertible mod P, which makes it
  // usable for projective hashing. Throws if a denominator vanishes mod P.
  std::uint64_t fingerprint() const;

  std::string to_string() const;  // human-readable, e.g. "1 - 2*z^24"

 private:
  std::array<Rational, kDegree> c_;
};

inline CycNum operator*(const Rational& r, const CycNum& x) { return x.mul_rational(r); }

// Arithmetic mod P = 2^64 - 2^32 + 1 used for fingerprints. Exposed for the
// vector-level projective hashing in the geometry modules.
namespace modp {
constexpr std::uint64_t kP = 0xffffffff00000001ULL;
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
std::uint64_t add(std::uint64_t a, std::uint64_t b);
std::uint64_t pow(std::uint64_t b, std::uint64_t e);
std::uint64_t inv(std::uint64_t a);  // throws std::domain_error on 0
std::uint64_t of_bigint(const BigInt& v);
std::uint64_t of_rational(const Rational& r);
}  // namespace modp

}  // namespace k3pencil
