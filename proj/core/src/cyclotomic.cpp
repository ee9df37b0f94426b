#include "k3pencil/cyclotomic.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace k3pencil {

namespace modp {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s < a || s >= kP) s -= kP;
  return s;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % kP);
}

std::uint64_t pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a) {
  if (a == 0) throw std::domain_error("modp::inv: zero is not invertible");
  return pow(a, kP - 2);
}

std::uint64_t of_bigint(const BigInt& v) {
  BigInt m = v % BigInt(kP);
  if (m < 0) m += BigInt(kP);
  return m.convert_to<std::uint64_t>();
}

std::uint64_t of_rational(const Rational& r) {
  std::uint64_t d = of_bigint(rat_den(r));
  if (d == 0)
    throw std::domain_error("fingerprint: denominator vanishes mod P");
  return mul(of_bigint(rat_num(r)), inv(d));
}

}  // namespace modp

namespace {

using ZPoly = std::vector<BigInt>;  // dense, index = degree

void strip(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, BigInt(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  strip(r);
  return r;
}

// Exact division of integer polynomials; the divisor must be monic here
// (cyclotomic polynomials are), so no fractions appear.
ZPoly div_exact(ZPoly num, const ZPoly& den) {
  strip(num);
  if (den.empty() || den.back() != 1)
    throw std::logic_error("div_exact: divisor must be monic");
  if (num.size() < den.size()) {
    if (!num.empty()) throw std::logic_error("div_exact: not divisible");
    return {};
  }
  ZPoly q(num.size() - den.size() + 1, BigInt(0));
  for (size_t k = q.size(); k-- > 0;) {
    BigInt c = num[k + den.size() - 1];
    q[k] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
  }
  for (const BigInt& c : num)
    if (c != 0) throw std::logic_error("div_exact: nonzero remainder");
  return q;
}

// n-th cyclotomic polynomial via Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d.
const ZPoly& cyclotomic_poly(int n) {
  static std::map<int, ZPoly> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  ZPoly num(static_cast<size_t>(n) + 1, BigInt(0));
  num[0] = -1;
  num[static_cast<size_t>(n)] = 1;
  ZPoly acc{BigInt(1)};
  for (int d = 1; d < n; ++d)
    if (n % d == 0) acc = mul(acc, cyclotomic_poly(d));
  return memo.emplace(n, div_exact(std::move(num), acc)).first->second;
}

struct Tables {
  // Sparse integer expansion of zeta^e in the basis zeta^0..zeta^31,
  // for e = 0..119; entries are (basis index, coefficient).
  std::array<std::vector<std::pair<int, BigInt>>, CycNum::kRootOrder> pow_rows;
  // Fingerprint data: powers of a primitive 120th root of unity mod P.
  std::array<std::uint64_t, CycNum::kRootOrder> zeta_img;
};

Tables build_tables() {
  Tables t;
  const ZPoly& phi = cyclotomic_poly(CycNum::kRootOrder);
  if (phi.size() != CycNum::kDegree + 1 || phi.back() != 1)
    throw std::logic_error("cyclotomic table: unexpected Phi_120");

  // x^32 rewritten into lower powers.
  std::array<BigInt, CycNum::kDegree> top_row;
  for (int j = 0; j < CycNum::kDegree; ++j) top_row[static_cast<size_t>(j)] = -phi[static_cast<size_t>(j)];

  std::array<BigInt, CycNum::kDegree> cur{};
  cur[0] = 1;
  for (int e = 0; e < CycNum::kRootOrder; ++e) {
    auto& row = t.pow_rows[static_cast<size_t>(e)];
    for (int j = 0; j < CycNum::kDegree; ++j)
      if (cur[static_cast<size_t>(j)] != 0) row.emplace_back(j, cur[static_cast<size_t>(j)]);
    // advance: multiply by zeta
    BigInt carry = cur[CycNum::kDegree - 1];
    for (int j = CycNum::kDegree - 1; j > 0; --j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)];
    cur[0] = 0;
    if (carry != 0)
      for (int j = 0; j < CycNum::kDegree; ++j)
        if (top_row[static_cast<size_t>(j)] != 0) cur[static_cast<size_t>(j)] += carry * top_row[static_cast<size_t>(j)];
  }
  // after 120 steps cur must be back at 1 (zeta^120 = 1)
  if (cur[0] != 1) throw std::logic_error("cyclotomic table: zeta^120 != 1");
  for (int j = 1; j < CycNum::kDegree; ++j)
    if (cur[static_cast<size_t>(j)] != 0) throw std::logic_error("cyclotomic table: zeta^120 != 1");

  // Fingerprint root: g^((P-1)/120) for a primitive root g of F_P.
  const std::uint64_t order = modp::kP - 1;
  const std::uint64_t prime_factors[] = {2, 3, 5, 17, 257, 65537};
  std::uint64_t g = 0;
  for (std::uint64_t cand = 3; cand < 100; ++cand) {
    bool ok = true;
    for (std::uint64_t q : prime_factors)
      if (modp::pow(cand, order / q) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = cand;
      break;
    }
  }
  if (g == 0) throw std::logic_error("fingerprint: no primitive root found");
  std::uint64_t z = modp::pow(g, order / CycNum::kRootOrder);
  if (modp::pow(z, 60) == 1 || modp::pow(z, 40) == 1 || modp::pow(z, 24) == 1)
    throw std::logic_error("fingerprint: root has wrong order");
  std::uint64_t acc = 1;
  for (int k = 0; k < CycNum::kRootOrder; ++k) {
    t.zeta_img[static_cast<size_t>(k)] = acc;
    acc = modp::mul(acc, z);
  }
  if (acc != 1) throw std::logic_error("fingerprint: root order mismatch");
  return t;
}

const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

}  // namespace

CycNum::CycNum() = default;

CycNum::CycNum(const Rational& r) { c_[0] = r; }

CycNum::CycNum(long v) { c_[0] = Rational(v); }

CycNum CycNum::zero() { return CycNum(); }

CycNum CycNum::one() { return CycNum(1L); }

CycNum CycNum::zeta_pow(long e) {
  long m = e % kRootOrder;
  if (m < 0) m += kRootOrder;
  CycNum r;
  for (const auto& [idx, coef] : tables().pow_rows[static_cast<size_t>(m)])
    r.c_[static_cast<size_t>(idx)] = Rational(coef);
  return r;
}

CycNum CycNum::from_coeffs(const std::array<Rational, kDegree>& c) {
  CycNum r;
  r.c_ = c;
  return r;
}

CycNum CycNum::imag_unit() { return zeta_pow(30); }
CycNum CycNum::omega() { return zeta_pow(40); }
CycNum CycNum::gamma8() { return zeta_pow(15); }
CycNum CycNum::eps5() { return zeta_pow(24); }
CycNum CycNum::sqrt2() { return zeta_pow(15) + zeta_pow(-15); }

CycNum CycNum::sqrt5() {
  CycNum r = one();
  r += zeta_pow(24).mul_rational(Rational(2));
  r += zeta_pow(96).mul_rational(Rational(2));
  return r;
}

CycNum CycNum::golden() {
  CycNum r = one();
  r += zeta_pow(24);
  r += zeta_pow(96);
  return r;
}

bool CycNum::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool CycNum::is_rational() const {
  for (int k = 1; k < kDegree; ++k)
    if (c_[static_cast<size_t>(k)] != 0) return false;
  return true;
}

const Rational& CycNum::rational_part() const {
  if (!is_rational())
    throw std::domain_error("rational_part: value is not rational: " + to_string());
  return c_[0];
}

CycNum CycNum::operator+(const CycNum& o) const {
  CycNum r = *this;
  r += o;
  return r;
}

CycNum CycNum::operator-(const CycNum& o) const {
  CycNum r = *this;
  r -= o;
  return r;
}

CycNum CycNum::operator-() const {
  CycNum r;
  for (int k = 0; k < kDegree; ++k) r.c_[static_cast<size_t>(k)] = -c_[static_cast<size_t>(k)];
  return r;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  for (int k = 0; k < kDegree; ++k) c_[static_cast<size_t>(k)] += o.c_[static_cast<size_t>(k)];
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
  for (int k = 0; k < kDegree; ++k) c_[static_cast<size_t>(k)] -= o.c_[static_cast<size_t>(k)];
  return *this;
}

CycNum CycNum::operator*(const CycNum& o) const {
  // convolution up to degree 62, then reduce the overflow exponents with the
  // precomputed rewrite rows.  Each factor is put over a common denominator
  // first so the convolution runs in plain integers; per-coefficient rational
  // arithmetic (a gcd for every operation) would dominate otherwise.
  BigInt da = 1, db = 1;
  std::array<int, kDegree> nza{}, nzb{};
  int na = 0, nb = 0;
  for (int k = 0; k < kDegree; ++k) {
    const Rational& a = c_[static_cast<size_t>(k)];
    if (a != 0) {
      nza[static_cast<size_t>(na++)] = k;
      da = boost::multiprecision::lcm(da, rat_den(a));
    }
    const Rational& b = o.c_[static_cast<size_t>(k)];
    if (b != 0) {
      nzb[static_cast<size_t>(nb++)] = k;
      db = boost::multiprecision::lcm(db, rat_den(b));
    }
  }
  CycNum r;
  if (na == 0 || nb == 0) return r;
  std::array<BigInt, kDegree> ia, ib;
  for (int t = 0; t < na; ++t) {
    const Rational& a = c_[static_cast<size_t>(nza[static_cast<size_t>(t)])];
    ia[static_cast<size_t>(t)] = rat_num(a) * (da / rat_den(a));
  }
  for (int t = 0; t < nb; ++t) {
    const Rational& b = o.c_[static_cast<size_t>(nzb[static_cast<size_t>(t)])];
    ib[static_cast<size_t>(t)] = rat_num(b) * (db / rat_den(b));
  }
  std::array<BigInt, 2 * kDegree - 1> acc;
  for (int s = 0; s < na; ++s)
    for (int t = 0; t < nb; ++t)
      acc[static_cast<size_t>(nza[static_cast<size_t>(s)] + nzb[static_cast<size_t>(t)])] +=
          ia[static_cast<size_t>(s)] * ib[static_cast<size_t>(t)];
  const auto& rows = tables().pow_rows;
  for (int e = kDegree; e <= 2 * kDegree - 2; ++e) {
    const BigInt& v = acc[static_cast<size_t>(e)];
    if (v == 0) continue;
    for (const auto& [idx, coef] : rows[static_cast<size_t>(e)]) acc[static_cast<size_t>(idx)] += v * coef;
  }
  const BigInt den = da * db;
  for (int k = 0; k < kDegree; ++k)
    if (acc[static_cast<size_t>(k)] != 0)
      r.c_[static_cast<size_t>(k)] = Rational(std::move(acc[static_cast<size_t>(k)]), den);
  return r;
}

CycNum& CycNum::operator*=(const CycNum& o) {
  *this = *this * o;
  return *this;
}

CycNum CycNum::mul_rational(const Rational& r) const {
  CycNum out;
  if (r == 0) return out;
  for (int k = 0; k < kDegree; ++k) out.c_[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)] * r;
  return out;
}

CycNum CycNum::inv() const {
  // fast paths: rationals and monomials c*zeta^k invert directly
  int nz = -1;
  bool monomial = true;
  for (int k = 0; k < kDegree; ++k) {
    if (c_[static_cast<size_t>(k)] == 0) continue;
    if (nz >= 0) {
      monomial = false;
      break;
    }
    nz = k;
  }
  if (nz < 0) throw std::domain_error("CycNum::inv: division by zero");
  if (monomial) {
    Rational ci = Rational(1) / c_[static_cast<size_t>(nz)];
    if (nz == 0) return CycNum(ci);
    return zeta_pow(kRootOrder - nz).mul_rational(ci);
  }
  // general case: a^-1 = (prod of the other Galois conjugates) / Norm(a);
  // the norm is rational because the conjugate product is Galois-invariant.
  // Instead of multiplying all 31 conjugates we climb a chain of subgroups of
  // (Z/120)^*: each generator g below doubles the subgroup generated so far
  // ({1} < <49> < <49,97> < ... ), and one step extends the partial norm via
  //   cof' = cof * sigma_g(nrm),  nrm' = a * cof',
  // so nrm always equals the product of a's conjugates over the subgroup built
  // so far.  Five steps cover the whole group.  When the support of a lies in
  // d*Z the value belongs to the subfield Q(zeta_{120/d}); generators acting
  // trivially there (g = 1 mod 120/d) are skipped, which shrinks the tower to
  // the relative Galois group of that subfield (a single conjugation for Q(i)).
  long d = static_cast<long>(kRootOrder);
  for (int k = 1; k < kDegree; ++k)
    if (c_[static_cast<size_t>(k)] != 0) d = std::gcd(d, static_cast<long>(k));
  const long m = static_cast<long>(kRootOrder) / d;
  static constexpr long kChain[] = {49, 97, 41, 61, 91};
  CycNum cof(Rational(1));
  CycNum nrm = *this;
  for (long g : kChain) {
    if (g % m == 1) continue;
    cof = cof * nrm.galois(g);
    nrm = *this * cof;
  }
  if (!nrm.is_rational() || nrm.c_[0] == 0)
    throw std::logic_error("CycNum::inv: norm computation failed");
  return cof.mul_rational(Rational(1) / nrm.c_[0]);
}

CycNum CycNum::conj() const { return galois(kRootOrder - 1); }

CycNum CycNum::galois(long t) const {
  long m = t % kRootOrder;
  if (m < 0) m += kRootOrder;
  if (std::gcd(m, static_cast<long>(kRootOrder)) != 1)
    throw std::invalid_argument("CycNum::galois: exponent not a unit mod 120");
  CycNum r;
  r.c_[0] = c_[0];
  const auto& rows = tables().pow_rows;
  for (int k = 1; k < kDegree; ++k) {
    const Rational& v = c_[static_cast<size_t>(k)];
    if (v == 0) continue;
    for (const auto& [idx, coef] : rows[static_cast<size_t>((k * m) % kRootOrder)])
      r.c_[static_cast<size_t>(idx)] += v * Rational(coef);
  }
  return r;
}

int CycNum::compare(const CycNum& a, const CycNum& b) {
  for (int k = 0; k < kDegree; ++k) {
    if (a.c_[static_cast<size_t>(k)] < b.c_[static_cast<size_t>(k)]) return -1;
    if (b.c_[static_cast<size_t>(k)] < a.c_[static_cast<size_t>(k)]) return 1;
  }
  return 0;
}

std::uint64_t CycNum::fingerprint() const {
  const auto& img = tables().zeta_img;
  std::uint64_t acc = 0;
  for (int k = 0; k < kDegree; ++k) {
    const Rational& c = c_[static_cast<size_t>(k)];
    if (c == 0) continue;
    acc = modp::add(acc, modp::mul(modp::of_rational(c), img[static_cast<size_t>(k)]));
  }
  return acc;
}

std::string CycNum::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < kDegree; ++k) {
    const Rational& c = c_[static_cast<size_t>(k)];
    if (c == 0) continue;
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (k == 0) {
      os << k3pencil::to_string(a);
    } else {
      if (a != 1) os << k3pencil::to_string(a) << "*";
      os << "z^" << k;
    }
  }
  return os.str();
}

}  // namespace k3pencil
