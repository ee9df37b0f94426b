#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <k3pencil/lattice.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

using namespace k3pencil;

namespace {

CurveConfig chain(const std::string& stem, int k) {
  CurveConfig c;
  for (int i = 1; i <= k; ++i) c.labels.push_back(stem + std::to_string(i));
  for (int i = 1; i < k; ++i) c.edges.emplace_back(stem + std::to_string(i), stem + std::to_string(i + 1));
  return c;
}

void append(CurveConfig& dst, const CurveConfig& src) {
  dst.labels.insert(dst.labels.end(), src.labels.begin(), src.labels.end());
  dst.edges.insert(dst.edges.end(), src.edges.begin(), src.edges.end());
}

// Two (half+1)-chains L1..Lh, L1'..Lh' joined by the edge Lj-Lj'.
CurveConfig l_block(int h, int j) {
  CurveConfig c = chain("L", h);
  CurveConfig cp = chain("L'", h);
  append(c, cp);
  c.edges.emplace_back("L" + std::to_string(j), "L'" + std::to_string(j));
  return c;
}

CurveConfig isolated(const std::string& stem, int k) {
  CurveConfig c;
  for (int i = 1; i <= k; ++i) c.labels.push_back(stem + std::to_string(i));
  return c;
}

CurveConfig pairs(const std::string& stem, int npairs) {
  CurveConfig c;
  for (int i = 1; i <= 2 * npairs; ++i) c.labels.push_back(stem + std::to_string(i));
  for (int i = 1; i <= npairs; ++i)
    c.edges.emplace_back(stem + std::to_string(2 * i - 1), stem + std::to_string(2 * i));
  return c;
}

// 19-curve configurations of the three smooth-quotient surfaces
CurveConfig generic_config(int n) {
  CurveConfig c;
  if (n == 6) {
    c = l_block(5, 3);
    append(c, isolated("M", 1));
    append(c, pairs("N", 4));
  } else if (n == 8) {
    c = l_block(5, 4);
    append(c, isolated("M", 4));
    append(c, pairs("N", 1));
    append(c, chain("R", 3));
  } else if (n == 12) {
    c = l_block(4, 3);
    append(c, isolated("M", 3));
    append(c, pairs("N", 2));
    append(c, chain("S", 4));
  } else {
    REQUIRE(false);
  }
  REQUIRE(c.labels.size() == 19);
  return c;
}

RatVec class_vec(const IntLattice& lat, const std::map<std::string, Rational>& coeffs) {
  RatVec x(lat.basis_labels.size(), Rational(0));
  for (const auto& [label, q] : coeffs) {
    bool found = false;
    for (size_t i = 0; i < lat.basis_labels.size(); ++i)
      if (lat.basis_labels[i] == label) {
        x[i] = q;
        found = true;
        break;
      }
    REQUIRE(found);
  }
  return x;
}

std::vector<BigInt> int_class(const IntLattice& lat, const std::map<std::string, int>& coeffs) {
  std::vector<BigInt> x(lat.basis_labels.size(), 0);
  for (const auto& [label, v] : coeffs) {
    bool found = false;
    for (size_t i = 0; i < lat.basis_labels.size(); ++i)
      if (lat.basis_labels[i] == label) {
        x[i] = v;
        found = true;
        break;
      }
    REQUIRE(found);
  }
  return x;
}

RatVec scale_class(const std::vector<BigInt>& c, int p) {
  RatVec x(c.size());
  for (size_t i = 0; i < c.size(); ++i) x[i] = Rational(c[i], p);
  return x;
}

// the 3-divisible class of the degree-6 quotient: 12 curves with unit signs
std::map<std::string, int> deg6_class_l() {
  return {{"L1", 1}, {"L2", -1}, {"L4", 1}, {"L5", -1}, {"N1", 1}, {"N2", -1},
          {"N3", 1}, {"N4", -1}, {"N5", 1}, {"N6", -1}, {"N7", 1}, {"N8", -1}};
}

std::map<std::string, int> deg6_class_lp() {
  return {{"L'1", 1}, {"L'2", -1}, {"L'4", 1}, {"L'5", -1}, {"N1", 1}, {"N2", -1},
          {"N3", 1},  {"N4", -1},  {"N5", -1}, {"N6", 1},   {"N7", -1}, {"N8", 1}};
}

// the 2-divisible classes of the degree-8 quotient: 8 curves each
std::map<std::string, int> deg8_class_l() {
  return {{"L1", 1}, {"L3", 1}, {"L5", 1}, {"M1", 1}, {"M3", 1}, {"M4", 1}, {"R1", 1}, {"R3", 1}};
}

std::map<std::string, int> deg8_class_lp() {
  return {{"L'1", 1}, {"L'3", 1}, {"L'5", 1}, {"M2", 1}, {"M3", 1}, {"M4", 1}, {"R1", 1}, {"R3", 1}};
}

IntMat gram_of(const CurveConfig& c) { return gram_from_config(c).gram; }

BigInt divisor_product(const std::vector<BigInt>& ds) {
  BigInt p = 1;
  for (const auto& d : ds) p *= d;
  return p;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  IntMat r(a.size(), std::vector<BigInt>(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

}  // namespace

TEST_CASE("gram matrices from curve configurations") {
  const IntLattice a2 = gram_from_config(chain("A", 2));
  CHECK(a2.gram == IntMat{{-2, 1}, {1, -2}});
  CHECK(exact_determinant(a2.gram) == 3);

  const IntLattice single = gram_from_config(isolated("M", 1));
  CHECK(single.gram == IntMat{{-2}});

  // E8: chain of 7 with one extra node attached to the third chain vertex
  CurveConfig e8 = chain("E", 7);
  e8.labels.push_back("E8");
  e8.edges.emplace_back("E3", "E8");
  CHECK(exact_determinant(gram_of(e8)) == 1);

  CurveConfig bad = chain("A", 2);
  bad.labels.push_back("A1");
  CHECK_THROWS_AS(gram_from_config(bad), std::invalid_argument);
  bad = chain("A", 2);
  bad.edges.emplace_back("A1", "A1");
  CHECK_THROWS_AS(gram_from_config(bad), std::invalid_argument);
  bad = chain("A", 2);
  bad.edges.emplace_back("A1", "Zq");
  CHECK_THROWS_AS(gram_from_config(bad), std::invalid_argument);
  bad = chain("A", 2);
  bad.edges.emplace_back("A2", "A1");
  CHECK_THROWS_AS(gram_from_config(bad), std::invalid_argument);
}

TEST_CASE("determinants of standard ADE graphs") {
  // A_k chains: det = (-1)^k (k+1) for the (-2)-convention
  for (int k = 1; k <= 8; ++k) {
    const BigInt expect = (k % 2 ? -1 : 1) * BigInt(k + 1);
    CHECK(exact_determinant(gram_of(chain("A", k))) == expect);
  }
  // D4 star: center A2 attached to three leaves
  CurveConfig d4 = isolated("D", 4);
  d4.edges.emplace_back("D1", "D2");
  d4.edges.emplace_back("D1", "D3");
  d4.edges.emplace_back("D1", "D4");
  CHECK(exact_determinant(gram_of(d4)) == 4);

  IntMat id19(19, std::vector<BigInt>(19, 0));
  for (int i = 0; i < 19; ++i) id19[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  CHECK(exact_determinant(id19) == 1);
}

TEST_CASE("exact determinant agrees with cofactor expansion on random matrices") {
  std::mt19937 rng(20240811u);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int round = 0; round < 40; ++round) {
    IntMat m(4, std::vector<BigInt>(4));
    for (auto& row : m)
      for (auto& v : row) v = dist(rng);
    // direct cofactor expansion oracle
    BigInt det = 0;
    int idx[4] = {0, 1, 2, 3};
    std::vector<int> perm(idx, idx + 4);
    do {
      int sgn = 1;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) sgn = -sgn;
      BigInt term = sgn;
      for (int i = 0; i < 4; ++i) term *= m[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])];
      det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(exact_determinant(m) == det);
  }
}

TEST_CASE("block discriminant table for the three 19-curve configurations") {
  // degree 6 blocks
  CHECK(exact_determinant(gram_of(l_block(5, 3))) == -45);
  CHECK(exact_determinant(gram_of(isolated("M", 1))) == -2);
  CHECK(exact_determinant(gram_of(pairs("N", 4))) == 81);
  // degree 8 blocks
  CHECK(exact_determinant(gram_of(l_block(5, 4))) == -28);
  CHECK(exact_determinant(gram_of(isolated("M", 4))) == 16);
  CHECK(exact_determinant(gram_of(pairs("N", 1))) == 3);
  CHECK(exact_determinant(gram_of(chain("R", 3))) == -4);
  // degree 12 blocks
  CHECK(exact_determinant(gram_of(l_block(4, 3))) == -11);
  CHECK(exact_determinant(gram_of(isolated("M", 3))) == -8);
  CHECK(exact_determinant(gram_of(pairs("N", 2))) == 9);
  CHECK(exact_determinant(gram_of(chain("S", 4))) == 5);

  // full determinants: 2*3^6*5, 2^8*3*7, 2^3*3^2*5*11
  CHECK(exact_determinant(gram_of(generic_config(6))) == 7290);
  CHECK(exact_determinant(gram_of(generic_config(8))) == 5376);
  CHECK(exact_determinant(gram_of(generic_config(12))) == 3960);
}

TEST_CASE("block additivity: disjoint unions multiply determinants") {
  for (int n : {6, 8, 12}) {
    const CurveConfig full = generic_config(n);
    BigInt blockwise = 1;
    if (n == 6) {
      blockwise = exact_determinant(gram_of(l_block(5, 3))) * exact_determinant(gram_of(isolated("M", 1))) *
                  exact_determinant(gram_of(pairs("N", 4)));
    } else if (n == 8) {
      blockwise = exact_determinant(gram_of(l_block(5, 4))) * exact_determinant(gram_of(isolated("M", 4))) *
                  exact_determinant(gram_of(pairs("N", 1))) * exact_determinant(gram_of(chain("R", 3)));
    } else {
      blockwise = exact_determinant(gram_of(l_block(4, 3))) * exact_determinant(gram_of(isolated("M", 3))) *
                  exact_determinant(gram_of(pairs("N", 2))) * exact_determinant(gram_of(chain("S", 4)));
    }
    CHECK(exact_determinant(gram_of(full)) == blockwise);
  }
}

TEST_CASE("smith normal form: transforms, divisibility chain, invariants") {
  // identity
  IntMat id(3, std::vector<BigInt>(3, 0));
  for (int i = 0; i < 3; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  CHECK(smith_normal_form(id).divisors == std::vector<BigInt>{1, 1, 1});

  // A2 Gram: discriminant group Z3
  const auto a2 = smith_normal_form(gram_of(chain("A", 2)));
  CHECK(a2.divisors == std::vector<BigInt>{1, 3});

  // D4 Gram: discriminant group Z2 x Z2
  CurveConfig d4 = isolated("D", 4);
  d4.edges.emplace_back("D1", "D2");
  d4.edges.emplace_back("D1", "D3");
  d4.edges.emplace_back("D1", "D4");
  const auto s = smith_normal_form(gram_of(d4));
  CHECK(s.divisors == std::vector<BigInt>{1, 1, 2, 2});

  std::mt19937 rng(77020831u);
  std::uniform_int_distribution<int> dist(-6, 6);
  for (int round = 0; round < 25; ++round) {
    const size_t rows = 3 + static_cast<size_t>(round % 3);
    const size_t cols = 3 + static_cast<size_t>((round / 3) % 3);
    IntMat m(rows, std::vector<BigInt>(cols));
    for (auto& row : m)
      for (auto& v : row) v = dist(rng);
    const auto r = smith_normal_form(m);
    CHECK(mat_mul(mat_mul(r.u, m), r.v) == r.d);
    CHECK((exact_determinant(r.u) == 1 || exact_determinant(r.u) == -1));
    CHECK((exact_determinant(r.v) == 1 || exact_determinant(r.v) == -1));
    for (size_t i = 0; i + 1 < r.divisors.size(); ++i) CHECK(r.divisors[i + 1] % r.divisors[i] == 0);
    for (size_t i = 0; i < r.d.size(); ++i)
      for (size_t j = 0; j < r.d[i].size(); ++j)
        if (i != j) CHECK(r.d[i][j] == 0);
    if (rows == cols) {
      const BigInt det = exact_determinant(m);
      BigInt prod = (r.divisors.size() == rows) ? divisor_product(r.divisors) : BigInt(0);
      CHECK((det == prod || det == -prod));
    }
  }
}

TEST_CASE("determinant equals the product of elementary divisors for every lattice built") {
  for (int n : {6, 8, 12}) {
    const IntMat g = gram_of(generic_config(n));
    const auto s = smith_normal_form(g);
    CHECK(divisor_product(s.divisors) == boost::multiprecision::abs(exact_determinant(g)));
  }
}

TEST_CASE("dual membership") {
  const IntLattice v6 = gram_from_config(generic_config(6));
  // basis vectors always belong to the dual
  for (size_t i = 0; i < v6.basis_labels.size(); ++i) {
    RatVec e(v6.basis_labels.size(), Rational(0));
    e[i] = 1;
    CHECK(dual_membership(e, v6));
  }
  CHECK(dual_membership(class_vec(v6, {{"N1", Rational(1, 3)},
                                       {"N2", Rational(-1, 3)},
                                       {"N3", Rational(-1, 3)},
                                       {"N4", Rational(1, 3)}}),
                        v6));
  // not in the dual: a third of one curve of a pair
  CHECK_FALSE(dual_membership(class_vec(v6, {{"N1", Rational(1, 3)}}), v6));

  const IntLattice v12 = gram_from_config(generic_config(12));
  for (const char* m : {"M1", "M2", "M3"})
    CHECK(dual_membership(class_vec(v12, {{m, Rational(1, 2)}}), v12));

  CHECK_THROWS_AS(dual_membership(RatVec(3, Rational(0)), v6), std::invalid_argument);
}

TEST_CASE("glue extension reproduces the rank-19 overlattice discriminants") {
  // degree 6: V + {L/3, L'/3} has discriminant 2*3^2*5 = 90
  const IntLattice v6 = gram_from_config(generic_config(6));
  const auto l3 = scale_class(int_class(v6, deg6_class_l()), 3);
  const auto lp3 = scale_class(int_class(v6, deg6_class_lp()), 3);
  const auto ext6 = extend_by_glue(v6, {l3, lp3});
  CHECK(ext6.index == 9);
  CHECK(ext6.disc.determinant == 90);
  CHECK(ext6.disc.abs_discriminant == 90);
  CHECK(ext6.disc.factorization ==
        std::vector<std::pair<BigInt, int>>{{BigInt(2), 1}, {BigInt(3), 2}, {BigInt(5), 1}});

  // degree 8: V + {L/2, L'/2} has discriminant 2^4*3*7 = 336
  const IntLattice v8 = gram_from_config(generic_config(8));
  const auto m2 = scale_class(int_class(v8, deg8_class_l()), 2);
  const auto mp2 = scale_class(int_class(v8, deg8_class_lp()), 2);
  const auto ext8 = extend_by_glue(v8, {m2, mp2});
  CHECK(ext8.index == 4);
  CHECK(ext8.disc.determinant == 336);
  CHECK(ext8.disc.factorization ==
        std::vector<std::pair<BigInt, int>>{{BigInt(2), 4}, {BigInt(3), 1}, {BigInt(7), 1}});

  // extending by an integral vector changes nothing
  RatVec integral(v6.basis_labels.size(), Rational(0));
  integral[0] = 1;
  integral[1] = -2;
  const auto same = extend_by_glue(v6, {integral});
  CHECK(same.index == 1);
  CHECK(same.disc.determinant == 7290);

  // idempotence: re-adding an already-contained glue vector
  const auto again = extend_by_glue(ext6.lattice, {l3});
  CHECK(again.index == 1);
  CHECK(again.disc.determinant == 90);

  // rejected: non-integral pairing
  CHECK_THROWS_AS(extend_by_glue(v6, {class_vec(v6, {{"N1", Rational(1, 3)}})}), std::invalid_argument);
  // rejected: integral pairings but odd self-intersection
  const IntLattice two = gram_from_config(isolated("M", 2));
  CHECK_THROWS_AS(extend_by_glue(two, {RatVec{Rational(1, 2), Rational(1, 2)}}), std::invalid_argument);
  // dimension mismatch
  CHECK_THROWS_AS(extend_by_glue(v6, {RatVec(3, Rational(0))}), std::invalid_argument);
}

TEST_CASE("discriminant data for plain and glued lattices") {
  const IntLattice v12 = gram_from_config(generic_config(12));
  const auto d = discriminant_data(v12);
  CHECK(d.determinant == 3960);
  CHECK(d.abs_discriminant == 3960);
  CHECK(d.factorization ==
        std::vector<std::pair<BigInt, int>>{{BigInt(2), 3}, {BigInt(3), 2}, {BigInt(5), 1}, {BigInt(11), 1}});
  CHECK(divisor_product(d.group_invariants) == 3960);

  const IntLattice v6 = gram_from_config(generic_config(6));
  const auto ext6 = extend_by_glue(v6, {scale_class(int_class(v6, deg6_class_l()), 3),
                                        scale_class(int_class(v6, deg6_class_lp()), 3)});
  const auto d6 = discriminant_data(ext6.lattice);
  CHECK(d6.determinant == 90);
  CHECK(divisor_product(d6.group_invariants) == 90);
}

TEST_CASE("dual witnesses of the degree-8 overlattice") {
  const IntLattice v8 = gram_from_config(generic_config(8));
  const auto ext = extend_by_glue(v8, {scale_class(int_class(v8, deg8_class_l()), 2),
                                       scale_class(int_class(v8, deg8_class_lp()), 2)});
  const IntLattice& w = ext.lattice;
  // M/2 with M = M3+M4 and M'/2 with M' = M1+M2+M3 lie in the dual of the
  // extended lattice (pairing -1 with each adjoined half class)
  const auto m_half = class_vec(w, {{"M3", Rational(1, 2)}, {"M4", Rational(1, 2)}});
  const auto mp_half =
      class_vec(w, {{"M1", Rational(1, 2)}, {"M2", Rational(1, 2)}, {"M3", Rational(1, 2)}});
  CHECK(dual_membership(m_half, w));
  CHECK(dual_membership(mp_half, w));
  CHECK(lattice_pairing(w, m_half, w.glue[0]) == Rational(-1));
  CHECK(lattice_pairing(w, mp_half, w.glue[1]) == Rational(-1));

  // The quarter class R/4 with R = R1+2R2+3R3 is dual to every curve, but
  // pairs half-integrally with both adjoined half classes, so it belongs to
  // the dual of the curve span only, not to the dual of the extension.
  const auto r_quarter =
      class_vec(w, {{"R1", Rational(1, 4)}, {"R2", Rational(1, 2)}, {"R3", Rational(3, 4)}});
  CHECK(dual_membership(r_quarter, v8));
  CHECK_FALSE(dual_membership(r_quarter, w));
  CHECK(lattice_pairing(w, r_quarter, w.glue[0]) == Rational(-1, 2));
  CHECK(lattice_pairing(w, r_quarter, w.glue[1]) == Rational(-1, 2));

  // The order-4 dual element the extension really carries: the discriminant
  // group is Z2 x Z2 x Z84, whose 2-part is (Z2)^2 x Z4.
  CHECK(ext.disc.group_invariants == std::vector<BigInt>{2, 2, 84});
}

TEST_CASE("dual witnesses of the degree-6 and degree-12 lattices") {
  const IntLattice v6 = gram_from_config(generic_config(6));
  const auto ext6 = extend_by_glue(v6, {scale_class(int_class(v6, deg6_class_l()), 3),
                                        scale_class(int_class(v6, deg6_class_lp()), 3)});
  CHECK(dual_membership(class_vec(ext6.lattice, {{"N1", Rational(1, 3)},
                                                 {"N2", Rational(-1, 3)},
                                                 {"N3", Rational(-1, 3)},
                                                 {"N4", Rational(1, 3)}}),
                        ext6.lattice));
  CHECK(dual_membership(class_vec(ext6.lattice, {{"N5", Rational(1, 3)},
                                                 {"N6", Rational(-1, 3)},
                                                 {"N7", Rational(-1, 3)},
                                                 {"N8", Rational(1, 3)}}),
                        ext6.lattice));

  const IntLattice v12 = gram_from_config(generic_config(12));
  for (const char* m : {"M1", "M2", "M3"})
    CHECK(dual_membership(class_vec(v12, {{m, Rational(1, 2)}}), v12));
  CHECK(dual_membership(class_vec(v12, {{"N1", Rational(1, 3)}, {"N2", Rational(-1, 3)}}), v12));
  CHECK(dual_membership(class_vec(v12, {{"N3", Rational(1, 3)}, {"N4", Rational(-1, 3)}}), v12));
}

TEST_CASE("divisible class checks") {
  const IntLattice v6 = gram_from_config(generic_config(6));
  const auto okl = check_divisible_class(int_class(v6, deg6_class_l()), 3, v6);
  CHECK(okl.divisible);
  CHECK(okl.support == 12);
  CHECK(okl.scaled_self_intersection == Rational(-4));
  CHECK(check_divisible_class(int_class(v6, deg6_class_lp()), 3, v6).divisible);

  const IntLattice v8 = gram_from_config(generic_config(8));
  const auto okm = check_divisible_class(int_class(v8, deg8_class_l()), 2, v8);
  CHECK(okm.divisible);
  CHECK(okm.support == 8);
  CHECK(check_divisible_class(int_class(v8, deg8_class_lp()), 2, v8).divisible);

  // six curves cannot carry a 3-divisible class
  const auto small = check_divisible_class(
      int_class(v6, {{"L1", 1}, {"L2", -1}, {"L4", 1}, {"L5", -1}, {"N1", 1}, {"N2", -1}}), 3, v6);
  CHECK_FALSE(small.divisible);
  CHECK(!small.reasons.empty());

  // wrong support for p = 2
  auto nine = deg8_class_l();
  nine["M2"] = 1;
  CHECK_FALSE(check_divisible_class(int_class(v8, nine), 2, v8).divisible);

  // breaking one sign ruins the pairing conditions
  auto broken = deg6_class_l();
  broken["N2"] = 1;
  const auto rep = check_divisible_class(int_class(v6, broken), 3, v6);
  CHECK_FALSE(rep.divisible);
  CHECK(!rep.reasons.empty());

  // coefficients outside {0, +-1} are rejected with a diagnostic
  std::vector<BigInt> big(v6.basis_labels.size(), 0);
  big[0] = 2;
  CHECK_FALSE(check_divisible_class(big, 3, v6).divisible);

  CHECK_THROWS_AS(check_divisible_class(big, 5, v6), std::invalid_argument);
}
