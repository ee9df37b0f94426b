#include <k3pencil/lattice.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace k3pencil {

namespace {

BigInt bi_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

IntMat identity_mat(size_t n) {
  IntMat m(n, std::vector<BigInt>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void check_square(const IntMat& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw std::invalid_argument("matrix is not square");
}

// Rational matrix-vector product against the integer Gram matrix.
RatVec gram_apply(const IntMat& g, const RatVec& x) {
  RatVec out(g.size(), Rational(0));
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j)
      if (g[i][j] != 0 && x[j] != 0) out[i] += Rational(g[i][j]) * x[j];
  return out;
}

// Row echelon form over the integers via gcd elimination; row operations are
// unimodular, so the nonzero rows are a basis of the row space as a Z-module.
// Returns the nonzero rows (pivots positive, staircase order).
IntMat hermite_rows(IntMat a) {
  const size_t rows = a.size();
  if (rows == 0) return a;
  const size_t cols = a[0].size();
  size_t cur = 0;
  for (size_t col = 0; col < cols && cur < rows; ++col) {
    for (;;) {
      size_t best = rows;
      for (size_t r = cur; r < rows; ++r)
        if (a[r][col] != 0 && (best == rows || bi_abs(a[r][col]) < bi_abs(a[best][col]))) best = r;
      if (best == rows) break;
      std::swap(a[cur], a[best]);
      bool clean = true;
      for (size_t r = cur + 1; r < rows; ++r) {
        if (a[r][col] == 0) continue;
        const BigInt q = a[r][col] / a[cur][col];
        if (q != 0)
          for (size_t j = col; j < cols; ++j) a[r][j] -= q * a[cur][j];
        if (a[r][col] != 0) clean = false;
      }
      if (clean) {
        if (a[cur][col] < 0)
          for (size_t j = col; j < cols; ++j) a[cur][j] = -a[cur][j];
        ++cur;
        break;
      }
    }
  }
  a.resize(cur);
  return a;
}

// Covolume of the Z-span of the given rational vectors inside Q^r, i.e. the
// absolute determinant of any basis matrix of that span (must have full rank).
Rational span_covolume(const std::vector<RatVec>& gens, size_t r) {
  BigInt den = 1;
  for (const auto& v : gens)
    for (const auto& q : v) den = boost::multiprecision::lcm(den, rat_den(q));
  IntMat rows(gens.size(), std::vector<BigInt>(r, 0));
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < r; ++j) rows[i][j] = rat_num(gens[i][j]) * (den / rat_den(gens[i][j]));
  IntMat basis = hermite_rows(std::move(rows));
  if (basis.size() != r) throw std::logic_error("glue span lost rank");
  BigInt prod = 1;
  size_t col = 0;
  for (size_t i = 0; i < r; ++i) {
    while (col < r && basis[i][col] == 0) ++col;
    if (col == r) throw std::logic_error("glue span lost rank");
    prod *= basis[i][col];
  }
  Rational vol = Rational(prod);
  for (size_t i = 0; i < r; ++i) vol /= Rational(den);
  return vol;
}

// Basis of the Z-span of the generators, as rational vectors.
std::vector<RatVec> span_basis(const std::vector<RatVec>& gens, size_t r) {
  BigInt den = 1;
  for (const auto& v : gens)
    for (const auto& q : v) den = boost::multiprecision::lcm(den, rat_den(q));
  IntMat rows(gens.size(), std::vector<BigInt>(r, 0));
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < r; ++j) rows[i][j] = rat_num(gens[i][j]) * (den / rat_den(gens[i][j]));
  IntMat basis = hermite_rows(std::move(rows));
  if (basis.size() != r) throw std::logic_error("glue span lost rank");
  std::vector<RatVec> out(r, RatVec(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) out[i][j] = Rational(basis[i][j], den);
  return out;
}

std::vector<RatVec> all_generators(const IntLattice& lat) {
  const size_t r = lat.gram.size();
  std::vector<RatVec> gens;
  gens.reserve(r + lat.glue.size());
  for (size_t i = 0; i < r; ++i) {
    RatVec e(r, Rational(0));
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  for (const auto& g : lat.glue) gens.push_back(g);
  return gens;
}

// Integer Gram matrix of the lattice spanned by basis + glue; throws if the
// claimed even-overlattice structure is violated.
IntMat extended_gram(const IntLattice& lat) {
  const size_t r = lat.gram.size();
  if (lat.glue.empty()) return lat.gram;
  const std::vector<RatVec> basis = span_basis(all_generators(lat), r);
  IntMat g(r, std::vector<BigInt>(r, 0));
  for (size_t i = 0; i < r; ++i) {
    const RatVec gi = gram_apply(lat.gram, basis[i]);
    for (size_t j = 0; j < r; ++j) {
      Rational p(0);
      for (size_t k = 0; k < r; ++k)
        if (basis[j][k] != 0 && gi[k] != 0) p += basis[j][k] * gi[k];
      if (!is_integer(p)) throw std::logic_error("extended lattice has non-integral pairing");
      g[i][j] = rat_num(p);
    }
    if (g[i][i] % 2 != 0) throw std::logic_error("extended lattice is not even");
  }
  return g;
}

std::vector<std::pair<BigInt, int>> factor_positive(BigInt v) {
  std::vector<std::pair<BigInt, int>> out;
  if (v <= 1) return out;
  for (BigInt p = 2; p * p <= v; ++p) {
    int e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (v > 1) out.emplace_back(v, 1);
  return out;
}

DiscriminantData disc_of_gram(const IntMat& g) {
  DiscriminantData d;
  d.determinant = exact_determinant(g);
  d.abs_discriminant = bi_abs(d.determinant);
  d.factorization = factor_positive(d.abs_discriminant);
  for (const BigInt& e : smith_normal_form(g).divisors)
    if (e > 1) d.group_invariants.push_back(e);
  return d;
}

}  // namespace

IntLattice gram_from_config(const CurveConfig& c) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < c.labels.size(); ++i)
    if (!index.emplace(c.labels[i], i).second)
      throw std::invalid_argument("duplicate curve label: " + c.labels[i]);
  IntLattice lat;
  lat.basis_labels = c.labels;
  lat.gram.assign(c.labels.size(), std::vector<BigInt>(c.labels.size(), 0));
  for (size_t i = 0; i < c.labels.size(); ++i) lat.gram[i][i] = -2;
  std::set<std::pair<size_t, size_t>> seen;
  for (const auto& [a, b] : c.edges) {
    const auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw std::invalid_argument("edge endpoint is not a curve label: " + a + "-" + b);
    if (ia->second == ib->second) throw std::invalid_argument("loop edge at curve " + a);
    const auto key = std::minmax(ia->second, ib->second);
    if (!seen.insert(key).second) throw std::invalid_argument("repeated edge " + a + "-" + b);
    lat.gram[ia->second][ib->second] = 1;
    lat.gram[ib->second][ia->second] = 1;
  }
  return lat;
}

BigInt exact_determinant(const IntMat& m) {
  check_square(m);
  const size_t n = m.size();
  if (n == 0) return 1;
  IntMat a = m;
  BigInt prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t piv = n;
      for (size_t i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        BigInt num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        BigInt q = num / prev;
        if (q * prev != num) throw std::logic_error("fraction-free elimination: inexact division");
        a[i][j] = std::move(q);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : BigInt(-a[n - 1][n - 1]);
}

SmithResult smith_normal_form(const IntMat& m) {
  const size_t rows = m.size();
  const size_t cols = rows == 0 ? 0 : m[0].size();
  for (const auto& r : m)
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");
  SmithResult res;
  res.u = identity_mat(rows);
  res.v = identity_mat(cols);
  res.d = m;
  IntMat& d = res.d;
  const size_t t_max = std::min(rows, cols);
  for (size_t t = 0; t < t_max; ++t) {
    for (;;) {
      // move the absolutely smallest nonzero entry of the trailing block to (t,t)
      size_t bi = rows, bj = cols;
      for (size_t i = t; i < rows; ++i)
        for (size_t j = t; j < cols; ++j)
          if (d[i][j] != 0 && (bi == rows || bi_abs(d[i][j]) < bi_abs(d[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) { t = t_max; break; }  // trailing block vanished
      if (bi != t) std::swap(d[t], d[bi]), std::swap(res.u[t], res.u[bi]);
      if (bj != t)
        for (size_t i = 0; i < rows; ++i) std::swap(d[i][t], d[i][bj]);
      if (bj != t)
        for (size_t i = 0; i < cols; ++i) std::swap(res.v[i][t], res.v[i][bj]);

      bool clean = true;
      for (size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        const BigInt q = d[i][t] / d[t][t];
        if (q != 0) {
          for (size_t j = 0; j < cols; ++j) d[i][j] -= q * d[t][j];
          for (size_t j = 0; j < rows; ++j) res.u[i][j] -= q * res.u[t][j];
        }
        if (d[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        const BigInt q = d[t][j] / d[t][t];
        if (q != 0) {
          for (size_t i = 0; i < rows; ++i) d[i][j] -= q * d[i][t];
          for (size_t i = 0; i < cols; ++i) res.v[i][j] -= q * res.v[i][t];
        }
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // enforce the divisibility chain: pivot must divide the trailing block
      bool divides = true;
      for (size_t i = t + 1; i < rows && divides; ++i)
        for (size_t j = t + 1; j < cols && divides; ++j)
          if (d[i][j] % d[t][t] != 0) {
            for (size_t jj = 0; jj < cols; ++jj) d[t][jj] += d[i][jj];
            for (size_t jj = 0; jj < rows; ++jj) res.u[t][jj] += res.u[i][jj];
            divides = false;
          }
      if (divides) break;
    }
    if (t == t_max) break;
  }
  for (size_t t = 0; t < t_max; ++t)
    if (d[t][t] < 0) {
      for (size_t j = 0; j < cols; ++j) d[t][j] = -d[t][j];
      for (size_t j = 0; j < rows; ++j) res.u[t][j] = -res.u[t][j];
    }
  for (size_t t = 0; t < t_max; ++t)
    if (d[t][t] != 0) res.divisors.push_back(d[t][t]);
  return res;
}

Rational lattice_pairing(const IntLattice& lat, const RatVec& x, const RatVec& y) {
  if (x.size() != lat.gram.size() || y.size() != lat.gram.size())
    throw std::invalid_argument("vector dimension does not match the lattice rank");
  const RatVec gy = gram_apply(lat.gram, y);
  Rational p(0);
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && gy[i] != 0) p += x[i] * gy[i];
  return p;
}

bool dual_membership(const RatVec& x, const IntLattice& lat) {
  if (x.size() != lat.gram.size())
    throw std::invalid_argument("vector dimension does not match the lattice rank");
  const RatVec gx = gram_apply(lat.gram, x);
  for (const auto& p : gx)
    if (!is_integer(p)) return false;
  for (const auto& g : lat.glue) {
    Rational p(0);
    for (size_t i = 0; i < x.size(); ++i)
      if (g[i] != 0 && gx[i] != 0) p += g[i] * gx[i];
    if (!is_integer(p)) return false;
  }
  return true;
}

GlueExtension extend_by_glue(const IntLattice& lat, const std::vector<RatVec>& vs) {
  const size_t r = lat.gram.size();
  IntLattice out = lat;
  for (const auto& v : vs) {
    if (v.size() != r) throw std::invalid_argument("glue vector dimension mismatch");
    const RatVec gv = gram_apply(lat.gram, v);
    for (const auto& p : gv)
      if (!is_integer(p))
        throw std::invalid_argument("rejected glue vector: non-integral pairing with a basis curve");
    for (const auto& g : out.glue) {
      Rational p(0);
      for (size_t i = 0; i < r; ++i)
        if (g[i] != 0 && gv[i] != 0) p += g[i] * gv[i];
      if (!is_integer(p))
        throw std::invalid_argument("rejected glue vector: non-integral pairing with a glue vector");
    }
    Rational self(0);
    for (size_t i = 0; i < r; ++i)
      if (v[i] != 0 && gv[i] != 0) self += v[i] * gv[i];
    if (!is_integer(self) || rat_num(self) % 2 != 0)
      throw std::invalid_argument("rejected glue vector: odd self-pairing");
    out.glue.push_back(v);
  }

  const Rational vol_in = span_covolume(all_generators(lat), r);
  const Rational vol_out = span_covolume(all_generators(out), r);
  const Rational idx = vol_in / vol_out;
  if (!is_integer(idx) || rat_num(idx) < 1) throw std::logic_error("extension index is not a positive integer");

  GlueExtension ext;
  ext.lattice = std::move(out);
  ext.index = rat_num(idx);
  ext.disc = disc_of_gram(extended_gram(ext.lattice));

  const BigInt det_in = exact_determinant(extended_gram(lat));
  if (ext.disc.determinant * ext.index * ext.index != det_in)
    throw std::logic_error("extension discriminant does not match index^2 scaling");
  return ext;
}

DiscriminantData discriminant_data(const IntLattice& lat) { return disc_of_gram(extended_gram(lat)); }

DivisibilityReport check_divisible_class(const std::vector<BigInt>& c, int p, const IntLattice& lat) {
  if (p != 2 && p != 3) throw std::invalid_argument("divisibility prime must be 2 or 3");
  DivisibilityReport rep;
  if (c.size() != lat.gram.size()) {
    rep.reasons.push_back("class dimension does not match the lattice rank");
    return rep;
  }
  RatVec x(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0 && c[i] != 1 && c[i] != -1) {
      rep.reasons.push_back("coefficient of " + lat.basis_labels[i] + " is not in {0, +1, -1}");
      return rep;
    }
    if (c[i] != 0) ++rep.support;
    x[i] = Rational(c[i], p);
  }
  if (p == 2 && rep.support != 8)
    rep.reasons.push_back("a 2-divisible class must be supported on exactly 8 curves, found " +
                          std::to_string(rep.support));
  if (p == 3 && rep.support < 12)
    rep.reasons.push_back("a 3-divisible class must be supported on at least 12 curves, found " +
                          std::to_string(rep.support));

  const RatVec gx = gram_apply(lat.gram, x);
  for (size_t i = 0; i < gx.size(); ++i)
    if (!is_integer(gx[i]))
      rep.reasons.push_back("pairing with " + lat.basis_labels[i] + " is " + to_string(gx[i]));
  for (size_t gi = 0; gi < lat.glue.size(); ++gi) {
    Rational pr(0);
    for (size_t i = 0; i < x.size(); ++i)
      if (lat.glue[gi][i] != 0 && gx[i] != 0) pr += lat.glue[gi][i] * gx[i];
    if (!is_integer(pr))
      rep.reasons.push_back("pairing with glue vector " + std::to_string(gi) + " is " + to_string(pr));
  }
  Rational self(0);
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && gx[i] != 0) self += x[i] * gx[i];
  if (!is_integer(self) || rat_num(self) % 2 != 0)
    rep.reasons.push_back("self-pairing " + to_string(self) + " is not an even integer");
  else
    rep.scaled_self_intersection = self;

  rep.divisible = rep.reasons.empty();
  return rep;
}

std::vector<std::vector<BigInt>> search_divisible_classes(const IntLattice& lat, int p) {
  if (p != 2 && p != 3) throw std::invalid_argument("divisibility prime must be 2 or 3");
  const size_t n = lat.gram.size();
  check_square(lat.gram);

  // Nullspace basis of the Gram matrix over F_p.
  std::vector<std::vector<int>> m(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      long r = static_cast<long>(lat.gram[i][j] % p);
      m[i][j] = static_cast<int>(r < 0 ? r + p : r);
    }
  std::vector<int> pivot_row(n, -1);
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < n; ++col) {
    size_t sel = rank;
    while (sel < n && m[sel][col] == 0) ++sel;
    if (sel == n) continue;
    std::swap(m[sel], m[rank]);
    if (m[rank][col] != 1)  // p = 3 and pivot 2: multiply by 2 (its own inverse)
      for (auto& v : m[rank]) v = v * 2 % p;
    for (size_t r = 0; r < n; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const int f = m[r][col];
      for (size_t j = 0; j < n; ++j) m[r][j] = (m[r][j] + (p - f) * m[rank][j]) % p;
    }
    pivot_row[col] = static_cast<int>(rank);
    ++rank;
  }
  std::vector<std::vector<int>> basis;
  for (size_t f = 0; f < n; ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<int> v(n, 0);
    v[f] = 1;
    for (size_t c = 0; c < n; ++c)
      if (pivot_row[c] >= 0) v[c] = (p - m[static_cast<size_t>(pivot_row[c])][f]) % p;
    basis.push_back(std::move(v));
  }
  const size_t k = basis.size();
  if ((p == 2 && k > 23) || (p == 3 && k > 14))
    throw std::invalid_argument("discriminant p-rank too large for exhaustive search");

  std::vector<std::vector<BigInt>> found;
  auto try_candidate = [&](const std::vector<BigInt>& c) {
    if (check_divisible_class(c, p, lat).divisible) found.push_back(c);
  };

  std::vector<int> a(k, 0);
  for (;;) {
    size_t pos = 0;
    while (pos < k && ++a[pos] == p) a[pos++] = 0;
    if (pos == k) break;
    std::vector<int> v(n, 0);
    for (size_t i = 0; i < k; ++i)
      if (a[i])
        for (size_t j = 0; j < n; ++j) v[j] = (v[j] + a[i] * basis[i][j]) % p;
    std::vector<size_t> support;
    for (size_t j = 0; j < n; ++j)
      if (v[j]) support.push_back(j);
    if (p == 2 ? support.size() != 8 : support.size() < 12) continue;
    if (p == 3) {
      // The F_3 vector determines its unique {0,+1,-1} lift; keep the
      // representative whose first nonzero entry is +1.
      if (v[support.front()] != 1) continue;
      std::vector<BigInt> c(n, 0);
      for (size_t j : support) c[j] = (v[j] == 2 ? -1 : 1);
      try_candidate(c);
    } else {
      // Mod 2 fixes only the support; enumerate sign patterns with the
      // first entry pinned to +1.
      const size_t s = support.size();
      for (unsigned long mask = 0; mask < (1ul << (s - 1)); ++mask) {
        std::vector<BigInt> c(n, 0);
        c[support[0]] = 1;
        for (size_t i = 1; i < s; ++i) c[support[i]] = (mask >> (i - 1)) & 1 ? -1 : 1;
        try_candidate(c);
      }
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace k3pencil
