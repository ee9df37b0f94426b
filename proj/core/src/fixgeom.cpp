#include "k3pencil/fixgeom.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace k3pencil {

CycNum quadric_value(const CycVec& x) {
  CycNum s = CycNum::zero();
  for (const auto& xi : x) s += xi * xi;
  return s;
}

CycNum quadric_pairing(const CycVec& a, const CycVec& b) {
  CycNum s = CycNum::zero();
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::array<CycNum, 6> pluecker_of_span(const CycVec& a, const CycVec& b) {
  auto minor = [&](int i, int j) { return a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)] -
                                          a[static_cast<size_t>(j)] * b[static_cast<size_t>(i)]; };
  return {minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3)};
}

CycNum pluecker_pairing(const std::array<CycNum, 6>& p, const std::array<CycNum, 6>& q) {
  return p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0];
}

namespace {

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

int vec_compare(const std::vector<CycNum>& a, const std::vector<CycNum>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    const int c = CycNum::compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

// Registry of projective classes of CycNum vectors. Classes are keyed by the
// fingerprint sequence normalized to its first exactly-nonzero entry; exact
// cross-multiplication against the stored canonical form settles each bucket.
class ProjectiveRegistry {
 public:
  explicit ProjectiveRegistry(size_t len) : len_(len) {}

  int find(const std::vector<CycNum>& raw) const {
    const auto it = buckets_.find(key_of(raw));
    if (it == buckets_.end()) return -1;
    for (int idx : it->second)
      if (matches(raw, idx)) return idx;
    return -1;
  }

  std::pair<int, bool> find_or_insert(std::vector<CycNum> raw) {
    const std::uint64_t key = key_of(raw);
    auto& bucket = buckets_[key];
    for (int idx : bucket)
      if (matches(raw, idx)) return {idx, false};
    raw_.push_back(std::move(raw));
    canon_cache_.emplace_back();
    const int idx = static_cast<int>(raw_.size()) - 1;
    bucket.push_back(idx);
    return {idx, true};
  }

  const std::vector<CycNum>& raw(int idx) const { return raw_[static_cast<size_t>(idx)]; }

  // canonical forms are only materialized on demand: the exact rescale needs a
  // field inversion, which dominates the cost when done for every insertion
  const std::vector<CycNum>& canonical(int idx) const {
    auto& slot = canon_cache_[static_cast<size_t>(idx)];
    if (slot.empty()) slot = canonicalize(raw_[static_cast<size_t>(idx)]);
    return slot;
  }

  int size() const { return static_cast<int>(raw_.size()); }

  static std::vector<CycNum> canonicalize(const std::vector<CycNum>& raw) {
    size_t f = raw.size();
    for (size_t i = 0; i < raw.size(); ++i)
      if (!raw[i].is_zero()) {
        f = i;
        break;
      }
    if (f == raw.size()) throw std::invalid_argument("cannot canonicalize the zero vector");
    const CycNum scale = raw[f].inv();
    std::vector<CycNum> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] * scale;
    return out;
  }

 private:
  size_t len_;
  std::vector<std::vector<CycNum>> raw_;
  mutable std::vector<std::vector<CycNum>> canon_cache_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;

  std::uint64_t key_of(const std::vector<CycNum>& raw) const {
    if (raw.size() != len_) throw std::invalid_argument("registry vector length mismatch");
    size_t f = raw.size();
    for (size_t i = 0; i < raw.size(); ++i)
      if (!raw[i].is_zero()) {
        f = i;
        break;
      }
    if (f == raw.size()) throw std::invalid_argument("zero vector has no projective class");
    const std::uint64_t fp = raw[f].fingerprint();
    std::uint64_t h = 1469598103934665603ULL;
    if (fp != 0) {
      const std::uint64_t inv = modp::inv(fp);
      for (const auto& c : raw) h = hash_mix(h, modp::mul(c.fingerprint(), inv));
    } else {
      // The scale factor happens to vanish mod p; fall back to the exact
      // canonical form, whose fingerprints are scale-independent.
      for (const auto& c : canonicalize(raw)) h = hash_mix(h, c.fingerprint());
    }
    return h;
  }

  // projective equality by cross-multiplication, no inversions: the first
  // nonzero position must agree, then a_f * b_i == b_f * a_i for the rest
  bool matches(const std::vector<CycNum>& a, int idx) const {
    const auto& b = raw_[static_cast<size_t>(idx)];
    size_t f = a.size();
    for (size_t i = 0; i < a.size(); ++i) {
      const bool az = a[i].is_zero();
      if (az != b[i].is_zero()) return false;
      if (!az) {
        f = i;
        break;
      }
    }
    if (f == a.size()) return false;
    for (size_t i = f + 1; i < a.size(); ++i)
      if (a[f] * b[i] != b[f] * a[i]) return false;
    return true;
  }
};

struct BinEigen {
  bool central = false;
  CycNum alpha;  // eigenvalue zeta^k with 0 < k < 60 after centrality split
  CycVec v, vp;  // eigenvectors for alpha and alpha^-1
};

CycVec conj_vec(const CycVec& v) {
  CycVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].conj();
  return out;
}

std::vector<BinEigen> binary_eigen_data(const FiniteGroup& g) {
  std::vector<BinEigen> out(static_cast<size_t>(g.binary_order()));
  const int id = g.binary_identity();
  for (int i = 0; i < g.binary_order(); ++i) {
    BinEigen& e = out[static_cast<size_t>(i)];
    if (i == id || i == g.binary_neg(id)) {
      e.central = true;
      continue;
    }
    const Quat& q = g.binary()[static_cast<size_t>(i)];
    const auto [a, b] = eigenvalues_finite_order(q);
    if ((a * a) == CycNum::one())
      throw std::logic_error("non-central element with unipotent spectrum: eigenspace fault");
    e.alpha = a;
    CycMatrix m = q + CycMatrix::identity(2).mul_scalar(-a);
    auto ker = solve_kernel(m);
    if (ker.size() != 1) throw std::logic_error("eigenspace of dimension >= 3 for group element");
    e.v = ker[0];
    CycMatrix m2 = q + CycMatrix::identity(2).mul_scalar(-b);
    ker = solve_kernel(m2);
    if (ker.size() != 1) throw std::logic_error("eigenspace of dimension >= 3 for group element");
    e.vp = ker[0];
  }
  return out;
}

std::vector<CycNum> to_vec(const std::array<CycNum, 6>& a) { return {a.begin(), a.end()}; }

std::array<CycNum, 6> to_arr(const std::vector<CycNum>& v) {
  std::array<CycNum, 6> a;
  for (size_t i = 0; i < 6; ++i) a[i] = v[i];
  return a;
}

// 3x3 determinant of the columns (a, b, c)
CycNum det3(const CycVec& a, const CycVec& b, const CycVec& c, int r0, int r1, int r2) {
  auto A = [&](int r) { return a[static_cast<size_t>(r)]; };
  auto B = [&](int r) { return b[static_cast<size_t>(r)]; };
  auto C = [&](int r) { return c[static_cast<size_t>(r)]; };
  return A(r0) * (B(r1) * C(r2) - B(r2) * C(r1)) - A(r1) * (B(r0) * C(r2) - B(r2) * C(r0)) +
         A(r2) * (B(r0) * C(r1) - B(r1) * C(r0));
}

bool point_on_line(const CycVec& x, const std::array<CycVec, 2>& span) {
  for (const auto& rows : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 1, 3},
                           std::array<int, 3>{0, 2, 3}, std::array<int, 3>{1, 2, 3}})
    if (!det3(x, span[0], span[1], rows[0], rows[1], rows[2]).is_zero()) return false;
  return true;
}

struct LineSweep {
  ProjectiveRegistry reg{6};
  std::vector<std::array<CycVec, 2>> spans;
  std::vector<int> ruling;  // 0 off-quadric, 1, 2
  std::vector<std::vector<int>> fixers;

  void add(const CycVec& a, const CycVec& b, int rul, int element) {
    const auto plk = pluecker_of_span(a, b);
    // Pluecker quadratic relation must hold for any actual line
    if (!(plk[0] * plk[5] - plk[1] * plk[4] + plk[2] * plk[3]).is_zero())
      throw std::logic_error("span does not satisfy the Pluecker relation");
    auto [idx, inserted] = reg.find_or_insert(to_vec(plk));
    if (inserted) {
      spans.push_back({a, b});
      ruling.push_back(rul);
      fixers.emplace_back();
    } else if (ruling[static_cast<size_t>(idx)] != rul) {
      throw std::logic_error("line registered with inconsistent ruling");
    }
    fixers[static_cast<size_t>(idx)].push_back(element);
  }
};

int orbit_sort_ratio(const FixLineOrbit& o) { return o.stabilizer_order / o.fix_group_order; }

}  // namespace

std::vector<FixLineOrbit> fix_lines(const FiniteGroup& group) {
  const auto eig = binary_eigen_data(group);
  const int central = group.binary_canon(group.binary_identity());
  const CycVec e0{CycNum::one(), CycNum::zero()};
  const CycVec e1{CycNum::zero(), CycNum::one()};

  LineSweep sweep;
  for (int e = 0; e < group.order(); ++e) {
    const GroupElement& ge = group.element(e);
    const bool lc = ge.left == central, rc = ge.right == central;
    if (lc && rc) continue;  // identity
    if (!lc && rc) {
      const BinEigen& L = eig[static_cast<size_t>(ge.left)];
      sweep.add(tensor_point(L.v, e0), tensor_point(L.v, e1), 1, e);
      sweep.add(tensor_point(L.vp, e0), tensor_point(L.vp, e1), 1, e);
      continue;
    }
    if (lc && !rc) {
      const BinEigen& R = eig[static_cast<size_t>(ge.right)];
      const CycVec w = conj_vec(R.v), wp = conj_vec(R.vp);
      sweep.add(tensor_point(e0, w), tensor_point(e1, w), 2, e);
      sweep.add(tensor_point(e0, wp), tensor_point(e1, wp), 2, e);
      continue;
    }
    const BinEigen& L = eig[static_cast<size_t>(ge.left)];
    const BinEigen& R = eig[static_cast<size_t>(ge.right)];
    const CycVec w = conj_vec(R.v), wp = conj_vec(R.vp);
    // The action on v (x) w multiplies by alpha * conj(beta); a line is fixed
    // pointwise when its two eigenvalues agree, i.e. the product squares to 1.
    const CycNum beta_bar = R.alpha.conj();  // = beta^-1 for roots of unity
    const CycNum c1 = L.alpha * beta_bar;
    const CycNum c2 = L.alpha * R.alpha;
    if (c1 * c1 == CycNum::one())
      sweep.add(tensor_point(L.v, w), tensor_point(L.vp, wp), 0, e);
    if (c2 * c2 == CycNum::one())
      sweep.add(tensor_point(L.v, wp), tensor_point(L.vp, w), 0, e);
  }

  const int total = sweep.reg.size();

  // Validate quadric membership against the declared ruling
  std::vector<char> on_q(static_cast<size_t>(total), 0);
  for (int i = 0; i < total; ++i) {
    const auto& sp = sweep.spans[static_cast<size_t>(i)];
    if (!quadric_value(sp[0]).is_zero() || !quadric_value(sp[1]).is_zero())
      throw std::logic_error("span point of a fix-line is off the quadric");
    const bool inside = quadric_pairing(sp[0], sp[1]).is_zero();
    if (inside != (sweep.ruling[static_cast<size_t>(i)] != 0))
      throw std::logic_error("ruling flag disagrees with quadric membership");
    on_q[static_cast<size_t>(i)] = inside ? 1 : 0;
  }

  // Orbit partition under the generators
  std::vector<CycMatrix> gens;
  for (int ge : group.generator_elements()) gens.push_back(group.matrix(ge));
  std::vector<int> orbit_of(static_cast<size_t>(total), -1);
  std::vector<std::vector<int>> orbit_members;
  for (int i = 0; i < total; ++i) {
    if (orbit_of[static_cast<size_t>(i)] >= 0) continue;
    const int oid = static_cast<int>(orbit_members.size());
    orbit_members.emplace_back();
    std::deque<int> bfs{i};
    orbit_of[static_cast<size_t>(i)] = oid;
    orbit_members.back().push_back(i);
    while (!bfs.empty()) {
      const int cur = bfs.front();
      bfs.pop_front();
      for (const CycMatrix& m : gens) {
        const auto& sp = sweep.spans[static_cast<size_t>(cur)];
        const auto img = pluecker_of_span(m * sp[0], m * sp[1]);
        const int j = sweep.reg.find(to_vec(img));
        if (j < 0) throw std::logic_error("group image of a fix-line is not a fix-line");
        if (orbit_of[static_cast<size_t>(j)] < 0) {
          orbit_of[static_cast<size_t>(j)] = oid;
          orbit_members.back().push_back(j);
          bfs.push_back(j);
        }
      }
    }
  }

  std::vector<FixLineOrbit> orbits;
  for (const auto& members : orbit_members) {
    FixLineOrbit o;
    o.length = static_cast<int>(members.size());
    if (group.order() % o.length != 0)
      throw std::logic_error("orbit length does not divide the group order");
    o.stabilizer_order = group.order() / o.length;
    o.ruling = sweep.ruling[static_cast<size_t>(members.front())];
    const int nfix = static_cast<int>(sweep.fixers[static_cast<size_t>(members.front())].size());
    o.fix_group_order = nfix + 1;
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      return vec_compare(sweep.reg.canonical(a), sweep.reg.canonical(b)) < 0;
    });
    for (int idx : sorted) {
      if (static_cast<int>(sweep.fixers[static_cast<size_t>(idx)].size()) != nfix)
        throw std::logic_error("orbit members with different fix-group orders");
      if (sweep.ruling[static_cast<size_t>(idx)] != o.ruling)
        throw std::logic_error("orbit members in different rulings");
      ProjLine line;
      line.pluecker = to_arr(sweep.reg.canonical(idx));
      line.on_quadric = on_q[static_cast<size_t>(idx)] != 0;
      line.span = sweep.spans[static_cast<size_t>(idx)];
      o.members.push_back(std::move(line));
      o.member_fixers.push_back(sweep.fixers[static_cast<size_t>(idx)]);
    }
    o.representative = o.members.front();
    orbits.push_back(std::move(o));
  }

  // Deterministic order: ruling 1, ruling 2 (each by descending length, then
  // lexicographic representative), then off-quadric by ascending fix-group
  // order, ascending generic orbit ratio, lexicographic representative.
  auto rep_less = [](const FixLineOrbit& a, const FixLineOrbit& b) {
    for (size_t i = 0; i < 6; ++i) {
      const int c = CycNum::compare(a.representative.pluecker[i], b.representative.pluecker[i]);
      if (c != 0) return c < 0;
    }
    return false;
  };
  std::sort(orbits.begin(), orbits.end(), [&](const FixLineOrbit& a, const FixLineOrbit& b) {
    if (a.ruling != b.ruling) {
      if (a.ruling == 0 || b.ruling == 0) return b.ruling == 0;
      return a.ruling < b.ruling;
    }
    if (a.ruling != 0) {
      if (a.length != b.length) return a.length > b.length;
      return rep_less(a, b);
    }
    if (a.fix_group_order != b.fix_group_order) return a.fix_group_order < b.fix_group_order;
    if (orbit_sort_ratio(a) != orbit_sort_ratio(b)) return orbit_sort_ratio(a) < orbit_sort_ratio(b);
    return rep_less(a, b);
  });

  // Type labels
  for (auto& o : orbits)
    if (o.ruling != 0) o.type_label = "ruling";
  auto label_family = [&](int order, const char* base, const char* primed, const char* doubled) {
    std::vector<FixLineOrbit*> fam;
    for (auto& o : orbits)
      if (o.ruling == 0 && o.fix_group_order == order) fam.push_back(&o);
    if (fam.empty()) return;
    if (fam.size() == 1) {
      fam[0]->type_label = base;
      return;
    }
    if (fam.size() == 2) {  // two indistinguishable orbits: primed labels
      fam[0]->type_label = primed;
      fam[1]->type_label = doubled;
      return;
    }
    if (fam.size() == 3) {  // one short-ratio orbit plus a primed pair
      if (orbit_sort_ratio(*fam[0]) == orbit_sort_ratio(*fam[1]))
        throw std::logic_error("cannot split line orbit family by stabilizer ratio");
      fam[0]->type_label = base;
      fam[1]->type_label = primed;
      fam[2]->type_label = doubled;
      return;
    }
    throw std::logic_error("unexpected number of fix-line orbits in a family");
  };
  label_family(2, "M", "M'", "M''");
  label_family(3, "N", "N'", "N''");
  label_family(4, "R", "R'", "R''");
  label_family(5, "S", "S'", "S''");

  return orbits;
}

int cyclic_base_order(int n) {
  switch (n) {
    case 6: return 2;
    case 8: return 3;
    case 12: return 5;
    default: throw std::invalid_argument("cyclic_base_order: n must be 6, 8 or 12");
  }
}

BaseLocusResult base_locus(const FiniteGroup& group, const std::vector<FixLineOrbit>& orbits) {
  BaseLocusResult out;
  out.s = cyclic_base_order(group.n());
  for (int rul : {1, 2}) {
    bool found = false;
    for (const auto& o : orbits) {
      if (o.ruling != rul || o.fix_group_order != out.s) continue;
      if (found) throw std::logic_error("multiple base-locus orbits in one ruling");
      found = true;
      if (o.length != group.n()) throw std::logic_error("base-locus orbit of unexpected length");
      for (const auto& m : o.members) out.lines.push_back(m);
    }
    if (!found) throw std::logic_error("missing base-locus orbit");
  }
  return out;
}

BaseLocusResult base_locus(const FiniteGroup& group) { return base_locus(group, fix_lines(group)); }

namespace {

CycMatrix coord_matrix(const CycVec& x) {
  const CycNum i = CycNum::imag_unit();
  CycMatrix m(2, 2);
  m.at(0, 0) = x[0] + i * x[1];
  m.at(0, 1) = x[2] + i * x[3];
  m.at(1, 0) = i * x[3] - x[2];
  m.at(1, 1) = x[0] - i * x[1];
  return m;
}

bool proportional2(const CycVec& a, const CycVec& b) {
  return (a[0] * b[1] - a[1] * b[0]).is_zero();
}

}  // namespace

std::map<int, int> base_line_crossing_census(const FiniteGroup& group,
                                             const std::vector<FixLineOrbit>& orbits) {
  const int s = cyclic_base_order(group.n());
  const FixLineOrbit* base = nullptr;
  for (const auto& o : orbits)
    if (o.ruling == 1 && o.fix_group_order == s) base = &o;
  if (base == nullptr) throw std::logic_error("missing base-locus orbit");

  // Pole of the representative line: the common column space of the rank-one
  // coordinate matrices of its span points.
  const CycMatrix X = coord_matrix(base->representative.span[0]);
  CycVec pole{X.at(0, 0), X.at(1, 0)};
  if (pole[0].is_zero() && pole[1].is_zero()) pole = {X.at(0, 1), X.at(1, 1)};

  // Set-stabilizer: pairs (p, q) with p fixing the pole projectively.
  std::vector<int> axis;  // binary indices stabilizing the pole
  for (int i = 0; i < group.binary_order(); ++i)
    if (proportional2(group.binary()[static_cast<size_t>(i)] * pole, pole)) axis.push_back(i);
  if (static_cast<int>(axis.size()) != 2 * s)
    throw std::logic_error("base-line axis subgroup has unexpected order");

  std::set<int> stab;
  for (int p : axis)
    for (int q = 0; q < group.binary_order(); ++q)
      stab.insert(group.element_of_pair(p, q));
  if (static_cast<int>(stab.size()) * base->length != group.order())
    throw std::logic_error("base-line stabilizer violates orbit-stabilizer");

  // Generators of the stabilizer: an axis rotation of maximal order paired
  // with identity, and the pure second-factor generators.
  std::vector<int> stab_gens;
  for (int p : axis)
    if (group.binary_elem_order(p) == 2 * s) {
      stab_gens.push_back(group.element_of_pair(p, group.binary_identity()));
      break;
    }
  for (const Quat& g : binary_generators(group.kind()))
    stab_gens.push_back(group.element_of_pair(group.binary_identity(), group.binary_index(g)));
  {
    std::set<int> closure;
    std::deque<int> bfs{group.identity()};
    closure.insert(group.identity());
    while (!bfs.empty()) {
      const int cur = bfs.front();
      bfs.pop_front();
      for (int g : stab_gens) {
        const int nxt = group.elem_mul(cur, g);
        if (closure.insert(nxt).second) bfs.push_back(nxt);
      }
    }
    if (closure != stab) throw std::logic_error("stabilizer generators do not close correctly");
  }

  // Points of interest on the line: tensor points over the poles of the
  // complementary ruling (conjugated eigenvectors), with their t-values.
  const auto eig = binary_eigen_data(group);
  ProjectiveRegistry poles(2);
  std::vector<CycVec> pole_vecs;
  for (int i = 0; i < group.binary_order(); ++i) {
    if (eig[static_cast<size_t>(i)].central) continue;
    for (const CycVec& w : {conj_vec(eig[static_cast<size_t>(i)].v),
                            conj_vec(eig[static_cast<size_t>(i)].vp)}) {
      auto [idx, inserted] = poles.find_or_insert({w[0], w[1]});
      if (inserted) pole_vecs.push_back(w);
    }
  }
  std::vector<int> t_of(pole_vecs.size(), 0);
  for (size_t k = 0; k < pole_vecs.size(); ++k) {
    int cnt = 0;
    for (int i = 0; i < group.binary_order(); ++i) {
      Quat qc(2, 2);
      const Quat& q = group.binary()[static_cast<size_t>(i)];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) qc.at(r, c) = q.at(r, c).conj();
      if (proportional2(qc * pole_vecs[k], pole_vecs[k])) ++cnt;
    }
    if (cnt % 2 != 0) throw std::logic_error("pole fixer count must be even");
    t_of[k] = cnt / 2;
  }

  // Orbit partition of the points under the stabilizer generators.
  ProjectiveRegistry points(4);
  std::vector<int> point_t;
  for (size_t k = 0; k < pole_vecs.size(); ++k) {
    auto [idx, inserted] = points.find_or_insert(tensor_point(pole, pole_vecs[k]));
    if (!inserted) throw std::logic_error("distinct poles gave the same point");
    point_t.push_back(t_of[k]);
  }
  std::vector<CycMatrix> gen_mats;
  for (int g : stab_gens) gen_mats.push_back(group.matrix(g));
  const int npts = points.size();
  std::vector<int> orbit_of(static_cast<size_t>(npts), -1);
  std::map<int, int> census;
  for (int i = 0; i < npts; ++i) {
    if (orbit_of[static_cast<size_t>(i)] >= 0) continue;
    std::deque<int> bfs{i};
    orbit_of[static_cast<size_t>(i)] = i;
    while (!bfs.empty()) {
      const int cur = bfs.front();
      bfs.pop_front();
      CycVec x(4);
      const auto& cv = points.raw(cur);
      for (size_t t = 0; t < 4; ++t) x[t] = cv[t];
      for (const auto& m : gen_mats) {
        const int j = points.find(m * x);
        if (j < 0) throw std::logic_error("stabilizer image left the point set");
        if (orbit_of[static_cast<size_t>(j)] < 0) {
          orbit_of[static_cast<size_t>(j)] = i;
          if (point_t[static_cast<size_t>(j)] != point_t[static_cast<size_t>(i)])
            throw std::logic_error("orbit mixes points of different local orders");
          bfs.push_back(j);
        }
      }
    }
    ++census[point_t[static_cast<size_t>(i)]];
  }
  return census;
}

std::string classify_base_point(int n, int s, int t) {
  if (s != cyclic_base_order(n)) throw std::invalid_argument("classify_base_point: wrong s for n");
  const bool valid = (n == 6 && (t == 2 || t == 3)) || (n == 8 && (t >= 2 && t <= 4)) ||
                     (n == 12 && (t == 2 || t == 3 || t == 5));
  if (!valid) throw std::invalid_argument("classify_base_point: (s, t) pair does not occur");
  if (t == s) return "smooth";
  // Local model: the order-t group acts by (z1, z2) -> (eta^s z1, eta z2) for
  // a primitive t-th root eta. The pair occurs inside SL2 exactly when
  // eta^(s+1) = 1, giving the cyclic A_{t-1} point.
  const CycNum eta = CycNum::zeta_pow(120 / t);
  CycNum pw = CycNum::one();
  for (int i = 0; i < s + 1; ++i) pw = pw * eta;
  if (!(pw == CycNum::one()))
    throw std::logic_error("base point local action is not special linear");
  return "A" + std::to_string(t - 1);
}

std::string classify_line_point(const FixLineOrbit& orbit) {
  if (orbit.ruling != 0)
    throw std::invalid_argument("classify_line_point: orbit must be off the quadric");
  return "A" + std::to_string(orbit.fix_group_order - 1);
}

LinePointCensus line_orbit_census(const FixLineOrbit& orbit, int n) {
  if (orbit.ruling != 0)
    throw std::invalid_argument("line_orbit_census: orbit must be off the quadric");
  if (orbit.stabilizer_order % orbit.fix_group_order != 0)
    throw std::logic_error("stabilizer order not divisible by fix-group order");
  LinePointCensus c;
  c.length = orbit.stabilizer_order / orbit.fix_group_order;
  const int points = (orbit.fix_group_order == cyclic_base_order(n)) ? n - 2 : n;
  if (points % c.length != 0)
    throw std::logic_error("points on line do not split into whole orbits");
  c.number = points / c.length;
  return c;
}

namespace {

std::string classify_group_structure(const FiniteGroup& group, const std::set<int>& elems) {
  const int m = static_cast<int>(elems.size());
  std::map<int, int> census;
  int max_order = 0;
  for (int e : elems) {
    const int o = group.element_order(e);
    ++census[o];
    max_order = std::max(max_order, o);
  }
  if (max_order == m) return "Z" + std::to_string(m);
  if (m == 4 && census[2] == 3) return "Z2xZ2";
  if (m == 12 && census == std::map<int, int>{{1, 1}, {2, 3}, {3, 8}}) return "T";
  if (m == 24 && census == std::map<int, int>{{1, 1}, {2, 9}, {3, 8}, {4, 6}}) return "O";
  if (m == 60 && census == std::map<int, int>{{1, 1}, {2, 15}, {3, 20}, {5, 24}}) return "I";
  if (m % 2 == 0) {
    const int k = m / 2;
    const int expected_inv = (k % 2 == 0) ? k + 1 : k;
    if (max_order == k && census[2] == expected_inv) return "D" + std::to_string(k);
  }
  throw std::logic_error("unrecognized stabilizer structure of order " + std::to_string(m));
}

}  // namespace

std::vector<FixPointRecord> node_orbits(const FiniteGroup& group,
                                        const std::vector<FixLineOrbit>& orbits) {
  // Flatten the off-quadric lines
  struct FlatLine {
    const ProjLine* line;
    const std::vector<int>* fixers;
    std::string label;
  };
  std::vector<FlatLine> lines;
  for (const auto& o : orbits) {
    if (o.ruling != 0) continue;
    for (size_t i = 0; i < o.members.size(); ++i)
      lines.push_back({&o.members[i], &o.member_fixers[i], o.type_label});
  }

  ProjectiveRegistry points(4);

  auto seed_from_rep = [&](const ProjLine& rep) {
    for (const auto& fl : lines) {
      if (fl.line->pluecker == rep.pluecker) continue;
      if (!pluecker_pairing(rep.pluecker, fl.line->pluecker).is_zero()) continue;
      CycMatrix m(4, 4);
      for (int r = 0; r < 4; ++r) {
        m.at(r, 0) = rep.span[0][static_cast<size_t>(r)];
        m.at(r, 1) = rep.span[1][static_cast<size_t>(r)];
        m.at(r, 2) = fl.line->span[0][static_cast<size_t>(r)];
        m.at(r, 3) = fl.line->span[1][static_cast<size_t>(r)];
      }
      const auto ker = solve_kernel(m);
      if (ker.size() != 1) throw std::logic_error("coplanar distinct lines must meet in a point");
      CycVec x(4);
      for (size_t r = 0; r < 4; ++r)
        x[r] = ker[0][0] * rep.span[0][r] + ker[0][1] * rep.span[1][r];
      bool zero = true;
      for (const auto& xi : x) zero = zero && xi.is_zero();
      if (zero) throw std::logic_error("degenerate intersection of coplanar lines");
      if (quadric_value(x).is_zero()) continue;  // common quadric point, not a node
      points.find_or_insert(x);
    }
  };
  for (const auto& o : orbits)
    if (o.ruling == 0) seed_from_rep(o.representative);

  // Complete the orbits under the group generators
  std::vector<CycMatrix> gens;
  for (int ge : group.generator_elements()) gens.push_back(group.matrix(ge));
  std::vector<int> orbit_of;
  std::vector<std::vector<int>> orbit_members;
  {
    orbit_of.assign(static_cast<size_t>(points.size()), -1);
    // BFS over the whole registry; images may add new points
    std::deque<int> pending;
    for (int i = 0; i < points.size(); ++i) pending.push_back(i);
    while (!pending.empty()) {
      const int i = pending.front();
      pending.pop_front();
      if (orbit_of[static_cast<size_t>(i)] >= 0) continue;
      const int oid = static_cast<int>(orbit_members.size());
      orbit_members.emplace_back();
      std::deque<int> q{i};
      orbit_of[static_cast<size_t>(i)] = oid;
      orbit_members.back().push_back(i);
      while (!q.empty()) {
        const int cur = q.front();
        q.pop_front();
        CycVec x(points.raw(cur));
        for (const auto& m : gens) {
          const auto [j, inserted] = points.find_or_insert(m * x);
          if (inserted) orbit_of.push_back(-1);
          if (orbit_of[static_cast<size_t>(j)] < 0) {
            orbit_of[static_cast<size_t>(j)] = oid;
            orbit_members.back().push_back(j);
            q.push_back(j);
          }
        }
      }
    }
  }

  std::vector<FixPointRecord> records;
  for (auto& members : orbit_members) {
    FixPointRecord rec;
    rec.orbit_length = static_cast<int>(members.size());
    if (group.order() % rec.orbit_length != 0)
      throw std::logic_error("node orbit length does not divide the group order");
    rec.stabilizer_order = group.order() / rec.orbit_length;

    // registry indices follow the deterministic sweep/BFS discovery order, so
    // sorting by index is reproducible and avoids canonicalizing every member
    std::sort(members.begin(), members.end());
    rec.point = points.canonical(members.front());

    // Lines through the representative, the stabilizer they generate
    std::set<int> stab{group.identity()};
    for (const auto& fl : lines) {
      if (!point_on_line(rec.point, fl.line->span)) continue;
      ++rec.meeting_lines[fl.label];
      for (int e : *fl.fixers) stab.insert(e);
    }
    {
      std::vector<int> seed(stab.begin(), stab.end());
      std::deque<int> bfs(seed.begin(), seed.end());
      while (!bfs.empty()) {
        const int cur = bfs.front();
        bfs.pop_front();
        for (int e : seed) {
          const int nxt = group.elem_mul(cur, e);
          if (stab.insert(nxt).second) bfs.push_back(nxt);
        }
      }
    }
    if (static_cast<int>(stab.size()) != rec.stabilizer_order)
      throw std::logic_error("node stabilizer from line fixers has wrong order");

    rec.stabilizer_structure = classify_group_structure(group, stab);
    rec.singularity = node_resolution_type(rec.stabilizer_structure);
    records.push_back(std::move(rec));
  }

  std::sort(records.begin(), records.end(), [](const FixPointRecord& a, const FixPointRecord& b) {
    if (a.orbit_length != b.orbit_length) return a.orbit_length > b.orbit_length;
    return a.meeting_lines < b.meeting_lines;
  });
  return records;
}

std::vector<FixPointRecord> node_orbits(const FiniteGroup& group) {
  return node_orbits(group, fix_lines(group));
}

std::string node_resolution_type(const std::string& group_id) {
  if (group_id == "T") return "E6";
  if (group_id == "O") return "E7";
  if (group_id == "I") return "E8";
  if (group_id == "Z2xZ2") return "D4";
  if (group_id.size() >= 2 && (group_id[0] == 'Z' || group_id[0] == 'D')) {
    int k = 0;
    for (size_t i = 1; i < group_id.size(); ++i) {
      if (group_id[i] < '0' || group_id[i] > '9') { k = -1; break; }
      k = k * 10 + (group_id[i] - '0');
    }
    if (k >= 2 && group_id[0] == 'Z') return "A" + std::to_string(2 * k - 1);
    if (k >= 3 && group_id[0] == 'D') return "D" + std::to_string(k + 2);
  }
  throw std::invalid_argument("node_resolution_type: unknown group id " + group_id);
}

}  // namespace k3pencil
