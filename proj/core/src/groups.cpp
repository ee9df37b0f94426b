#include "k3pencil/groups.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace k3pencil {

int pencil_n(GroupKind k) {
  switch (k) {
    case GroupKind::T: return 6;
    case GroupKind::O: return 8;
    case GroupKind::I: return 12;
  }
  throw std::invalid_argument("pencil_n: bad kind");
}

GroupKind kind_for_n(int n) {
  switch (n) {
    case 6: return GroupKind::T;
    case 8: return GroupKind::O;
    case 12: return GroupKind::I;
    default: throw std::invalid_argument("kind_for_n: n must be 6, 8 or 12");
  }
}

std::string kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::T: return "T";
    case GroupKind::O: return "O";
    case GroupKind::I: return "I";
  }
  return "?";
}

Quat make_quat(const CycNum& a, const CycNum& b, const CycNum& c, const CycNum& d) {
  const CycNum i = CycNum::imag_unit();
  Quat m(2, 2);
  m.at(0, 0) = a + i * b;
  m.at(0, 1) = c + i * d;
  m.at(1, 0) = i * d - c;
  m.at(1, 1) = a - i * b;
  return m;
}

Quat quat_identity() { return CycMatrix::identity(2); }

std::vector<Quat> binary_generators(GroupKind kind) {
  const Rational half(1, 2);
  const CycNum h(half);
  const Quat s = make_quat(h, h, h, h);  // (1 + i + j + k) / 2, order 6
  switch (kind) {
    case GroupKind::T:
      return {s, make_quat(CycNum::zero(), CycNum::one(), CycNum::zero(), CycNum::zero())};
    case GroupKind::O: {
      // (1 + i) / sqrt(2): the extra rotation taking T to O
      const CycNum r = CycNum::sqrt2().mul_rational(half);
      return {s, make_quat(CycNum::zero(), CycNum::one(), CycNum::zero(), CycNum::zero()),
              make_quat(r, r, CycNum::zero(), CycNum::zero())};
    }
    case GroupKind::I: {
      // (phi + phi^-1 i + j) / 2; phi^-1 = phi - 1
      const CycNum phi = CycNum::golden();
      return {s, make_quat(phi.mul_rational(half), (phi - CycNum::one()).mul_rational(half), h,
                           CycNum::zero())};
    }
  }
  throw std::invalid_argument("binary_generators: bad kind");
}

namespace {

// Registry keyed by matrix fingerprint with exact comparison inside buckets.
struct QuatRegistry {
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  const std::vector<Quat>* store = nullptr;

  int find(const Quat& q) const {
    auto it = buckets.find(q.fingerprint());
    if (it == buckets.end()) return -1;
    for (int idx : it->second)
      if ((*store)[static_cast<size_t>(idx)] == q) return idx;
    return -1;
  }
  void insert(const Quat& q, int idx) { buckets[q.fingerprint()].push_back(idx); }
};

int expected_binary_order(GroupKind kind) {
  switch (kind) {
    case GroupKind::T: return 24;
    case GroupKind::O: return 48;
    case GroupKind::I: return 120;
  }
  return 0;
}

}  // namespace

std::vector<Quat> quaternion_closure(const std::vector<Quat>& gens, std::size_t cap) {
  std::vector<Quat> elems;
  QuatRegistry reg;
  reg.store = &elems;
  std::deque<int> queue;

  auto add = [&](const Quat& q) {
    if (reg.find(q) >= 0) return;
    elems.push_back(q);
    const int idx = static_cast<int>(elems.size()) - 1;
    reg.insert(elems[static_cast<size_t>(idx)], idx);
    queue.push_back(idx);
    if (elems.size() > cap)
      throw std::runtime_error("quaternion closure exceeded cap; wrong generators");
  };

  add(quat_identity());
  for (const Quat& g : gens) add(g);
  while (!queue.empty()) {
    const int idx = queue.front();
    queue.pop_front();
    for (const Quat& g : gens) add(elems[static_cast<size_t>(idx)] * g);
  }
  return elems;
}

std::vector<Quat> build_binary_group(GroupKind kind) {
  std::vector<Quat> g = quaternion_closure(binary_generators(kind), 240);
  if (static_cast<int>(g.size()) != expected_binary_order(kind))
    throw std::runtime_error("binary group closure has wrong order: got " +
                             std::to_string(g.size()));
  return g;
}

CycMatrix sigma(const Quat& p1, const Quat& p2) {
  // p2 inverse = adjugate, valid because det = 1
  Quat p2inv(2, 2);
  p2inv.at(0, 0) = p2.at(1, 1);
  p2inv.at(0, 1) = -p2.at(0, 1);
  p2inv.at(1, 0) = -p2.at(1, 0);
  p2inv.at(1, 1) = p2.at(0, 0);

  // Coordinate matrices of the basis vectors e0..e3 of R^4 inside M2(C):
  // X(x) = x0*I + x1*[[i,0],[0,-i]] + x2*[[0,1],[-1,0]] + x3*[[0,i],[i,0]]
  const CycNum i = CycNum::imag_unit();
  std::vector<Quat> basis;
  basis.push_back(quat_identity());
  {
    Quat m(2, 2);
    m.at(0, 0) = i;
    m.at(1, 1) = -i;
    basis.push_back(m);
  }
  {
    Quat m(2, 2);
    m.at(0, 1) = CycNum::one();
    m.at(1, 0) = -CycNum::one();
    basis.push_back(m);
  }
  {
    Quat m(2, 2);
    m.at(0, 1) = i;
    m.at(1, 0) = i;
    basis.push_back(m);
  }

  const Rational half(1, 2);
  const CycNum mihalf = (-i).mul_rational(half);  // 1/(2i)

  CycMatrix out(4, 4);
  for (int k = 0; k < 4; ++k) {
    const Quat b = p1 * basis[static_cast<size_t>(k)] * p2inv;
    out.at(0, k) = (b.at(0, 0) + b.at(1, 1)).mul_rational(half);
    out.at(1, k) = (b.at(0, 0) - b.at(1, 1)) * mihalf;
    out.at(2, k) = (b.at(0, 1) - b.at(1, 0)).mul_rational(half);
    out.at(3, k) = (b.at(0, 1) + b.at(1, 0)) * mihalf;
  }
  return out;
}

CycVec tensor_point(const CycVec& v, const CycVec& w) {
  if (v.size() != 2 || w.size() != 2)
    throw std::invalid_argument("tensor_point: need two 2-vectors");
  const CycNum b00 = v[0] * w[0], b01 = v[0] * w[1];
  const CycNum b10 = v[1] * w[0], b11 = v[1] * w[1];
  const Rational half(1, 2);
  const CycNum mihalf = (-CycNum::imag_unit()).mul_rational(half);
  return {(b00 + b11).mul_rational(half), (b00 - b11) * mihalf, (b01 - b10).mul_rational(half),
          (b01 + b10) * mihalf};
}

FiniteGroup::FiniteGroup(GroupKind kind) : kind_(kind), n_(pencil_n(kind)) {
  binary_ = build_binary_group(kind);
  const int nb = static_cast<int>(binary_.size());

  for (int i = 0; i < nb; ++i)
    quat_lookup_[binary_[static_cast<size_t>(i)].fingerprint()].push_back(i);

  bin_id_ = binary_index(quat_identity());
  if (bin_id_ < 0) throw std::logic_error("binary group misses the identity");

  // Multiplication table. Exact products are computed only against the
  // generators; every other column follows by associativity along a Cayley
  // BFS tree (i * (j*g) = (i*j) * g), so the whole table stays exact while
  // costing O(|G| * #gens) field multiplications instead of O(|G|^2).
  mul_.assign(static_cast<size_t>(nb), std::vector<int>(static_cast<size_t>(nb), -1));
  std::vector<int> gen_idx;
  for (const Quat& g : binary_generators(kind)) {
    const int gi = binary_index(g);
    if (gi < 0) throw std::logic_error("generator missing from closure");
    gen_idx.push_back(gi);
  }
  for (int i = 0; i < nb; ++i) {
    mul_[static_cast<size_t>(i)][static_cast<size_t>(bin_id_)] = i;
    for (int gi : gen_idx) {
      const int k = binary_index(binary_[static_cast<size_t>(i)] * binary_[static_cast<size_t>(gi)]);
      if (k < 0) throw std::logic_error("binary group not closed under multiplication");
      mul_[static_cast<size_t>(i)][static_cast<size_t>(gi)] = k;
    }
  }
  {
    std::vector<char> filled(static_cast<size_t>(nb), 0), visited(static_cast<size_t>(nb), 0);
    filled[static_cast<size_t>(bin_id_)] = 1;
    for (int gi : gen_idx) filled[static_cast<size_t>(gi)] = 1;
    std::deque<int> bfs{bin_id_};
    visited[static_cast<size_t>(bin_id_)] = 1;
    while (!bfs.empty()) {
      const int j = bfs.front();
      bfs.pop_front();
      for (int gi : gen_idx) {
        const int jg = mul_[static_cast<size_t>(j)][static_cast<size_t>(gi)];
        if (!filled[static_cast<size_t>(jg)]) {
          for (int i = 0; i < nb; ++i)
            mul_[static_cast<size_t>(i)][static_cast<size_t>(jg)] =
                mul_[static_cast<size_t>(mul_[static_cast<size_t>(i)][static_cast<size_t>(j)])]
                    [static_cast<size_t>(gi)];
          filled[static_cast<size_t>(jg)] = 1;
        }
        if (!visited[static_cast<size_t>(jg)]) {
          visited[static_cast<size_t>(jg)] = 1;
          bfs.push_back(jg);
        }
      }
    }
    for (int j = 0; j < nb; ++j)
      if (!filled[static_cast<size_t>(j)]) throw std::logic_error("Cayley fill missed an element");
  }

  neg_.resize(static_cast<size_t>(nb));
  canon_.resize(static_cast<size_t>(nb));
  for (int i = 0; i < nb; ++i) {
    const int m = binary_index(binary_[static_cast<size_t>(i)].mul_scalar(-CycNum::one()));
    if (m < 0) throw std::logic_error("binary group misses a negative");
    neg_[static_cast<size_t>(i)] = m;
  }
  for (int i = 0; i < nb; ++i) canon_[static_cast<size_t>(i)] = std::min(i, neg_[static_cast<size_t>(i)]);

  binary_order_of_.assign(static_cast<size_t>(nb), 0);
  for (int i = 0; i < nb; ++i) {
    int cur = i, k = 1;
    while (cur != bin_id_) {
      cur = mul_[static_cast<size_t>(cur)][static_cast<size_t>(i)];
      ++k;
      if (k > 4 * nb) throw std::logic_error("binary element order runaway");
    }
    binary_order_of_[static_cast<size_t>(i)] = k;
  }

  // Projective elements: pairs of sign-canonical indices. (p1, p2), (-p1, p2),
  // (p1, -p2), (-p1, -p2) all act identically on P3.
  for (int l = 0; l < nb; ++l) {
    if (canon_[static_cast<size_t>(l)] != l) continue;
    for (int r = 0; r < nb; ++r) {
      if (canon_[static_cast<size_t>(r)] != r) continue;
      pair_lookup_[pair_key(l, r)] = static_cast<int>(elements_.size());
      elements_.push_back(GroupElement{l, r});
    }
  }
  const int expected = (nb / 2) * (nb / 2);
  if (order() != expected)
    throw std::runtime_error("projective group has wrong order: got " + std::to_string(order()));

  identity_ = element_of_pair(bin_id_, bin_id_);

  for (const Quat& g : binary_generators(kind)) {
    const int gi = binary_index(g);
    if (gi < 0) throw std::logic_error("generator missing from closure");
    for (int e : {element_of_pair(gi, bin_id_), element_of_pair(bin_id_, gi)}) {
      bool seen = false;
      for (int h : generators_) seen = seen || h == e;
      if (!seen) generators_.push_back(e);
    }
  }
}

std::uint64_t FiniteGroup::pair_key(int l, int r) const {
  return static_cast<std::uint64_t>(l) * 1024u + static_cast<std::uint64_t>(r);
}

int FiniteGroup::binary_index(const Quat& q) const {
  auto it = quat_lookup_.find(q.fingerprint());
  if (it == quat_lookup_.end()) return -1;
  for (int idx : it->second)
    if (binary_[static_cast<size_t>(idx)] == q) return idx;
  return -1;
}

int FiniteGroup::element_of_pair(int l, int r) const {
  const int cl = canon_[static_cast<size_t>(l)], cr = canon_[static_cast<size_t>(r)];
  auto it = pair_lookup_.find(pair_key(cl, cr));
  if (it == pair_lookup_.end()) throw std::logic_error("element_of_pair: pair not found");
  return it->second;
}

int FiniteGroup::elem_mul(int a, int b) const {
  const GroupElement& x = elements_[static_cast<size_t>(a)];
  const GroupElement& y = elements_[static_cast<size_t>(b)];
  return element_of_pair(mul_[static_cast<size_t>(x.left)][static_cast<size_t>(y.left)],
                         mul_[static_cast<size_t>(x.right)][static_cast<size_t>(y.right)]);
}

int FiniteGroup::elem_inv(int a) const {
  const GroupElement& x = elements_[static_cast<size_t>(a)];
  int li = -1, ri = -1;
  const int nb = binary_order();
  for (int j = 0; j < nb; ++j) {
    if (mul_[static_cast<size_t>(x.left)][static_cast<size_t>(j)] == bin_id_) li = j;
    if (mul_[static_cast<size_t>(x.right)][static_cast<size_t>(j)] == bin_id_) ri = j;
  }
  if (li < 0 || ri < 0) throw std::logic_error("elem_inv: missing inverse");
  return element_of_pair(li, ri);
}

int FiniteGroup::element_order(int a) const {
  int cur = a, k = 1;
  while (cur != identity_) {
    cur = elem_mul(cur, a);
    ++k;
    if (k > 4 * order()) throw std::logic_error("element order runaway");
  }
  return k;
}

CycMatrix FiniteGroup::matrix(int a) const { return sigma(left_quat(a), right_quat(a)); }

FiniteGroup build_projective_group(GroupKind kind) { return FiniteGroup(kind); }

}  // namespace k3pencil
