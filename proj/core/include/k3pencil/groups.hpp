#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "k3pencil/cycmatrix.hpp"

namespace k3pencil {

// The three sources: binary tetrahedral (24), octahedral (48), icosahedral
// (120), attached to the pencils with n = 6, 8, 12 respectively.
enum class GroupKind { T, O, I };

int pencil_n(GroupKind k);          // 6 / 8 / 12
GroupKind kind_for_n(int n);        // throws std::invalid_argument otherwise
std::string kind_name(GroupKind k); // "T" / "O" / "I"

// Unit quaternion in SU(2) matrix form [[a+bi, c+di], [-c+di, a-bi]], det 1.
using Quat = CycMatrix;

Quat make_quat(const CycNum& a, const CycNum& b, const CycNum& c, const CycNum& d);
Quat quat_identity();

std::vector<Quat> binary_generators(GroupKind kind);

// Multiplicative closure of arbitrary 2x2 generators; throws
// std::runtime_error once the element count passes `cap`.
std::vector<Quat> quaternion_closure(const std::vector<Quat>& gens, std::size_t cap);

// Closure of the generators under multiplication: 24 / 48 / 120 elements.
// Throws std::runtime_error if the closure exceeds a hard cap (>= 240),
// which signals wrong generators.
std::vector<Quat> build_binary_group(GroupKind kind);

// The 4x4 rotation matrix on (x0..x3) induced by X -> p1 * X * p2^-1 through
// the standard 2x2 coordinate matrix X = [[x0+ix1, x2+ix3], [-x2+ix3, x0-ix1]].
CycMatrix sigma(const Quat& p1, const Quat& p2);

// Coordinates of the rank-one tensor v (x) w under the same identification;
// the returned 4-vector lies on the quadric x0^2+x1^2+x2^2+x3^2 = 0.
CycVec tensor_point(const CycVec& v, const CycVec& w);

// Element of the projective group: a pair of unit quaternions modulo the
// sign ambiguities that act trivially on P3. Handles are indices into the
// owning FiniteGroup's canonical pair list.
struct GroupElement {
  int left;   // index into FiniteGroup::binary (canonical sign)
  int right;  // likewise
};

// A projective group PG_n together with the binary group it came from and an
// integer multiplication table, so that all pure group theory downstream runs
// on indices. Immutable after construction.
class FiniteGroup {
 public:
  explicit FiniteGroup(GroupKind kind);

  GroupKind kind() const { return kind_; }
  int n() const { return n_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int binary_order() const { return static_cast<int>(binary_.size()); }

  const std::vector<Quat>& binary() const { return binary_; }
  const std::vector<GroupElement>& elements() const { return elements_; }

  int identity() const { return identity_; }
  int element_of_pair(int l, int r) const;          // canonicalizes the signs
  int elem_mul(int a, int b) const;
  int elem_inv(int a) const;
  int element_order(int a) const;                    // projective order
  const GroupElement& element(int a) const { return elements_[static_cast<size_t>(a)]; }

  const Quat& left_quat(int a) const { return binary_[static_cast<size_t>(elements_[static_cast<size_t>(a)].left)]; }
  const Quat& right_quat(int a) const { return binary_[static_cast<size_t>(elements_[static_cast<size_t>(a)].right)]; }

  // 4x4 matrix of the canonical representative pair (computed on demand).
  CycMatrix matrix(int a) const;

  // binary-level data
  int binary_index(const Quat& q) const;             // -1 if absent
  int binary_mul(int i, int j) const { return mul_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  int binary_neg(int i) const { return neg_[static_cast<size_t>(i)]; }
  int binary_canon(int i) const { return canon_[static_cast<size_t>(i)]; }
  int binary_elem_order(int i) const { return binary_order_of_[static_cast<size_t>(i)]; }
  int binary_identity() const { return bin_id_; }

  // projective generators: sigma(g,1) and sigma(1,g) over the binary
  // generators; they generate the whole group
  const std::vector<int>& generator_elements() const { return generators_; }

 private:
  GroupKind kind_;
  int n_;
  std::vector<Quat> binary_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> neg_, canon_, binary_order_of_;
  int bin_id_ = -1;
  std::vector<GroupElement> elements_;
  std::unordered_map<std::uint64_t, std::vector<int>> quat_lookup_;
  std::unordered_map<std::uint64_t, int> pair_lookup_;
  std::vector<int> generators_;
  int identity_ = -1;

  std::uint64_t pair_key(int l, int r) const;
};

// Convenience: build the projective group for a kind (owning value).
FiniteGroup build_projective_group(GroupKind kind);

}  // namespace k3pencil
