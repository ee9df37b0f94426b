#pragma once

#include <k3pencil/rational.hpp>

#include <string>
#include <utility>
#include <vector>

namespace k3pencil {

using IntMat = std::vector<std::vector<BigInt>>;
using RatVec = std::vector<Rational>;

// Dual graph of a curve configuration: vertices are smooth rational curves of
// self-intersection -2, edges are transversal intersections (pairing 1).
struct CurveConfig {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> edges;
};

// Integral lattice presented by a Gram matrix over a labelled curve basis.
// `glue` holds rational vectors (in that basis) adjoined to the span of the
// basis; the basis itself is never re-written, so curve-level pairings stay
// directly queryable.
struct IntLattice {
  IntMat gram;
  std::vector<std::string> basis_labels;
  std::vector<RatVec> glue;
};

struct DiscriminantData {
  BigInt determinant;                              // signed
  BigInt abs_discriminant;                         // |determinant|
  std::vector<std::pair<BigInt, int>> factorization;  // of abs_discriminant
  std::vector<BigInt> group_invariants;            // elementary divisors > 1
};

struct SmithResult {
  IntMat u;  // unimodular row transform
  IntMat d;  // diagonal, divisibility chain d[i] | d[i+1]
  IntMat v;  // unimodular column transform; u * m * v == d
  std::vector<BigInt> divisors;  // nonzero diagonal entries, all positive
};

struct GlueExtension {
  IntLattice lattice;     // original basis and gram, accepted glue appended
  BigInt index;           // index of the extension over the input lattice
  DiscriminantData disc;  // discriminant data of the extended lattice
};

struct DivisibilityReport {
  bool divisible = false;
  int support = 0;                      // number of curves with nonzero coefficient
  Rational scaled_self_intersection;    // (c/p)^2 when the pairing conditions hold
  std::vector<std::string> reasons;     // failure diagnostics, empty on success
};

// Builds the Gram matrix of a configuration: -2 on the diagonal, 1 on edges.
// Throws std::invalid_argument for duplicate labels, loops, unknown endpoints
// or repeated edges.
IntLattice gram_from_config(const CurveConfig& c);

// Signed determinant by fraction-free (Bareiss) elimination over big integers.
BigInt exact_determinant(const IntMat& m);

// Smith normal form with transform tracking; u*m*v == d, u and v unimodular.
SmithResult smith_normal_form(const IntMat& m);

// Exact pairing <x, y> with respect to the lattice Gram matrix.
Rational lattice_pairing(const IntLattice& lat, const RatVec& x, const RatVec& y);

// True iff x pairs integrally with every basis vector and every glue vector.
// Throws std::invalid_argument on dimension mismatch.
bool dual_membership(const RatVec& x, const IntLattice& lat);

// Adjoins rational vectors to the lattice.  Every vector must pair integrally
// with all generators accepted so far and have even self-pairing, otherwise it
// is rejected with std::invalid_argument.  The discriminant of the result is
// the input discriminant divided by the square of the extension index.
GlueExtension extend_by_glue(const IntLattice& lat, const std::vector<RatVec>& vs);

// Discriminant data of the lattice spanned by the basis together with the glue
// vectors (equal to the Gram determinant data when no glue is present).
DiscriminantData discriminant_data(const IntLattice& lat);

// Necessary-condition check that c (coefficients in {0, +-1}) is divisible by
// p in an even overlattice: c/p must pair integrally with all generators, have
// even integral self-pairing, and satisfy the support cardinality rule
// (exactly eight curves for p = 2, at least twelve for p = 3).  Never throws
// for a bad class; failures are reported in the diagnostics.
DivisibilityReport check_divisible_class(const std::vector<BigInt>& c, int p, const IntLattice& lat);

// Exhaustive search for divisible classes: every vector c with coefficients
// in {0, +1, -1} (sign-normalized so the first nonzero entry is +1) whose
// class c/p passes check_divisible_class.  Candidates are enumerated inside
// the kernel of the Gram matrix mod p, so the cost is O(p^k) for k the
// p-rank of the discriminant group, not 3^rank.  Results are sorted.
std::vector<std::vector<BigInt>> search_divisible_classes(const IntLattice& lat, int p);

}  // namespace k3pencil
