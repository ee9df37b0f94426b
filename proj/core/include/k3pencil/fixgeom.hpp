#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "k3pencil/groups.hpp"

namespace k3pencil {

// Line in P3 in canonical form: Pluecker coordinates (p01,p02,p03,p12,p13,p23)
// scaled so the first nonzero coordinate is 1, plus two spanning points. For
// lines produced by the fix-line sweep the spanning points are the two points
// where the line meets the quadric {x0^2+x1^2+x2^2+x3^2 = 0}.
struct ProjLine {
  std::array<CycNum, 6> pluecker;
  bool on_quadric = false;
  std::array<CycVec, 2> span;
};

// One orbit of fix-lines under the projective group.
struct FixLineOrbit {
  ProjLine representative;  // == members.front()
  int length = 0;           // orbit length
  int fix_group_order = 0;  // order of the cyclic group fixing the line pointwise
  int stabilizer_order = 0; // order of the line's set-stabilizer
  std::string type_label;   // "M","M'","M''","N","N'","N''","R","S" or "ruling"
  int ruling = 0;           // 1 or 2 for quadric ruling lines, 0 otherwise
  std::vector<ProjLine> members;
  std::vector<std::vector<int>> member_fixers;  // non-identity fixing elements per member
};

// Orbit of points fixed by a nontrivial subgroup: intersection points of
// fix-lines away from the quadric (the nodes of the singular pencil members).
struct FixPointRecord {
  CycVec point;                          // canonical representative
  std::string stabilizer_structure;      // "Z3", "D4", "Z2xZ2", "T", "O", "I", ...
  int stabilizer_order = 0;
  int orbit_length = 0;
  std::map<std::string, int> meeting_lines;  // line type label -> count through the point
  std::string singularity;                   // Dynkin label of the resolution
};

struct BaseLocusResult {
  int s = 0;                    // order of the pointwise fix group of each line
  std::vector<ProjLine> lines;  // 2n lines, ruling 1 first
};

// All lines pointwise fixed by some non-identity element, deduplicated and
// grouped into orbits. Ruling orbits come first (ruling 1 then 2, by
// descending length), then off-quadric orbits by ascending fix-group order.
std::vector<FixLineOrbit> fix_lines(const FiniteGroup& group);

// The 2n ruling lines whose pointwise fix group has order s = |G|/n
// (s = 2, 3, 5 for n = 6, 8, 12); these form the base locus of the pencil.
BaseLocusResult base_locus(const FiniteGroup& group);
BaseLocusResult base_locus(const FiniteGroup& group, const std::vector<FixLineOrbit>& orbits);

// Order of the cyclic fix group of a base-locus line: 2 / 3 / 5 for n = 6 / 8 / 12.
int cyclic_base_order(int n);

// Number of stabilizer orbits of points with local group Z_s x Z_t on one
// base-locus line, keyed by t. Computed honestly: the points are the tensor
// points over the poles of the complementary ruling, orbit-reduced under the
// full set-stabilizer of the line.
std::map<int, int> base_line_crossing_census(const FiniteGroup& group,
                                             const std::vector<FixLineOrbit>& orbits);

// ADE label ("A1", ...) or "smooth" for a point on a base-locus line whose
// stabilizer is Z_s x Z_t; throws std::invalid_argument for pairs that do not
// occur. t == s gives the smooth crossing points.
std::string classify_base_point(int n, int s, int t);

// ADE label of the image of a point on an off-quadric fix-line of the given
// orbit (cyclic quotient of order o(L)); throws for ruling orbits.
std::string classify_line_point(const FixLineOrbit& orbit);

// Length and number of stabilizer orbits of the points cut out on an
// off-quadric fix-line by a generic pencil member, away from the quadric.
struct LinePointCensus {
  int length = 0;  // generic orbit length |H_L| / o(L)
  int number = 0;  // number of orbits
};
LinePointCensus line_orbit_census(const FixLineOrbit& orbit, int n);

// Orbits of pairwise intersection points of off-quadric fix-lines (off the
// quadric). Each record carries the full stabilizer structure and the
// multiset of line types through the point.
std::vector<FixPointRecord> node_orbits(const FiniteGroup& group);
std::vector<FixPointRecord> node_orbits(const FiniteGroup& group,
                                        const std::vector<FixLineOrbit>& orbits);

// Dynkin type of the minimal resolution of C^2 / (binary cover of F):
// Z_k -> A_{2k-1}, D_k -> D_{k+2}, Z2xZ2 -> D4, T -> E6, O -> E7, I -> E8.
std::string node_resolution_type(const std::string& group_id);

// Quadratic form x0^2 + x1^2 + x2^2 + x3^2 and its bilinearization.
CycNum quadric_value(const CycVec& x);
CycNum quadric_pairing(const CycVec& a, const CycVec& b);

// Pluecker coordinates of the line through two independent points.
std::array<CycNum, 6> pluecker_of_span(const CycVec& a, const CycVec& b);

// Pairing whose vanishing is equivalent to two lines being coplanar.
CycNum pluecker_pairing(const std::array<CycNum, 6>& p, const std::array<CycNum, 6>& q);

}  // namespace k3pencil
