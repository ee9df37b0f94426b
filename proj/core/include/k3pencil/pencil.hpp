#pragma once

#include <map>
#include <string>
#include <vector>

#include "k3pencil/catalog.hpp"
#include "k3pencil/cyclotomic.hpp"
#include "k3pencil/rational.hpp"

namespace k3pencil {

// Ramification bookkeeping for the pencil parameter viewed as a degree-n map
// on one line of a swallowing family. The two points where the line meets
// the invariant quadric each ramify with order n/2; the remaining Hurwitz
// budget sits over the four singular parameters, where point orbits of the
// line collide into nodes of the singular members.
struct SwallowCount {
  std::string case_name;  // "special_12_1", ...
  int index = 0;          // 1..4
  int nodes = 0;          // nodes on one line of the family for that member
  int orbits = 0;         // point orbits swallowed into those nodes
};

struct RamificationSheet {
  int n = 0;
  std::string line_type;
  int cover_degree = 0;          // n
  int total_ramification = 0;    // 2 * cover_degree - 2
  int quadric_contribution = 0;  // 2 * (n/2 - 1)
  int off_quadric = 0;           // total_ramification - quadric_contribution
  std::vector<SwallowCount> swallows;
};

// Sheet for a line family whose points fall together at nodes; only the
// families with at least two point orbits per line qualify (N'/N'' for
// n = 6, M for n = 8, M and N for n = 12). Throws std::invalid_argument for
// any other family and std::runtime_error("catalog corruption: ...") when
// the recorded swallow counts fail to exhaust the off-quadric budget.
RamificationSheet ramification_sheet(int n, const std::string& line_type);

// Nodes of a singular member on one line of the given family:
// ns * (lines of the family through one node) / (orbit length of the
// family). Zero when no line of the family meets a node; throws
// std::invalid_argument for an unknown family or a generic record and a
// corruption error when the division is not exact.
int nodes_on_line(const PencilCase& c, const std::string& line_type);

// Cross-ratio (a,b; c,d) = (a-c)(b-d) / ((a-d)(b-c)).
// Throws std::domain_error when fewer than three of the points are distinct.
Rational cross_ratio(const Rational& a, const Rational& b, const Rational& c,
                     const Rational& d);

// Cross-ratio of the four singular parameters of a pencil, in stored order.
Rational parameter_cross_ratio(int n);

// Cross-ratio of the four distinguished points cut out on the member of the
// moving line family with parameter u:
//   n = 6, 12:  4u^2 / (1 + u^2)^2
//   n = 8:      (u^2 - 2)^2 / (u^2 + 2)^2
// Throws std::domain_error on the degenerate parameters (u^2 = -1 for
// n = 6, 12 and u^2 = -2 for n = 8) where the four points do not stay
// distinct enough to have a cross-ratio.
Rational orbit_cross_ratio(int n, const Rational& u);
CycNum orbit_cross_ratio(int n, const CycNum& u);

struct FactoredRational {
  Rational value;
  std::map<BigInt, int> num_factors;  // prime factorization of |numerator|
  std::map<BigInt, int> den_factors;  // prime factorization of the denominator
};

// Absolute invariant of a cross-ratio, normalized without the elliptic
// factor: j(x) = (x^2 - x + 1)^3 / (x^2 (x - 1)^2). Invariant under the
// six-element orbit {x, 1-x, 1/x, ...}. Throws std::domain_error for
// x in {0, 1}.
FactoredRational j_invariant(const Rational& cr);

// Classical elliptic normalization 256 * j_invariant(cr).
FactoredRational j_invariant_elliptic(const Rational& cr);

// "13:3 37:3" rendering of a prime factorization; "1" when empty.
std::string format_prime_powers(const std::map<BigInt, int>& f);

}  // namespace k3pencil
