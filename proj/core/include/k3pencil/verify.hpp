#pragma once

#include <string>
#include <vector>

#include "k3pencil/catalog.hpp"

namespace k3pencil {

// One recomputed quantity checked against its stored value. `computed` is
// re-derived from scratch (group closure, fix-line sweep, exact linear
// algebra, ...), `expected` comes from the catalog record or from an internal
// identity, and `source` says which ("<catalog source>:<case>/META/<key>",
// "<catalog source>:<case>/GLUE", or "<invariant>" for identities that do not
// correspond to a stored value). Comparison is exact string equality; there
// are no tolerances anywhere.
struct CheckResult {
  std::string name;
  std::string computed;
  std::string expected;
  std::string source;
  bool pass = false;
};

struct CaseReport {
  std::string case_name;
  std::vector<CheckResult> entries;

  bool all_pass() const;
};

// The five verification scopes, in report order:
//   groups         group orders of the projective and binary groups
//   fixlines       base locus, ruling orbits, off-quadric fix-line families
//   singularities  crossing points, line points, node orbits and their types
//   lattices       Gram determinants, glue, discriminants, dual classes
//   pencil         cross-ratios, absolute invariants, ramification budgets
const std::vector<std::string>& verify_scopes();

// Recomputes every checkable quantity of every case in the catalog for one
// scope ("all" runs the five scopes in order). Cases with no entries in the
// requested scope are omitted. Throws std::invalid_argument for an unknown
// scope. Output is deterministic: same catalog, same bytes.
std::vector<CaseReport> run_verification(const Catalog& cat, const std::string& scope = "all");

// All-scope report for a single case; throws std::out_of_range if the case
// name is unknown.
CaseReport report_case(const Catalog& cat, const std::string& case_name);

}  // namespace k3pencil
