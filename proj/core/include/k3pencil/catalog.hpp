#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "k3pencil/lattice.hpp"
#include "k3pencil/rational.hpp"

namespace k3pencil {

// One divisible-class record: integer coefficients over the record's curve
// labels, to be read as (sum coeff_i * C_i) / divisor.
struct GlueClass {
  int divisor = 0;
  std::vector<std::pair<std::string, int>> coeffs;

  bool operator==(const GlueClass&) const = default;
};

// One catalog record: a generic or special member of one of the three pencils
// together with its dual graph, glue classes and expected-value metadata.
struct PencilCase {
  std::string name;                    // "generic_6", "special_8_2", ...
  int n = 0;                           // 6, 8 or 12
  int special_index = 0;               // 0 for generic, else 1..4
  Rational lambda;                     // singular parameter (special cases)
  std::string node_group;              // projective fix group of the node orbit
  std::string dynkin;                  // resolution type of the node, "E6", ...
  std::vector<std::string> swallowed;  // curves absorbed into the new component
  CurveConfig config;
  std::vector<GlueClass> glue;
  std::map<std::string, std::string> meta;  // every META key verbatim

  bool is_special() const { return special_index > 0; }
  // Meta access; throws std::out_of_range mentioning the key when absent.
  const std::string& meta_at(const std::string& key) const;
};

struct Catalog {
  std::string source;  // file name or "<builtin>"
  std::vector<PencilCase> cases;

  const PencilCase* find(const std::string& name) const;
  const PencilCase& at(const std::string& name) const;  // throws if absent
};

// Expected-value lookup assembled from the META sections. Keys have the form
// "<case>/<quantity>"; each entry records where in the catalog it came from.
struct ExpectedEntry {
  std::string value;
  std::string source;  // "<catalog source>:<case>/META/<key>"

  bool operator==(const ExpectedEntry&) const = default;
};
using ExpectedTable = std::map<std::string, ExpectedEntry>;
ExpectedTable expected_table(const Catalog& cat);

// Parser and serializer for the .k3cat format (the grammar is documented at
// the top of core/data/catalog.k3cat). parse_catalog throws std::runtime_error
// with a "catalog corruption" message on structural or semantic problems;
// every parse runs the full validation below.
Catalog parse_catalog(std::istream& in, const std::string& source_name);
Catalog parse_catalog_file(const std::string& path);
std::string serialize_catalog(const Catalog& cat);

// The compiled-in default data set (parsed and validated once, then cached).
const Catalog& builtin_catalog();

// Dual graph of the 19-curve configuration on the generic quotient.
CurveConfig generic_config(int n);
// Dual graph of the 20-curve configuration for the singular member n,i.
CurveConfig special_config(int n, int i);

// Glue classes of a record as rational vectors over its config's curve order,
// paired with the divisor. Throws "catalog corruption" if a stored class
// fails the divisibility conditions against the record's own lattice.
std::vector<std::pair<RatVec, int>> glue_classes(const PencilCase& c);

// Order of a projective node-group id as used in the catalog
// ("Z2".."Z5", "Z2xZ2", "D3".."D5", "T", "O", "I").
int group_order(const std::string& group_id);

// True if the induced subgraph of `config` on `labels` is connected and is
// a tree of the given ADE type ("A1".."A8", "D4".."D8", "E6".."E8").
bool component_matches_dynkin(const CurveConfig& config,
                              const std::vector<std::string>& labels,
                              const std::string& type);

// Parsers for the composite META value formats. All throw
// std::runtime_error("catalog corruption: ...") on malformed input.
//   "M:3 N':4"            -> parse_type_counts
//   "4:2"                 -> parse_int_pair
//   "6:2 4:3 4:3"         -> parse_int_pairs
//   "M:Z2:450:4 ..."      -> parse_offquadric   (type:group:length:index)
//   "M:A1:4:3 ..."        -> parse_line_points  (type:ADE:length:number)
std::vector<std::pair<std::string, int>> parse_type_counts(const std::string& v);
std::pair<int, int> parse_int_pair(const std::string& v);
std::vector<std::pair<int, int>> parse_int_pairs(const std::string& v);
struct OffQuadricEntry {
  std::string type;
  std::string group;
  int length = 0;  // orbit length of the line family
  int index = 0;   // |H_L| / |F_L|
};
std::vector<OffQuadricEntry> parse_offquadric(const std::string& v);
struct LinePointEntry {
  std::string type;
  std::string singularity;  // ADE type of the resolved point
  int length = 0;           // orbit length on one line
  int number = 0;           // orbits of that length per line
};
std::vector<LinePointEntry> parse_line_points(const std::string& v);

// Full structural validation: vertex counts (19 generic / 20 special), the
// special records' component shape against node_resolution_type, swallowed
// labels existing in the matching generic graph with adjacency preserved
// outside the new component, and all glue classes passing
// check_divisible_class. Throws std::runtime_error("catalog corruption: ...").
void validate_catalog(const Catalog& cat);

}  // namespace k3pencil
