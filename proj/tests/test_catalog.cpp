#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <k3pencil/catalog.hpp>
#include <k3pencil/fixgeom.hpp>
#include <k3pencil/lattice.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
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

CurveConfig hand_generic(int n) {
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
  } else {
    c = l_block(4, 3);
    append(c, isolated("M", 3));
    append(c, pairs("N", 2));
    append(c, chain("S", 4));
  }
  return c;
}

// Edges attaching the exceptional curve for each singular member.
const std::map<std::string, std::vector<std::pair<std::string, std::string>>> k_new_edges = {
    {"special_6_1", {{"N2", "new"}, {"new", "N3"}, {"new", "M1"}}},
    {"special_6_2", {{"N2", "new"}, {"new", "N3"}}},
    {"special_6_3", {{"N6", "new"}, {"new", "N7"}}},
    {"special_6_4", {{"N6", "new"}, {"new", "N7"}, {"new", "M1"}}},
    {"special_8_1", {{"R3", "new"}, {"new", "N1"}, {"new", "M3"}}},
    {"special_8_2", {{"R3", "new"}, {"new", "M1"}, {"new", "M2"}}},
    {"special_8_3", {{"M1", "new"}, {"new", "M2"}, {"new", "M3"}}},
    {"special_8_4", {{"N2", "new"}, {"new", "M3"}, {"new", "M4"}}},
    {"special_12_1", {{"N2", "new"}, {"new", "N3"}, {"new", "M1"}}},
    {"special_12_2", {{"N2", "new"}, {"new", "M1"}, {"new", "M2"}}},
    {"special_12_3", {{"S4", "new"}, {"new", "M1"}, {"new", "M2"}}},
    {"special_12_4", {{"S4", "new"}, {"new", "N1"}, {"new", "M1"}}},
};

CurveConfig hand_special(int n, int i) {
  CurveConfig c = hand_generic(n);
  c.labels.push_back("new");
  const auto& extra = k_new_edges.at("special_" + std::to_string(n) + "_" + std::to_string(i));
  c.edges.insert(c.edges.end(), extra.begin(), extra.end());
  return c;
}

std::set<std::pair<std::string, std::string>> edge_set(const CurveConfig& c) {
  std::set<std::pair<std::string, std::string>> s;
  for (auto [a, b] : c.edges) {
    if (b < a) std::swap(a, b);
    s.emplace(a, b);
  }
  return s;
}

std::set<std::string> label_set(const CurveConfig& c) {
  return {c.labels.begin(), c.labels.end()};
}

void check_same_graph(const CurveConfig& got, const CurveConfig& want) {
  CHECK(label_set(got) == label_set(want));
  CHECK(edge_set(got) == edge_set(want));
}

BigInt det_of(const CurveConfig& c) { return exact_determinant(gram_from_config(c).gram); }

std::vector<BigInt> glue_int_coeffs(const PencilCase& c, size_t gi) {
  std::vector<BigInt> v(c.config.labels.size(), 0);
  for (const auto& [label, coeff] : c.glue.at(gi).coeffs) {
    auto it = std::find(c.config.labels.begin(), c.config.labels.end(), label);
    REQUIRE(it != c.config.labels.end());
    v[static_cast<size_t>(it - c.config.labels.begin())] = coeff;
  }
  return v;
}

Catalog parse_str(const std::string& text) {
  std::istringstream is(text);
  return parse_catalog(is, "<test>");
}

// A minimal well-formed generic record to splice corrupted specials onto.
const char* k_toy_generic =
    "CASE generic_6\n"
    "META\n"
    "n = 6\nkind = generic\ngroup_order = 144\n"
    "VERTICES\n"
    "L1\nL2\nL3\nL4\nL5\nL'1\nL'2\nL'3\nL'4\nL'5\nM1\nN1\nN2\nN3\nN4\nN5\nN6\nN7\nN8\n"
    "EDGES\n"
    "L1 L2\nL2 L3\nL3 L4\nL4 L5\nL'1 L'2\nL'2 L'3\nL'3 L'4\nL'4 L'5\nL3 L'3\n"
    "N1 N2\nN3 N4\nN5 N6\nN7 N8\n";

std::string toy_special(const std::string& meta_overrides, const std::string& edge_overrides) {
  std::string meta =
      "n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
      "node_group = Z3\ndynkin = A5\nswallowed = N1 N2 N3 N4\nns = 48\n";
  std::string edges =
      "L1 L2\nL2 L3\nL3 L4\nL4 L5\nL'1 L'2\nL'2 L'3\nL'3 L'4\nL'4 L'5\nL3 L'3\n"
      "N1 N2\nN2 new\nnew N3\nN3 N4\nN5 N6\nN7 N8\n";
  return std::string(k_toy_generic) + "\nCASE special_6_2\nMETA\n" +
         (meta_overrides.empty() ? meta : meta_overrides) +
         "VERTICES\n"
         "L1\nL2\nL3\nL4\nL5\nL'1\nL'2\nL'3\nL'4\nL'5\nM1\nN1\nN2\nN3\nN4\nN5\nN6\nN7\nN8\nnew\n"
         "EDGES\n" +
         (edge_overrides.empty() ? edges : edge_overrides);
}

}  // namespace

TEST_CASE("builtin catalog loads, validates and contains all fifteen members") {
  const Catalog& cat = builtin_catalog();
  CHECK(cat.source == "<builtin>");
  REQUIRE(cat.cases.size() == 15);
  for (int n : {6, 8, 12}) {
    CHECK(cat.find("generic_" + std::to_string(n)) != nullptr);
    for (int i = 1; i <= 4; ++i) {
      const PencilCase* c = cat.find("special_" + std::to_string(n) + "_" + std::to_string(i));
      REQUIRE(c != nullptr);
      CHECK(c->n == n);
      CHECK(c->special_index == i);
      CHECK(c->is_special());
    }
  }
  CHECK(cat.find("nonexistent") == nullptr);
  CHECK_THROWS_AS(cat.at("nonexistent"), std::out_of_range);
  CHECK_THROWS_AS(cat.at("generic_6").meta_at("no_such_key"), std::out_of_range);
  // revalidating the already-valid catalog is a no-op
  CHECK_NOTHROW(validate_catalog(cat));
}

TEST_CASE("catalog graphs equal the independently constructed configurations") {
  for (int n : {6, 8, 12}) {
    CurveConfig g = generic_config(n);
    CHECK(g.labels.size() == 19);
    check_same_graph(g, hand_generic(n));
    for (int i = 1; i <= 4; ++i) {
      CurveConfig s = special_config(n, i);
      CHECK(s.labels.size() == 20);
      check_same_graph(s, hand_special(n, i));
    }
  }
  CHECK_THROWS_AS(generic_config(7), std::invalid_argument);
  CHECK_THROWS_AS(special_config(6, 0), std::invalid_argument);
  CHECK_THROWS_AS(special_config(6, 5), std::invalid_argument);
}

TEST_CASE("singular parameters, node groups and node counts") {
  struct Row {
    int n, i;
    const char* lambda;
    const char* group;
    int ns;
    const char* dynkin;
  };
  const Row rows[] = {
      {6, 1, "-1", "T", 12, "E6"},        {6, 2, "-2/3", "Z3", 48, "A5"},
      {6, 3, "-7/12", "Z3", 48, "A5"},    {6, 4, "-1/4", "T", 12, "E6"},
      {8, 1, "-1", "O", 24, "E7"},        {8, 2, "-3/4", "D4", 72, "D6"},
      {8, 3, "-9/16", "Z2xZ2", 144, "D4"}, {8, 4, "-5/9", "D3", 96, "D5"},
      {12, 1, "-3/32", "T", 300, "E6"},   {12, 2, "-22/243", "D3", 600, "D5"},
      {12, 3, "-2/25", "D5", 360, "D7"},  {12, 4, "0", "I", 60, "E8"},
  };
  const Catalog& cat = builtin_catalog();
  const std::map<int, int> porder{{6, 144}, {8, 576}, {12, 3600}};
  for (const Row& r : rows) {
    CAPTURE(r.n);
    CAPTURE(r.i);
    const PencilCase& c = cat.at("special_" + std::to_string(r.n) + "_" + std::to_string(r.i));
    const auto [num, den] = [&] {
      const std::string s = r.lambda;
      const size_t k = s.find('/');
      if (k == std::string::npos) return std::make_pair(s, std::string("1"));
      return std::make_pair(s.substr(0, k), s.substr(k + 1));
    }();
    CHECK(c.lambda == Rational(BigInt(num), BigInt(den)));
    CHECK(c.node_group == r.group);
    CHECK(std::stol(c.meta_at("ns")) == r.ns);
    CHECK(c.dynkin == r.dynkin);
    // node count times node-group order equals the projective group order
    CHECK(r.ns * group_order(r.group) == porder.at(r.n));
    // the recorded resolution matches the group-theoretic one
    CHECK(node_resolution_type(c.node_group) == c.dynkin);
    // ... and the graph actually realizes it
    std::vector<std::string> comp = c.swallowed;
    comp.push_back("new");
    CHECK(component_matches_dynkin(c.config, comp, c.dynkin));
  }
}

TEST_CASE("component_matches_dynkin rejects wrong shapes") {
  const Catalog& cat = builtin_catalog();
  const PencilCase& c = cat.at("special_6_1");
  std::vector<std::string> comp = c.swallowed;  // E6 component without 'new'
  CHECK_FALSE(component_matches_dynkin(c.config, comp, "E6"));  // disconnected
  comp.push_back("new");
  CHECK(component_matches_dynkin(c.config, comp, "E6"));
  CHECK_FALSE(component_matches_dynkin(c.config, comp, "E7"));  // wrong rank
  CHECK_FALSE(component_matches_dynkin(c.config, comp, "D6"));  // wrong family
  CHECK_FALSE(component_matches_dynkin(c.config, comp, "X6"));  // no such family
  CHECK_FALSE(component_matches_dynkin(c.config, comp, "E"));   // no rank
  // a chain plus a detached pair is not a tree component
  std::vector<std::string> bad{"L1", "L2", "N1", "N2"};
  CHECK_FALSE(component_matches_dynkin(c.config, bad, "A4"));
  // unknown or repeated labels
  CHECK_FALSE(component_matches_dynkin(c.config, {"L1", "Q9"}, "A2"));
  CHECK_FALSE(component_matches_dynkin(c.config, {"L1", "L1"}, "A2"));
  // plain chains work
  CHECK(component_matches_dynkin(c.config, {"L1", "L2", "L3"}, "A3"));
  CHECK(component_matches_dynkin(c.config, {"M1"}, "A1"));
}

TEST_CASE("group orders") {
  CHECK(group_order("Z2") == 2);
  CHECK(group_order("Z3") == 3);
  CHECK(group_order("Z4") == 4);
  CHECK(group_order("Z5") == 5);
  CHECK(group_order("Z2xZ2") == 4);
  CHECK(group_order("D3") == 6);
  CHECK(group_order("D4") == 8);
  CHECK(group_order("D5") == 10);
  CHECK(group_order("T") == 12);
  CHECK(group_order("O") == 24);
  CHECK(group_order("I") == 60);
  CHECK_THROWS_AS(group_order("J2"), std::invalid_argument);
}

TEST_CASE("determinants of all fifteen configurations") {
  const Catalog& cat = builtin_catalog();
  const std::map<std::string, long> dets = {
      {"generic_6", 7290},   {"generic_8", 5376},   {"generic_12", 3960},
      {"special_6_1", -1215}, {"special_6_2", -4860}, {"special_6_3", -4860},
      {"special_6_4", -1215}, {"special_8_1", -448},  {"special_8_2", -1344},
      {"special_8_3", -2688}, {"special_8_4", -1792}, {"special_12_1", -660},
      {"special_12_2", -1320}, {"special_12_3", -792}, {"special_12_4", -132},
  };
  for (const auto& [name, want] : dets) {
    CAPTURE(name);
    const PencilCase& c = cat.at(name);
    const BigInt d = det_of(c.config);
    CHECK(d == BigInt(want));
    // the stored 'det' META key always holds the recomputable value
    CHECK(c.meta_at("det") == d.str());
  }
  // the one discrepancy: the tabulated discriminant of the 12,2 member does
  // not equal the recomputed one; both readings are kept in the record
  const PencilCase& odd = cat.at("special_12_2");
  CHECK(odd.meta_at("det") == "-1320");
  CHECK(odd.meta_at("disc") == "-440");
}

TEST_CASE("glue classes produce the expected overlattices") {
  const Catalog& cat = builtin_catalog();
  struct Row {
    const char* name;
    long disc;  // after adjoining the stored classes
    long index;
  };
  const Row rows[] = {
      {"generic_6", 90, 9},    {"special_6_1", -15, 9}, {"special_6_2", -60, 9},
      {"special_6_3", -60, 9}, {"special_6_4", -15, 9}, {"generic_8", 336, 4},
      {"special_8_1", -28, 4}, {"special_8_2", -84, 4}, {"special_8_3", -168, 4},
      {"special_8_4", -112, 4},
  };
  for (const Row& r : rows) {
    CAPTURE(r.name);
    const PencilCase& c = cat.at(r.name);
    REQUIRE(c.glue.size() == 2);
    IntLattice lat = gram_from_config(c.config);
    std::vector<RatVec> vs;
    for (const auto& [v, divisor] : glue_classes(c)) {
      CHECK((divisor == 2 || divisor == 3));
      vs.push_back(v);
    }
    const GlueExtension ext = extend_by_glue(lat, vs);
    CHECK(ext.index == BigInt(r.index));
    CHECK(ext.disc.determinant == BigInt(r.disc));
    CHECK(c.meta_at(c.is_special() ? "disc" : "glue_disc") == std::to_string(r.disc));
    CHECK(std::stol(c.meta_at("glue_index")) == r.index);
    // determinant drops by the square of the index
    CHECK(exact_determinant(lat.gram) == ext.disc.determinant * ext.index * ext.index);
  }
  // no divisible classes exist on the 12-pencil members: the records carry
  // no glue and their discriminants equal the raw determinants
  for (const char* name : {"generic_12", "special_12_1", "special_12_2", "special_12_3",
                           "special_12_4"}) {
    const PencilCase& c = cat.at(name);
    CHECK(c.glue.empty());
    if (c.is_special()) CHECK(c.meta.count("glue_index") == 0);
  }
}

TEST_CASE("divisible-class search reproduces the stored glue and nothing else survives") {
  const Catalog& cat = builtin_catalog();
  const std::map<std::string, size_t> counts = {
      {"generic_6", 80},   {"special_6_1", 28}, {"special_6_2", 28},
      {"special_6_3", 28}, {"special_6_4", 28}, {"generic_8", 1920},
      {"special_8_1", 1152}, {"special_8_2", 768}, {"special_8_3", 1280},
      {"special_8_4", 896},
  };
  for (const auto& [name, want] : counts) {
    CAPTURE(name);
    const PencilCase& c = cat.at(name);
    const int p = c.n == 6 ? 3 : 2;
    IntLattice lat = gram_from_config(c.config);
    const auto found = search_divisible_classes(lat, p);
    CHECK(found.size() == want);
    // every stored class appears among the search results (up to the
    // search's sign normalization, which the stored classes already use)
    for (size_t gi = 0; gi < c.glue.size(); ++gi) {
      CHECK(c.glue[gi].divisor == p);
      const std::vector<BigInt> stored = glue_int_coeffs(c, gi);
      CHECK(std::find(found.begin(), found.end(), stored) != found.end());
    }
    // the other prime admits no divisible classes at all
    CHECK(search_divisible_classes(lat, p == 2 ? 3 : 2).empty());
  }
  for (const char* name : {"generic_12", "special_12_1", "special_12_2", "special_12_3",
                           "special_12_4"}) {
    CAPTURE(name);
    IntLattice lat = gram_from_config(cat.at(name).config);
    CHECK(search_divisible_classes(lat, 2).empty());
    CHECK(search_divisible_classes(lat, 3).empty());
  }
}

TEST_CASE("serialization round-trips byte for byte") {
  const Catalog& cat = builtin_catalog();
  const std::string text = serialize_catalog(cat);
  std::istringstream is(text);
  const Catalog again = parse_catalog(is, "<roundtrip>");
  REQUIRE(again.cases.size() == cat.cases.size());
  for (size_t i = 0; i < cat.cases.size(); ++i) {
    const PencilCase& a = cat.cases[i];
    const PencilCase& b = again.cases[i];
    CHECK(a.name == b.name);
    CHECK(a.n == b.n);
    CHECK(a.special_index == b.special_index);
    CHECK(a.meta == b.meta);
    CHECK(a.config.labels == b.config.labels);
    CHECK(a.config.edges == b.config.edges);
    CHECK(a.glue == b.glue);
    CHECK(a.swallowed == b.swallowed);
  }
  CHECK(serialize_catalog(again) == text);
}

TEST_CASE("parse_catalog_file reads from disk and reports missing files") {
  const std::string path = "test_catalog_roundtrip.k3cat";
  {
    std::ofstream out(path);
    out << serialize_catalog(builtin_catalog());
  }
  const Catalog cat = parse_catalog_file(path);
  CHECK(cat.source == path);
  CHECK(cat.cases.size() == 15);
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(parse_catalog_file("no_such_file.k3cat"),
                       doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("expected table flattens every META key with its provenance") {
  const Catalog& cat = builtin_catalog();
  const ExpectedTable t = expected_table(cat);
  // one entry per (case, key) pair
  size_t want = 0;
  for (const auto& c : cat.cases) want += c.meta.size();
  CHECK(t.size() == want);
  const auto& e = t.at("generic_6/det");
  CHECK(e.value == "7290");
  CHECK(e.source == "<builtin>:generic_6/META/det");
  CHECK(t.at("special_12_2/disc").value == "-440");
  CHECK(t.at("special_12_2/det").value == "-1320");
  CHECK(t.at("generic_8/glue_disc").value == "336");
  CHECK(t.count("generic_6/no_such_key") == 0);
}

TEST_CASE("parser rejects malformed input") {
  auto bad = [](const std::string& text, const char* needle) {
    CHECK_THROWS_WITH_AS(parse_str(text), doctest::Contains(needle), std::runtime_error);
  };
  bad("L1 L2\n", "outside any section");
  bad("CASE a\nL1\n", "outside any section");
  bad("CASE \nMETA\n", "CASE without a name");
  bad(std::string(k_toy_generic) + std::string(k_toy_generic), "duplicate case");
  bad("CASE a\nMETA\nn = 6\nn = 6\n", "duplicate META key");
  bad("CASE a\nMETA\nn 6\n", "without '='");
  bad("CASE a\nMETA\nn =\n", "empty META key or value");
  bad("CASE a\nMETA\nn = six\nkind = generic\n", "bad integer");
  bad("CASE a\nMETA\nkind = generic\n", "lacks META key 'n'");
  bad("CASE a\nMETA\nn = 7\nkind = generic\n", "invalid n");
  bad("CASE a\nMETA\nn = 6\n", "lacks META key 'kind'");
  bad("CASE a\nMETA\nn = 6\nkind = strange\n", "invalid kind");
  bad("CASE a\nMETA\nn = 6\nkind = special\nindex = 9\n", "invalid index");
  bad("CASE a\nMETA\nn = 6\nkind = special\nindex = 1\n", "lacks META key 'lambda'");
  bad("CASE a\nVERTICES\nL1 L2\n", "must hold one label");
  bad("CASE a\nEDGES\nL1\n", "must hold two labels");
  bad("CASE a\nGLUE\n2 L1:1\n", "GLUE line without '|'");
  bad("CASE a\nGLUE\n2 | L1\n", "bad GLUE term");
  bad("CASE a\nGLUE\n2 |\n", "empty GLUE class");
  bad("CASE a\nMETA\nn = 6\nkind = special\nindex = 1\nlambda = 1/0\n", "bad rational");
}

TEST_CASE("validation rejects structurally corrupted catalogs") {
  auto bad = [](const std::string& text, const char* needle) {
    CHECK_THROWS_WITH_AS(parse_str(text), doctest::Contains(needle), std::runtime_error);
  };
  // generic with a wrong curve count
  bad("CASE generic_6\nMETA\nn = 6\nkind = generic\nVERTICES\nL1\nL2\n", "must have 19 curves");
  // special cases spliced onto a toy generic record
  bad(toy_special("", "") + "only_one_token\n", "must hold two labels");
  // wrong vertex count (an extra isolated curve keeps the gram valid)
  {
    std::string t = toy_special("", "");
    const size_t pos = t.rfind("\nnew\n");
    REQUIRE(pos != std::string::npos);
    t.replace(pos, 5, "\nnew\nextra\n");
    bad(t, "must have 20 curves");
  }
  // missing the exceptional curve label
  {
    std::string t = toy_special("", "");
    size_t pos;
    while ((pos = t.find("new")) != std::string::npos) t.replace(pos, 3, "xyz");
    bad(t, "lacks the 'new' exceptional curve");
  }
  // swallowing an unknown curve
  bad(toy_special("n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
                  "node_group = Z3\ndynkin = A5\nswallowed = N1 N2 N3 Q7\nns = 48\n",
                  ""),
      "swallows unknown curve");
  // repeated swallowed curve
  bad(toy_special("n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
                  "node_group = Z3\ndynkin = A5\nswallowed = N1 N1 N3 N4\nns = 48\n",
                  ""),
      "repeats a swallowed curve");
  // dynkin type inconsistent with the node group
  bad(toy_special("n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
                  "node_group = Z3\ndynkin = A4\nswallowed = N1 N2 N3 N4\nns = 48\n",
                  ""),
      "does not match the resolution");
  // unknown node group
  bad(toy_special("n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
                  "node_group = Q8\ndynkin = A5\nswallowed = N1 N2 N3 N4\nns = 48\n",
                  ""),
      "unknown group id");
  // component not of the announced shape (detach one chain edge)
  bad(toy_special("",
                  "L1 L2\nL2 L3\nL3 L4\nL4 L5\nL'1 L'2\nL'2 L'3\nL'3 L'4\nL'4 L'5\nL3 L'3\n"
                  "N1 N2\nN2 new\nN3 N4\nN5 N6\nN7 N8\n"),
      "component is not a A5 tree");
  // an edge joining the component to the untouched curves
  bad(toy_special("",
                  "L1 L2\nL2 L3\nL3 L4\nL4 L5\nL'1 L'2\nL'2 L'3\nL'3 L'4\nL'4 L'5\nL3 L'3\n"
                  "N1 N2\nN2 new\nnew N3\nN3 N4\nN4 M1\nN5 N6\nN7 N8\n"),
      "joining the component");
  // adjacency outside the component must stay the generic one
  bad(toy_special("",
                  "L1 L2\nL2 L3\nL3 L4\nL4 L5\nL'1 L'2\nL'2 L'3\nL'3 L'4\nL'4 L'5\nL3 L'3\n"
                  "N1 N2\nN2 new\nnew N3\nN3 N4\nN5 N6\nN7 N8\nM1 L1\n"),
      "changes the adjacency");
  // node count violating ns * |F| = |G|
  bad(toy_special("n = 6\nkind = special\nindex = 2\nlambda = -2/3\n"
                  "node_group = Z3\ndynkin = A5\nswallowed = N1 N2 N3 N4\nns = 47\n",
                  ""),
      "violates ns * |F| = |G|");
  // graph-level defects surface as corruption too
  bad("CASE generic_6\nMETA\nn = 6\nkind = generic\nVERTICES\nL1\nL1\n", "catalog corruption");
}

TEST_CASE("stored glue classes must pass the divisibility conditions") {
  auto bad = [](const std::string& extra_glue, const char* needle) {
    std::string t = toy_special("", "");
    t += "GLUE\n" + extra_glue;
    CHECK_THROWS_WITH_AS(parse_str(t), doctest::Contains(needle), std::runtime_error);
  };
  // divisor outside {2, 3}
  bad("5 | L1:1 L2:-1\n", "has divisor 5");
  // unknown curve
  bad("3 | Q1:1 L2:-1\n", "unknown curve");
  // repeated curve
  bad("3 | L1:1 L1:-1 L2:1\n", "repeats curve");
  // support too small for p = 3
  bad("3 | L1:1 L2:-1 L4:1 L5:-1\n", "fails the divisibility conditions");
  // good class for the wrong prime: eight curves but p = 3 pairings fail
  bad("2 | L1:1 L2:-1 L4:1 L5:-1 N1:1 N2:-1 N3:1 N4:-1\n", "fails the divisibility conditions");
}

TEST_CASE("composite META value parsers") {
  using TC = std::vector<std::pair<std::string, int>>;
  CHECK(parse_type_counts("M:3 N':4") == TC{{"M", 3}, {"N'", 4}});
  CHECK(parse_type_counts("M'':2") == TC{{"M''", 2}});
  CHECK(parse_int_pair("4:2") == std::pair<int, int>{4, 2});
  CHECK(parse_int_pairs("6:2 4:3 4:3") ==
        std::vector<std::pair<int, int>>{{6, 2}, {4, 3}, {4, 3}});
  const auto oq = parse_offquadric("M:Z2:450:4 N:Z3:200:6");
  REQUIRE(oq.size() == 2);
  CHECK(oq[0].type == "M");
  CHECK(oq[0].group == "Z2");
  CHECK(oq[0].length == 450);
  CHECK(oq[0].index == 4);
  CHECK(oq[1].type == "N");
  const auto lp = parse_line_points("S:A4:10:1");
  REQUIRE(lp.size() == 1);
  CHECK(lp[0].type == "S");
  CHECK(lp[0].singularity == "A4");
  CHECK(lp[0].length == 10);
  CHECK(lp[0].number == 1);
  auto bad = [](auto&& fn, const std::string& v) {
    CHECK_THROWS_WITH_AS(fn(v), doctest::Contains("catalog corruption"), std::runtime_error);
  };
  bad([](const std::string& v) { return parse_type_counts(v); }, "");
  bad([](const std::string& v) { return parse_type_counts(v); }, "M");
  bad([](const std::string& v) { return parse_type_counts(v); }, "M:x");
  bad([](const std::string& v) { return parse_type_counts(v); }, ":3");
  bad([](const std::string& v) { return parse_int_pair(v); }, "4");
  bad([](const std::string& v) { return parse_int_pair(v); }, "4:2:1");
  bad([](const std::string& v) { return parse_int_pair(v); }, "a:2");
  bad([](const std::string& v) { return parse_int_pairs(v); }, "");
  bad([](const std::string& v) { return parse_offquadric(v); }, "M:Z2:450");
  bad([](const std::string& v) { return parse_offquadric(v); }, ":Z2:450:4");
  bad([](const std::string& v) { return parse_line_points(v); }, "S:A4:10:1:9");
  bad([](const std::string& v) { return parse_line_points(v); }, "S:A4:ten:1");
}

TEST_CASE("glue metadata of mirror-image members matches") {
  // the two tetrahedral members of the sextic pencil carry the same data,
  // as do the two A5 members; only the swallowed labels differ
  const Catalog& cat = builtin_catalog();
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"special_6_1", "special_6_4"}, {"special_6_2", "special_6_3"}}) {
    const PencilCase& ca = cat.at(a);
    const PencilCase& cb = cat.at(b);
    CHECK(ca.node_group == cb.node_group);
    CHECK(ca.dynkin == cb.dynkin);
    CHECK(ca.meta_at("ns") == cb.meta_at("ns"));
    CHECK(ca.meta_at("det") == cb.meta_at("det"));
    CHECK(ca.meta_at("disc") == cb.meta_at("disc"));
    CHECK(ca.swallowed != cb.swallowed);
  }
}
