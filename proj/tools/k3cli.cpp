#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <k3pencil/catalog.hpp>
#include <k3pencil/fixgeom.hpp>
#include <k3pencil/pencil.hpp>
#include <k3pencil/verify.hpp>

using namespace k3pencil;

namespace {

// Accepts "12,3", "8,generic", or a full record name like "special_12_3".
std::string translate_case_id(const std::string& id) {
  const size_t comma = id.find(',');
  if (comma == std::string::npos) return id;
  const std::string n = id.substr(0, comma);
  const std::string tail = id.substr(comma + 1);
  if (tail == "generic") return "generic_" + n;
  return "special_" + n + "_" + tail;
}

void print_case_text(std::ostream& os, const CaseReport& rep) {
  os << "== " << rep.case_name << "\n";
  for (const CheckResult& r : rep.entries) {
    os << (r.pass ? "    ok  " : "  FAIL  ") << r.name << ": " << r.computed;
    if (!r.pass) os << " (expected " << r.expected << "; " << r.source << ")";
    os << "\n";
  }
}

nlohmann::ordered_json case_json(const CaseReport& rep) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const CheckResult& r : rep.entries)
    entries.push_back({{"name", r.name},
                       {"computed", r.computed},
                       {"expected", r.expected},
                       {"paper_ref", r.source},
                       {"pass", r.pass}});
  return {{"case", rep.case_name}, {"entries", entries}};
}

bool same_graph(const CurveConfig& a, const CurveConfig& b) {
  const std::set<std::string> la(a.labels.begin(), a.labels.end());
  const std::set<std::string> lb(b.labels.begin(), b.labels.end());
  auto norm = [](const CurveConfig& c) {
    std::set<std::pair<std::string, std::string>> e;
    for (const auto& [x, y] : c.edges) e.insert(x < y ? std::make_pair(x, y) : std::make_pair(y, x));
    return e;
  };
  return la == lb && norm(a) == norm(b);
}

// Internal checklist for `verify all`: every public operation of the library
// must have been exercised by the run. Most operations are covered by the
// report rows themselves (the fix-line sweep, the node census, the exact
// linear algebra, the pencil arithmetic); the remaining entry points are
// driven here directly against the bundled data.
std::vector<std::string> coverage_problems(const Catalog& cat,
                                           const std::vector<CaseReport>& reports) {
  std::vector<std::string> problems;

  // 1. row census: one representative row per operation family
  std::set<std::string> names;
  bool has_dual = false, has_swallow = false;
  for (const CaseReport& rep : reports)
    for (const CheckResult& r : rep.entries) {
      names.insert(r.name);
      if (r.name.rfind("dual class ", 0) == 0) has_dual = true;
      if (r.name.rfind("swallow_", 0) == 0) has_swallow = true;
    }
  const char* required[] = {
      "group_order",     "binary_order",   "projective_order_identity",
      "base_line_count", "base_fix_order", "ruling_orbits",
      "ruling_orbits_mirror", "offquadric", "crossing_census",
      "crossing_types",  "line_points",    "curve_census",
      "ns",              "node_group",     "lines",
      "dynkin",          "orbit_stabilizer_identity", "rank",
      "det",             "det_factors",    "blocks",
      "glue_class_1",    "glue_class_2",   "glue_index",
      "glue_disc",       "disc_group",     "discriminant",
      "search_p2",       "search_p3",      "search_contains_glue",
      "component_shape", "cross_ratio",    "j_num",
      "j_den",           "j_symmetry",     "j_elliptic_ratio",
      "ramification",    "orbit_cross_ratio_agreement",
  };
  for (const char* name : required)
    if (!names.count(name)) problems.push_back(std::string("missing check: ") + name);
  if (!has_dual) problems.push_back("missing check: dual class membership");
  if (!has_swallow) problems.push_back("missing check: swallow counts");

  // 2. the catalog serializer round-trips byte-identically
  try {
    const std::string once = serialize_catalog(cat);
    std::istringstream is(once);
    if (serialize_catalog(parse_catalog(is, cat.source)) != once)
      problems.push_back("catalog serialization does not round-trip");
  } catch (const std::exception& e) {
    problems.push_back(std::string("catalog round-trip failed: ") + e.what());
  }

  // 3. the flattened expectation table covers every stored value
  size_t meta_total = 0;
  for (const PencilCase& c : cat.cases) meta_total += c.meta.size();
  if (expected_table(cat).size() != meta_total)
    problems.push_back("expected-value table does not cover all stored values");

  // 4. the hand-built configurations agree with the bundled records
  const Catalog& builtin = builtin_catalog();
  for (int n : {6, 8, 12}) {
    const std::string gname = "generic_" + std::to_string(n);
    if (!same_graph(generic_config(n), builtin.at(gname).config))
      problems.push_back("configuration builder disagrees for " + gname);
    for (int i = 1; i <= 4; ++i) {
      const std::string sname = "special_" + std::to_string(n) + "_" + std::to_string(i);
      if (!same_graph(special_config(n, i), builtin.at(sname).config))
        problems.push_back("configuration builder disagrees for " + sname);
    }
    if (std::to_string(cyclic_base_order(n)) != builtin.at(gname).meta_at("base_fix_order"))
      problems.push_back("cyclic base order disagrees for " + gname);
    std::ostringstream cr;
    cr << parameter_cross_ratio(n);
    if (cr.str() != builtin.at(gname).meta_at("cross_ratio"))
      problems.push_back("parameter cross-ratio disagrees for " + gname);
  }

  return problems;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact recomputation and verification of the three symmetric K3 pencil catalogs"};
  app.require_subcommand(1);

  std::string catalog_path;
  app.add_option("--catalog", catalog_path, "catalog file (default: bundled data)");

  std::string scope = "all";
  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "recompute every stored quantity in a scope and compare exactly");
  cmd_verify->add_option("scope", scope, "groups|fixlines|singularities|lattices|pencil|all");

  std::string case_id;
  std::string format = "text";
  CLI::App* cmd_report = app.add_subcommand("report", "emit the full report for one case");
  cmd_report->add_option("--case", case_id, "case id: 12,3 or 8,generic or special_12_3")
      ->required();
  cmd_report->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Catalog file_cat;
    if (!catalog_path.empty()) file_cat = parse_catalog_file(catalog_path);
    const Catalog& cat = catalog_path.empty() ? builtin_catalog() : file_cat;

    if (cmd_verify->parsed()) {
      const std::vector<CaseReport> reports = run_verification(cat, scope);
      size_t checks = 0, failed = 0;
      for (const CaseReport& rep : reports) {
        print_case_text(std::cout, rep);
        for (const CheckResult& r : rep.entries) {
          ++checks;
          if (!r.pass) ++failed;
        }
      }
      std::cout << "== summary: " << checks << " checks, " << (checks - failed) << " ok, "
                << failed << " FAIL\n";
      if (scope == "all") {
        const std::vector<std::string> problems = coverage_problems(cat, reports);
        for (const std::string& p : problems) std::cerr << "coverage: " << p << "\n";
        if (!problems.empty()) return 2;
      }
      return failed == 0 ? 0 : 1;
    }

    const CaseReport rep = report_case(cat, translate_case_id(case_id));
    if (format == "json")
      std::cout << case_json(rep).dump(2) << "\n";
    else
      print_case_text(std::cout, rep);
    return rep.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
