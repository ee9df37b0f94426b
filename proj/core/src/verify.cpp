#include <k3pencil/verify.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <k3pencil/fixgeom.hpp>
#include <k3pencil/lattice.hpp>
#include <k3pencil/pencil.hpp>
#include <k3pencil/rational.hpp>

namespace k3pencil {

namespace {

// Group-theoretic machinery depends only on n; building it (closure, fix-line
// sweep, node orbits) dominates the runtime, so cache one fixture per pencil.
struct GeometryFixture {
  FiniteGroup group;
  std::vector<FixLineOrbit> orbits;
  BaseLocusResult base;
  std::map<int, int> crossings;
  std::vector<FixPointRecord> nodes;

  explicit GeometryFixture(int n)
      : group(kind_for_n(n)),
        orbits(fix_lines(group)),
        base(base_locus(group, orbits)),
        crossings(base_line_crossing_census(group, orbits)),
        nodes(node_orbits(group, orbits)) {}
};

const GeometryFixture& fixture(int n) {
  static std::map<int, std::unique_ptr<GeometryFixture>> cache;
  std::unique_ptr<GeometryFixture>& slot = cache[n];
  if (!slot) slot = std::make_unique<GeometryFixture>(n);
  return *slot;
}

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

void add(std::vector<CheckResult>& out, std::string name, std::string computed,
         std::string expected, std::string source) {
  const bool pass = computed == expected;
  out.push_back({std::move(name), std::move(computed), std::move(expected), std::move(source), pass});
}

const std::string* find_meta(const PencilCase& c, const std::string& key) {
  auto it = c.meta.find(key);
  return it == c.meta.end() ? nullptr : &it->second;
}

std::string meta_src(const Catalog& cat, const PencilCase& c, const std::string& key) {
  return cat.source + ":" + c.name + "/META/" + key;
}

constexpr const char* k_invariant = "<invariant>";

// Off-quadric orbits in deterministic order (by type label: M < M' < M'' < N < ...).
std::vector<const FixLineOrbit*> off_quadric_orbits(const GeometryFixture& fx) {
  std::vector<const FixLineOrbit*> out;
  for (const FixLineOrbit& o : fx.orbits)
    if (o.ruling == 0) out.push_back(&o);
  std::sort(out.begin(), out.end(), [](const FixLineOrbit* a, const FixLineOrbit* b) {
    return a->type_label < b->type_label;
  });
  return out;
}

std::string render_ruling(const GeometryFixture& fx, int ruling) {
  std::vector<std::pair<int, int>> rows;  // (length, fix order)
  for (const FixLineOrbit& o : fx.orbits)
    if (o.ruling == ruling) rows.push_back({o.length, o.fix_group_order});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> parts;
  for (const auto& [len, fix] : rows) parts.push_back(str(len) + ":" + str(fix));
  return join(parts);
}

int ade_rank(const std::string& label) {
  return std::stoi(label.substr(1));
}

// ---------------------------------------------------------------------------
// groups
// ---------------------------------------------------------------------------

void groups_rows(const Catalog& cat, const PencilCase& c, std::vector<CheckResult>& out) {
  if (c.is_special()) return;
  const GeometryFixture& fx = fixture(c.n);
  if (const std::string* m = find_meta(c, "group_order"))
    add(out, "group_order", str(fx.group.order()), *m, meta_src(cat, c, "group_order"));
  if (const std::string* m = find_meta(c, "binary_order"))
    add(out, "binary_order", str(fx.group.binary_order()), *m, meta_src(cat, c, "binary_order"));
  // |PG| = |binary|^2 / 4: both sign choices act, the diagonal +-1 is killed.
  const int b = fx.group.binary_order();
  add(out, "projective_order_identity", str(fx.group.order()), str(b * b / 4), k_invariant);
}

// ---------------------------------------------------------------------------
// fixlines
// ---------------------------------------------------------------------------

void fixlines_rows(const Catalog& cat, const PencilCase& c, std::vector<CheckResult>& out) {
  if (c.is_special()) return;
  const GeometryFixture& fx = fixture(c.n);
  if (const std::string* m = find_meta(c, "base_line_count"))
    add(out, "base_line_count", str(fx.base.lines.size()), *m, meta_src(cat, c, "base_line_count"));
  if (const std::string* m = find_meta(c, "base_fix_order"))
    add(out, "base_fix_order", str(fx.base.s), *m, meta_src(cat, c, "base_fix_order"));
  if (const std::string* m = find_meta(c, "ruling_orbits"))
    add(out, "ruling_orbits", render_ruling(fx, 1), *m, meta_src(cat, c, "ruling_orbits"));
  add(out, "ruling_orbits_mirror", render_ruling(fx, 2), render_ruling(fx, 1), k_invariant);
  if (const std::string* m = find_meta(c, "offquadric")) {
    std::vector<std::string> parts;
    for (const FixLineOrbit* o : off_quadric_orbits(fx))
      parts.push_back(o->type_label + ":Z" + str(o->fix_group_order) + ":" + str(o->length) +
                      ":" + str(o->stabilizer_order / o->fix_group_order));
    add(out, "offquadric", join(parts), *m, meta_src(cat, c, "offquadric"));
  }
}

// ---------------------------------------------------------------------------
// singularities
// ---------------------------------------------------------------------------

void generic_singularity_rows(const Catalog& cat, const PencilCase& c,
                              std::vector<CheckResult>& out) {
  const GeometryFixture& fx = fixture(c.n);
  if (const std::string* m = find_meta(c, "crossing_census")) {
    std::vector<std::string> parts;
    for (const auto& [t, count] : fx.crossings) parts.push_back(str(t) + ":" + str(count));
    add(out, "crossing_census", join(parts), *m, meta_src(cat, c, "crossing_census"));
  }
  if (const std::string* m = find_meta(c, "crossing_types")) {
    std::vector<std::string> parts;
    for (const auto& [t, count] : fx.crossings) {
      (void)count;
      if (t != fx.base.s) parts.push_back(str(t) + ":" + classify_base_point(c.n, fx.base.s, t));
    }
    add(out, "crossing_types", join(parts), *m, meta_src(cat, c, "crossing_types"));
  }
  const std::vector<const FixLineOrbit*> off = off_quadric_orbits(fx);
  if (const std::string* m = find_meta(c, "line_points")) {
    std::vector<std::string> parts;
    for (const FixLineOrbit* o : off) {
      const LinePointCensus census = line_orbit_census(*o, c.n);
      parts.push_back(o->type_label + ":" + classify_line_point(*o) + ":" + str(census.length) +
                      ":" + str(census.number));
    }
    add(out, "line_points", join(parts), *m, meta_src(cat, c, "line_points"));
  }
  if (const std::string* m = find_meta(c, "curves_from")) {
    // Number of configuration curves contributed by each family: one ADE
    // chain of the orbit's resolution type per point orbit.
    std::map<std::string, int> stored;
    {
      std::istringstream is(*m);
      std::string tok;
      while (is >> tok) {
        const size_t colon = tok.rfind(':');
        if (colon == std::string::npos || colon + 1 == tok.size()) {
          stored.clear();
          break;
        }
        ++stored[tok.substr(colon + 1)];
      }
    }
    std::vector<std::string> computed, expected;
    for (const FixLineOrbit* o : off) {
      const LinePointCensus census = line_orbit_census(*o, c.n);
      computed.push_back(o->type_label + ":" +
                         str(census.number * ade_rank(classify_line_point(*o))));
      const auto it = stored.find(o->type_label);
      expected.push_back(o->type_label + ":" + str(it == stored.end() ? 0 : it->second));
    }
    add(out, "curve_census", join(computed), join(expected), meta_src(cat, c, "curves_from"));
  }
}

void special_singularity_rows(const Catalog& cat, const PencilCase& c,
                              std::vector<CheckResult>& out) {
  const GeometryFixture& fx = fixture(c.n);
  const std::string* lines_meta = find_meta(c, "lines");
  if (!lines_meta) return;
  const std::vector<std::pair<std::string, int>> lines_list = parse_type_counts(*lines_meta);
  const std::map<std::string, int> lines_map(lines_list.begin(), lines_list.end());

  int ns = 0;
  int fix_order = 0;
  std::string node_group;
  std::string dynkin;
  std::string lines_render;
  bool found = false;

  if (lines_list.size() == 1 && lines_list.front().second == 1) {
    // Nodes interior to a single fix-line: one point orbit of the family
    // collapses onto each line, so the node count is (orbit length of the
    // family) x (points per orbit on one line).
    const std::string& family = lines_list.front().first;
    for (const FixLineOrbit& o : fx.orbits) {
      if (o.ruling != 0 || o.type_label != family) continue;
      const LinePointCensus census = line_orbit_census(o, c.n);
      ns = o.length * census.length;
      fix_order = o.fix_group_order;
      node_group = "Z" + str(o.fix_group_order);
      dynkin = node_resolution_type(node_group);
      lines_render = family + ":1";
      found = true;
      break;
    }
  } else {
    // Nodes at fix-line intersections: locate the point orbit whose line
    // pattern matches the recorded address.
    for (const FixPointRecord& r : fx.nodes) {
      if (r.meeting_lines != lines_map) continue;
      ns = r.orbit_length;
      fix_order = r.stabilizer_order;
      node_group = r.stabilizer_structure;
      dynkin = r.singularity;
      std::vector<std::string> parts;
      for (const auto& [type, count] : r.meeting_lines) parts.push_back(type + ":" + str(count));
      lines_render = join(parts);
      found = true;
      break;
    }
  }

  if (!found) {
    ns = 0;
    node_group = dynkin = lines_render = "no matching node orbit";
  }

  if (const std::string* m = find_meta(c, "ns"))
    add(out, "ns", found ? str(ns) : "no matching node orbit", *m, meta_src(cat, c, "ns"));
  add(out, "node_group", node_group, c.node_group, meta_src(cat, c, "node_group"));
  add(out, "lines", lines_render, *lines_meta, meta_src(cat, c, "lines"));
  add(out, "dynkin", dynkin, c.dynkin, meta_src(cat, c, "dynkin"));
  if (found)
    add(out, "orbit_stabilizer_identity", str(ns * fix_order), str(fx.group.order()), k_invariant);
}

void singularities_rows(const Catalog& cat, const PencilCase& c, std::vector<CheckResult>& out) {
  if (c.is_special())
    special_singularity_rows(cat, c, out);
  else
    generic_singularity_rows(cat, c, out);
}

// ---------------------------------------------------------------------------
// lattices
// ---------------------------------------------------------------------------

// The witness classes of the transcendental-rank argument: rational classes
// that must (or must not) pair integrally with the full Neron-Severi lattice.
struct DualWitness {
  std::string formula;
  std::vector<std::pair<std::string, int>> coeffs;
  int divisor;
};

std::vector<DualWitness> dual_witnesses(int n) {
  switch (n) {
    case 6:
      return {{"(N1-N2-N3+N4)/3", {{"N1", 1}, {"N2", -1}, {"N3", -1}, {"N4", 1}}, 3},
              {"(N5-N6-N7+N8)/3", {{"N5", 1}, {"N6", -1}, {"N7", -1}, {"N8", 1}}, 3}};
    case 8:
      return {{"(M3+M4)/2", {{"M3", 1}, {"M4", 1}}, 2},
              {"(M1+M2+M3)/2", {{"M1", 1}, {"M2", 1}, {"M3", 1}}, 2},
              {"(R1+2R2+3R3)/4", {{"R1", 1}, {"R2", 2}, {"R3", 3}}, 4}};
    case 12:
      return {{"M1/2", {{"M1", 1}}, 2},
              {"M2/2", {{"M2", 1}}, 2},
              {"M3/2", {{"M3", 1}}, 2},
              {"(N1-N2)/3", {{"N1", 1}, {"N2", -1}}, 3},
              {"(N3-N4)/3", {{"N3", 1}, {"N4", -1}}, 3}};
    default:
      return {};
  }
}

void lattices_rows(const Catalog& cat, const PencilCase& c, std::vector<CheckResult>& out) {
  const IntLattice lat = gram_from_config(c.config);
  const size_t dim = lat.basis_labels.size();

  {
    const SmithResult snf = smith_normal_form(lat.gram);
    const std::string* m = find_meta(c, "rank");
    add(out, "rank", str(snf.divisors.size()), m ? *m : str(dim),
        m ? meta_src(cat, c, "rank") : k_invariant);
  }

  const BigInt det = exact_determinant(lat.gram);
  if (const std::string* m = find_meta(c, "det"))
    add(out, "det", det.str(), *m, meta_src(cat, c, "det"));
  if (const std::string* m = find_meta(c, "det_factors")) {
    const BigInt a = det < 0 ? BigInt(-det) : det;
    add(out, "det_factors", format_prime_powers(factorize(a)), *m,
        meta_src(cat, c, "det_factors"));
  }

  if (const std::string* m = find_meta(c, "blocks")) {
    std::map<char, std::vector<size_t>> stems;
    for (size_t i = 0; i < dim; ++i) stems[lat.basis_labels[i][0]].push_back(i);
    std::vector<std::string> parts;
    for (const auto& [stem, idx] : stems) {
      IntMat sub(idx.size(), std::vector<BigInt>(idx.size()));
      for (size_t r = 0; r < idx.size(); ++r)
        for (size_t s = 0; s < idx.size(); ++s) sub[r][s] = lat.gram[idx[r]][idx[s]];
      parts.push_back(std::string(1, stem) + ":" + exact_determinant(sub).str());
    }
    add(out, "blocks", join(parts), *m, meta_src(cat, c, "blocks"));
  }

  const bool glued = !c.glue.empty();
  GlueExtension ext;
  if (glued) {
    const std::string glue_source = cat.source + ":" + c.name + "/GLUE";
    std::vector<RatVec> vs;
    for (const auto& [v, divisor] : glue_classes(c)) {
      (void)divisor;
      vs.push_back(v);
    }
    for (size_t g = 0; g < c.glue.size(); ++g) {
      std::vector<BigInt> coeffs(dim, 0);
      for (const auto& [label, value] : c.glue[g].coeffs) {
        const auto it = std::find(lat.basis_labels.begin(), lat.basis_labels.end(), label);
        coeffs[static_cast<size_t>(it - lat.basis_labels.begin())] = value;
      }
      const DivisibilityReport rep = check_divisible_class(coeffs, c.glue[g].divisor, lat);
      add(out, "glue_class_" + str(g + 1),
          rep.divisible ? "divisible, support " + str(rep.support) : "not divisible",
          "divisible, support " + str(c.glue[g].coeffs.size()), glue_source);
    }
    ext = extend_by_glue(lat, vs);
    if (const std::string* m = find_meta(c, "glue_index"))
      add(out, "glue_index", ext.index.str(), *m, meta_src(cat, c, "glue_index"));
  }
  const IntLattice& final_lat = glued ? ext.lattice : lat;
  const DiscriminantData dd = glued ? ext.disc : discriminant_data(lat);

  if (!c.is_special()) {
    if (glued)
      if (const std::string* m = find_meta(c, "glue_disc"))
        add(out, "glue_disc", dd.determinant.str(), *m, meta_src(cat, c, "glue_disc"));
    if (const std::string* m = find_meta(c, "disc_group")) {
      std::vector<std::string> parts;
      for (const BigInt& g : dd.group_invariants) parts.push_back(g.str());
      add(out, "disc_group", join(parts), *m, meta_src(cat, c, "disc_group"));
    }
    {
      // factored form of the final discriminant, checked against the stored
      // integer (glue_disc when glue is present, the Gram determinant if not)
      const std::string key = glued ? "glue_disc" : "det";
      if (const std::string* m = find_meta(c, key)) {
        const BigInt stored(*m);
        const BigInt stored_abs = stored < 0 ? BigInt(-stored) : stored;
        add(out, "discriminant", format_factorization(factorize(dd.abs_discriminant)),
            format_factorization(factorize(stored_abs)), meta_src(cat, c, key));
      }
    }
    for (int p : {2, 3}) {
      const std::string key = "search_p" + str(p);
      const std::string* m = find_meta(c, key);
      if (!m) continue;
      const std::vector<std::vector<BigInt>> found = search_divisible_classes(lat, p);
      add(out, key, str(found.size()), *m, meta_src(cat, c, key));
      if (glued && c.glue.front().divisor == p) {
        bool all_found = true;
        for (const GlueClass& g : c.glue) {
          std::vector<BigInt> coeffs(dim, 0);
          for (const auto& [label, value] : g.coeffs) {
            const auto it = std::find(lat.basis_labels.begin(), lat.basis_labels.end(), label);
            coeffs[static_cast<size_t>(it - lat.basis_labels.begin())] = value;
          }
          if (std::find(found.begin(), found.end(), coeffs) == found.end()) all_found = false;
        }
        add(out, "search_contains_glue", all_found ? "yes" : "no", "yes", k_invariant);
      }
    }
    for (const DualWitness& w : dual_witnesses(c.n)) {
      RatVec x(dim, Rational(0));
      for (const auto& [label, value] : w.coeffs) {
        const auto it = std::find(lat.basis_labels.begin(), lat.basis_labels.end(), label);
        x[static_cast<size_t>(it - lat.basis_labels.begin())] = Rational(value, w.divisor);
      }
      add(out, "dual class " + w.formula, dual_membership(x, final_lat) ? "in dual" : "not in dual",
          "in dual", k_invariant);
    }
  } else {
    if (const std::string* m = find_meta(c, "disc"))
      add(out, "discriminant", dd.determinant.str(), *m, meta_src(cat, c, "disc"));
    {
      // Recover the shape of the new component from the graph alone.
      std::vector<std::string> comp = c.swallowed;
      comp.push_back("new");
      const int k = static_cast<int>(comp.size());
      std::vector<std::string> candidates = {"A" + str(k)};
      if (k >= 4) candidates.push_back("D" + str(k));
      if (k >= 6 && k <= 8) candidates.push_back("E" + str(k));
      std::string shape = "unrecognized";
      for (const std::string& cand : candidates)
        if (component_matches_dynkin(c.config, comp, cand)) {
          shape = cand;
          break;
        }
      add(out, "component_shape", shape, c.dynkin, meta_src(cat, c, "dynkin"));
    }
  }
}

// ---------------------------------------------------------------------------
// pencil
// ---------------------------------------------------------------------------

void pencil_rows(const Catalog& cat, const PencilCase& c, std::vector<CheckResult>& out) {
  if (!c.is_special()) {
    std::map<int, Rational> lambda;
    for (const PencilCase& k : cat.cases)
      if (k.n == c.n && k.is_special()) lambda[k.special_index] = k.lambda;
    if (lambda.size() == 4) {
      const Rational cr = cross_ratio(lambda[1], lambda[2], lambda[3], lambda[4]);
      if (const std::string* m = find_meta(c, "cross_ratio"))
        add(out, "cross_ratio", str(cr), *m, meta_src(cat, c, "cross_ratio"));
      const FactoredRational j = j_invariant(cr);
      if (const std::string* m = find_meta(c, "j_num"))
        add(out, "j_num", format_prime_powers(j.num_factors), *m, meta_src(cat, c, "j_num"));
      if (const std::string* m = find_meta(c, "j_den"))
        add(out, "j_den", format_prime_powers(j.den_factors), *m, meta_src(cat, c, "j_den"));
      // the absolute invariant must not see the ordering of the four
      // parameters, and the elliptic normalization is a fixed rescaling
      add(out, "j_symmetry",
          str(j_invariant(Rational(1) - cr).value) + " " + str(j_invariant(Rational(1) / cr).value),
          str(j.value) + " " + str(j.value), k_invariant);
      add(out, "j_elliptic_ratio", str(j_invariant_elliptic(cr).value / j.value), "256",
          k_invariant);
    }
    if (const std::string* m = find_meta(c, "ramification")) {
      const GeometryFixture& fx = fixture(c.n);
      std::vector<std::string> parts;
      for (const FixLineOrbit* o : off_quadric_orbits(fx)) {
        if (line_orbit_census(*o, c.n).number < 2) continue;  // nothing collides
        const RamificationSheet sheet = ramification_sheet(c.n, o->type_label);
        parts.push_back(o->type_label + ":" + str(sheet.total_ramification) + ":" +
                        str(sheet.off_quadric));
      }
      add(out, "ramification", join(parts), *m, meta_src(cat, c, "ramification"));
    }
    {
      // the rational and cyclotomic evaluations of the moving-line
      // cross-ratio must agree on rational parameters
      const Rational rat = orbit_cross_ratio(c.n, Rational(2));
      const CycNum cyc = orbit_cross_ratio(c.n, CycNum(2));
      add(out, "orbit_cross_ratio_agreement", str(rat),
          cyc.is_rational() ? str(cyc.rational_part()) : "not rational", k_invariant);
    }
  } else {
    for (const auto& [key, value] : c.meta) {
      if (key.rfind("swallow_", 0) != 0) continue;
      const std::string family = key.substr(8);
      std::string computed = "absent";
      const RamificationSheet sheet = ramification_sheet(c.n, family);
      for (const SwallowCount& sc : sheet.swallows)
        if (sc.case_name == c.name) computed = str(sc.nodes) + ":" + str(sc.orbits);
      add(out, key, computed, value, meta_src(cat, c, key));
    }
  }
}

void rows_for_scope(const Catalog& cat, const PencilCase& c, const std::string& scope,
                    std::vector<CheckResult>& out) {
  if (scope == "groups")
    groups_rows(cat, c, out);
  else if (scope == "fixlines")
    fixlines_rows(cat, c, out);
  else if (scope == "singularities")
    singularities_rows(cat, c, out);
  else if (scope == "lattices")
    lattices_rows(cat, c, out);
  else if (scope == "pencil")
    pencil_rows(cat, c, out);
}

}  // namespace

bool CaseReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const CheckResult& r) { return r.pass; });
}

const std::vector<std::string>& verify_scopes() {
  static const std::vector<std::string> scopes = {"groups", "fixlines", "singularities",
                                                  "lattices", "pencil"};
  return scopes;
}

std::vector<CaseReport> run_verification(const Catalog& cat, const std::string& scope) {
  std::vector<std::string> active;
  if (scope == "all") {
    active = verify_scopes();
  } else {
    const auto& all = verify_scopes();
    if (std::find(all.begin(), all.end(), scope) == all.end())
      throw std::invalid_argument("unknown verification scope: " + scope);
    active = {scope};
  }
  std::vector<CaseReport> out;
  for (const PencilCase& c : cat.cases) {
    CaseReport report{c.name, {}};
    for (const std::string& s : active) rows_for_scope(cat, c, s, report.entries);
    if (!report.entries.empty()) out.push_back(std::move(report));
  }
  return out;
}

CaseReport report_case(const Catalog& cat, const std::string& case_name) {
  const PencilCase& c = cat.at(case_name);
  CaseReport report{c.name, {}};
  for (const std::string& s : verify_scopes()) rows_for_scope(cat, c, s, report.entries);
  return report;
}

}  // namespace k3pencil
