#include <k3pencil/catalog.hpp>

#include <k3pencil/fixgeom.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace k3pencil {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw std::runtime_error("catalog corruption: " + what);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

long parse_int(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) corrupt("trailing characters in integer '" + s + "' in " + where);
    return v;
  } catch (const std::logic_error&) {
    corrupt("bad integer '" + s + "' in " + where);
  }
}

Rational parse_rational(const std::string& s, const std::string& where) {
  const size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    corrupt("bad rational '" + s + "' in " + where);
  }
}

// Arm lengths of a tree, measured from its unique branch vertex (or the
// full path length when there is none). Returns false for non-ADE shapes.
bool ade_shape(const std::vector<std::vector<int>>& adj, char& family, int& rank) {
  const int k = static_cast<int>(adj.size());
  int branch = -1;
  for (int v = 0; v < k; ++v) {
    if (adj[v].size() > 3) return false;
    if (adj[v].size() == 3) {
      if (branch >= 0) return false;  // at most one branch vertex
      branch = v;
    }
  }
  rank = k;
  if (branch < 0) {
    family = 'A';
    return true;
  }
  std::vector<int> arms;
  for (int next : adj[branch]) {
    int len = 1, prev = branch, cur = next;
    for (;;) {
      int fwd = -1;
      for (int w : adj[cur])
        if (w != prev) fwd = w;
      if (fwd < 0) break;
      prev = cur;
      cur = fwd;
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms[0] == 1 && arms[1] == 1) {
    family = 'D';
    return true;
  }
  if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) {
    family = 'E';
    return true;
  }
  return false;
}

struct Section {
  enum Kind { kNone, kMeta, kVertices, kEdges, kGlue } kind = kNone;
};

const std::map<std::string, int>& group_order_map() {
  static const std::map<std::string, int> m{
      {"Z2", 2}, {"Z3", 3}, {"Z4", 4},    {"Z5", 5}, {"Z2xZ2", 4},
      {"D3", 6}, {"D4", 8}, {"D5", 10},   {"T", 12}, {"O", 24},
      {"I", 60},
  };
  return m;
}

}  // namespace

const std::string& PencilCase::meta_at(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end())
    throw std::out_of_range("case " + name + " has no META key '" + key + "'");
  return it->second;
}

const PencilCase* Catalog::find(const std::string& name) const {
  for (const auto& c : cases)
    if (c.name == name) return &c;
  return nullptr;
}

const PencilCase& Catalog::at(const std::string& name) const {
  const PencilCase* c = find(name);
  if (!c) throw std::out_of_range("no catalog case named '" + name + "'");
  return *c;
}

ExpectedTable expected_table(const Catalog& cat) {
  ExpectedTable t;
  for (const auto& c : cat.cases)
    for (const auto& [k, v] : c.meta)
      t[c.name + "/" + k] = ExpectedEntry{v, cat.source + ":" + c.name + "/META/" + k};
  return t;
}

Catalog parse_catalog(std::istream& in, const std::string& source_name) {
  Catalog cat;
  cat.source = source_name;
  PencilCase* cur = nullptr;
  Section sec;
  std::string raw;
  int lineno = 0;

  auto where = [&] { return source_name + ":" + std::to_string(lineno); };

  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.rfind("CASE", 0) == 0 && (line.size() == 4 || line[4] == ' ')) {
      const std::string name = trim(line.substr(4));
      if (name.empty()) corrupt("CASE without a name at " + where());
      if (std::any_of(cat.cases.begin(), cat.cases.end(),
                      [&](const PencilCase& c) { return c.name == name; }))
        corrupt("duplicate case '" + name + "' at " + where());
      cat.cases.push_back({});
      cur = &cat.cases.back();
      cur->name = name;
      sec.kind = Section::kNone;
      continue;
    }
    if (line == "META" || line == "VERTICES" || line == "EDGES" || line == "GLUE") {
      if (!cur) corrupt("section '" + line + "' before any CASE at " + where());
      sec.kind = line == "META"       ? Section::kMeta
                 : line == "VERTICES" ? Section::kVertices
                 : line == "EDGES"    ? Section::kEdges
                                      : Section::kGlue;
      continue;
    }
    if (!cur || sec.kind == Section::kNone)
      corrupt("data line outside any section at " + where());

    switch (sec.kind) {
      case Section::kMeta: {
        const size_t eq = line.find('=');
        if (eq == std::string::npos) corrupt("META line without '=' at " + where());
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) corrupt("empty META key or value at " + where());
        if (!cur->meta.emplace(key, val).second)
          corrupt("duplicate META key '" + key + "' at " + where());
        break;
      }
      case Section::kVertices: {
        const auto toks = split_ws(line);
        if (toks.size() != 1) corrupt("VERTICES line must hold one label at " + where());
        cur->config.labels.push_back(toks[0]);
        break;
      }
      case Section::kEdges: {
        const auto toks = split_ws(line);
        if (toks.size() != 2) corrupt("EDGES line must hold two labels at " + where());
        cur->config.edges.emplace_back(toks[0], toks[1]);
        break;
      }
      case Section::kGlue: {
        const size_t bar = line.find('|');
        if (bar == std::string::npos) corrupt("GLUE line without '|' at " + where());
        GlueClass g;
        g.divisor = static_cast<int>(parse_int(trim(line.substr(0, bar)), where()));
        for (const auto& tok : split_ws(line.substr(bar + 1))) {
          const size_t colon = tok.rfind(':');
          if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
            corrupt("bad GLUE term '" + tok + "' at " + where());
          g.coeffs.emplace_back(tok.substr(0, colon),
                                static_cast<int>(parse_int(tok.substr(colon + 1), where())));
        }
        if (g.coeffs.empty()) corrupt("empty GLUE class at " + where());
        cur->glue.push_back(std::move(g));
        break;
      }
      case Section::kNone:
        break;
    }
  }

  // Lift the structured META keys into the typed fields.
  for (auto& c : cat.cases) {
    auto need = [&](const char* key) -> const std::string& {
      auto it = c.meta.find(key);
      if (it == c.meta.end()) corrupt("case " + c.name + " lacks META key '" + key + "'");
      return it->second;
    };
    c.n = static_cast<int>(parse_int(need("n"), c.name));
    if (c.n != 6 && c.n != 8 && c.n != 12) corrupt("case " + c.name + " has invalid n");
    const std::string& kind = need("kind");
    if (kind == "generic") {
      c.special_index = 0;
    } else if (kind == "special") {
      c.special_index = static_cast<int>(parse_int(need("index"), c.name));
      if (c.special_index < 1 || c.special_index > 4)
        corrupt("case " + c.name + " has invalid index");
      c.lambda = parse_rational(need("lambda"), c.name);
      c.node_group = need("node_group");
      c.dynkin = need("dynkin");
      c.swallowed = split_ws(need("swallowed"));
    } else {
      corrupt("case " + c.name + " has invalid kind '" + kind + "'");
    }
  }

  validate_catalog(cat);
  return cat;
}

Catalog parse_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog file '" + path + "'");
  return parse_catalog(in, path);
}

std::string serialize_catalog(const Catalog& cat) {
  std::ostringstream os;
  for (const auto& c : cat.cases) {
    os << "CASE " << c.name << "\n";
    os << "META\n";
    for (const auto& [k, v] : c.meta) os << k << " = " << v << "\n";
    os << "VERTICES\n";
    for (const auto& l : c.config.labels) os << l << "\n";
    os << "EDGES\n";
    for (const auto& [a, b] : c.config.edges) os << a << " " << b << "\n";
    if (!c.glue.empty()) {
      os << "GLUE\n";
      for (const auto& g : c.glue) {
        os << g.divisor << " |";
        for (const auto& [label, coeff] : g.coeffs) os << " " << label << ":" << coeff;
        os << "\n";
      }
    }
    os << "\n";
  }
  return os.str();
}

int group_order(const std::string& group_id) {
  const auto& m = group_order_map();
  auto it = m.find(group_id);
  if (it == m.end()) throw std::invalid_argument("unknown group id '" + group_id + "'");
  return it->second;
}

bool component_matches_dynkin(const CurveConfig& config,
                              const std::vector<std::string>& labels,
                              const std::string& type) {
  if (type.size() < 2) return false;
  const char want_family = type[0];
  int want_rank = 0;
  try {
    want_rank = std::stoi(type.substr(1));
  } catch (const std::logic_error&) {
    return false;
  }
  if (want_family == 'A' && want_rank < 1) return false;
  if (want_family == 'D' && want_rank < 4) return false;
  if (want_family == 'E' && (want_rank < 6 || want_rank > 8)) return false;

  std::map<std::string, int> index;
  for (const auto& l : labels) {
    if (index.count(l)) return false;
    index.emplace(l, static_cast<int>(index.size()));
  }
  if (index.size() != labels.size()) return false;
  for (const auto& l : labels)
    if (std::find(config.labels.begin(), config.labels.end(), l) == config.labels.end())
      return false;

  std::vector<std::vector<int>> adj(labels.size());
  int edge_count = 0;
  for (const auto& [a, b] : config.edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) continue;
    adj[static_cast<size_t>(ia->second)].push_back(ib->second);
    adj[static_cast<size_t>(ib->second)].push_back(ia->second);
    ++edge_count;
  }
  // connected tree?
  if (edge_count != static_cast<int>(labels.size()) - 1) return false;
  std::vector<char> seen(labels.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != static_cast<int>(labels.size())) return false;

  char family = 0;
  int rank = 0;
  if (!ade_shape(adj, family, rank)) return false;
  return family == want_family && rank == want_rank;
}

std::vector<std::pair<RatVec, int>> glue_classes(const PencilCase& c) {
  IntLattice lat = gram_from_config(c.config);
  std::vector<std::pair<RatVec, int>> out;
  for (size_t gi = 0; gi < c.glue.size(); ++gi) {
    const GlueClass& g = c.glue[gi];
    if (g.divisor != 2 && g.divisor != 3)
      corrupt("case " + c.name + " glue class " + std::to_string(gi) + " has divisor " +
              std::to_string(g.divisor));
    std::vector<BigInt> ic(lat.basis_labels.size(), 0);
    RatVec v(lat.basis_labels.size(), Rational(0));
    for (const auto& [label, coeff] : g.coeffs) {
      auto it = std::find(lat.basis_labels.begin(), lat.basis_labels.end(), label);
      if (it == lat.basis_labels.end())
        corrupt("case " + c.name + " glue class uses unknown curve '" + label + "'");
      const size_t idx = static_cast<size_t>(it - lat.basis_labels.begin());
      if (ic[idx] != 0) corrupt("case " + c.name + " glue class repeats curve '" + label + "'");
      ic[idx] = coeff;
      v[idx] = Rational(coeff, g.divisor);
    }
    const DivisibilityReport rep = check_divisible_class(ic, g.divisor, lat);
    if (!rep.divisible) {
      std::string why;
      for (const auto& r : rep.reasons) why += " " + r + ";";
      corrupt("case " + c.name + " stored glue class " + std::to_string(gi) +
              " fails the divisibility conditions:" + why);
    }
    lat.glue.push_back(v);  // later classes must stay compatible with this one
    out.emplace_back(std::move(v), g.divisor);
  }
  return out;
}

namespace {

std::vector<std::string> split_colon(const std::string& tok) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t colon = tok.find(':', start);
    if (colon == std::string::npos) {
      out.push_back(tok.substr(start));
      return out;
    }
    out.push_back(tok.substr(start, colon - start));
    start = colon + 1;
  }
}

}  // namespace

std::vector<std::pair<std::string, int>> parse_type_counts(const std::string& v) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& tok : split_ws(v)) {
    const size_t colon = tok.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
      corrupt("bad type:count token '" + tok + "'");
    out.emplace_back(tok.substr(0, colon),
                     static_cast<int>(parse_int(tok.substr(colon + 1), "'" + tok + "'")));
  }
  if (out.empty()) corrupt("empty type-count list");
  return out;
}

std::pair<int, int> parse_int_pair(const std::string& v) {
  const auto fields = split_colon(trim(v));
  if (fields.size() != 2) corrupt("bad integer pair '" + v + "'");
  return {static_cast<int>(parse_int(fields[0], "'" + v + "'")),
          static_cast<int>(parse_int(fields[1], "'" + v + "'"))};
}

std::vector<std::pair<int, int>> parse_int_pairs(const std::string& v) {
  std::vector<std::pair<int, int>> out;
  for (const auto& tok : split_ws(v)) out.push_back(parse_int_pair(tok));
  if (out.empty()) corrupt("empty integer-pair list");
  return out;
}

std::vector<OffQuadricEntry> parse_offquadric(const std::string& v) {
  std::vector<OffQuadricEntry> out;
  for (const auto& tok : split_ws(v)) {
    const auto fields = split_colon(tok);
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty())
      corrupt("bad off-quadric entry '" + tok + "'");
    out.push_back({fields[0], fields[1],
                   static_cast<int>(parse_int(fields[2], "'" + tok + "'")),
                   static_cast<int>(parse_int(fields[3], "'" + tok + "'"))});
  }
  if (out.empty()) corrupt("empty off-quadric list");
  return out;
}

std::vector<LinePointEntry> parse_line_points(const std::string& v) {
  std::vector<LinePointEntry> out;
  for (const auto& tok : split_ws(v)) {
    const auto fields = split_colon(tok);
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty())
      corrupt("bad line-point entry '" + tok + "'");
    out.push_back({fields[0], fields[1],
                   static_cast<int>(parse_int(fields[2], "'" + tok + "'")),
                   static_cast<int>(parse_int(fields[3], "'" + tok + "'"))});
  }
  if (out.empty()) corrupt("empty line-point list");
  return out;
}

void validate_catalog(const Catalog& cat) {
  for (const auto& c : cat.cases) {
    // The Gram constructor rejects duplicate labels, loops, bad endpoints.
    IntLattice lat;
    try {
      lat = gram_from_config(c.config);
    } catch (const std::invalid_argument& e) {
      corrupt("case " + c.name + ": " + e.what());
    }

    if (!c.is_special()) {
      if (c.config.labels.size() != 19)
        corrupt("generic case " + c.name + " must have 19 curves, found " +
                std::to_string(c.config.labels.size()));
      continue;
    }

    if (c.config.labels.size() != 20)
      corrupt("special case " + c.name + " must have 20 curves, found " +
              std::to_string(c.config.labels.size()));
    if (std::find(c.config.labels.begin(), c.config.labels.end(), "new") ==
        c.config.labels.end())
      corrupt("special case " + c.name + " lacks the 'new' exceptional curve");

    const PencilCase* gen = cat.find("generic_" + std::to_string(c.n));
    if (!gen) corrupt("special case " + c.name + " has no matching generic case");

    std::set<std::string> swallowed(c.swallowed.begin(), c.swallowed.end());
    if (swallowed.size() != c.swallowed.size())
      corrupt("special case " + c.name + " repeats a swallowed curve");
    if (swallowed.empty()) corrupt("special case " + c.name + " swallows nothing");
    for (const auto& s : c.swallowed)
      if (std::find(gen->config.labels.begin(), gen->config.labels.end(), s) ==
          gen->config.labels.end())
        corrupt("special case " + c.name + " swallows unknown curve '" + s + "'");

    // Resolution component: swallowed curves plus the new one, shaped like
    // the Dynkin diagram of the node group's resolution.
    std::string resolved;
    try {
      resolved = node_resolution_type(c.node_group);
    } catch (const std::invalid_argument& e) {
      corrupt("special case " + c.name + ": " + e.what());
    }
    if (resolved != c.dynkin)
      corrupt("special case " + c.name + " dynkin '" + c.dynkin +
              "' does not match the resolution of " + c.node_group);
    std::vector<std::string> comp = c.swallowed;
    comp.push_back("new");
    if (!component_matches_dynkin(c.config, comp, c.dynkin))
      corrupt("special case " + c.name + " component is not a " + c.dynkin + " tree");

    // The component must be split off from the untouched part of the graph,
    // and the untouched part must carry exactly the generic adjacency.
    std::set<std::pair<std::string, std::string>> outside;
    auto norm = [](std::string a, std::string b) {
      return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    for (const auto& [a, b] : c.config.edges) {
      const bool ina = swallowed.count(a) || a == "new";
      const bool inb = swallowed.count(b) || b == "new";
      if (ina != inb)
        corrupt("special case " + c.name + " has edge " + a + "-" + b +
                " joining the component to the untouched curves");
      if (!ina) outside.insert(norm(a, b));
    }
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [a, b] : gen->config.edges)
      if (!swallowed.count(a) && !swallowed.count(b)) expected.insert(norm(a, b));
    if (outside != expected)
      corrupt("special case " + c.name +
              " changes the adjacency of curves outside the component");

    // ns = |G| / |F|, with |G| recorded on the generic record.
    auto need = [](const PencilCase& pc, const char* key) -> const std::string& {
      auto it = pc.meta.find(key);
      if (it == pc.meta.end()) corrupt("case " + pc.name + " lacks META key '" + key + "'");
      return it->second;
    };
    const long order = parse_int(need(*gen, "group_order"), gen->name);
    const long ns = parse_int(need(c, "ns"), c.name);
    int forder = 0;
    try {
      forder = group_order(c.node_group);
    } catch (const std::invalid_argument& e) {
      corrupt("special case " + c.name + ": " + e.what());
    }
    if (ns * forder != order)
      corrupt("special case " + c.name + " ns " + std::to_string(ns) +
              " violates ns * |F| = |G|");
  }

  // Stored glue classes must satisfy the divisibility conditions.
  for (const auto& c : cat.cases) glue_classes(c);
}

namespace {
#include <k3pencil/embedded_data.inc>
}  // namespace

const Catalog& builtin_catalog() {
  static const Catalog cat = [] {
    Catalog merged;
    merged.source = "<builtin>";
    for (const auto& file : k_embedded_catalog) {
      std::istringstream is(file.text);
      Catalog part = parse_catalog(is, std::string("<builtin>/") + file.name);
      for (auto& c : part.cases) merged.cases.push_back(std::move(c));
    }
    validate_catalog(merged);  // cross-file references (generic vs special)
    return merged;
  }();
  return cat;
}

CurveConfig generic_config(int n) {
  if (n != 6 && n != 8 && n != 12) throw std::invalid_argument("n must be 6, 8 or 12");
  return builtin_catalog().at("generic_" + std::to_string(n)).config;
}

CurveConfig special_config(int n, int i) {
  if (n != 6 && n != 8 && n != 12) throw std::invalid_argument("n must be 6, 8 or 12");
  if (i < 1 || i > 4) throw std::invalid_argument("special index must be 1..4");
  return builtin_catalog().at("special_" + std::to_string(n) + "_" + std::to_string(i)).config;
}

}  // namespace k3pencil
