#include <k3pencil/pencil.hpp>

#include <sstream>
#include <stdexcept>

namespace k3pencil {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw std::runtime_error("catalog corruption: " + what);
}

int check_n(int n) {
  if (n != 6 && n != 8 && n != 12) throw std::invalid_argument("n must be 6, 8 or 12");
  return n;
}

}  // namespace

int nodes_on_line(const PencilCase& c, const std::string& line_type) {
  if (!c.is_special())
    throw std::invalid_argument("nodes_on_line needs a singular pencil member");
  const PencilCase& gen = builtin_catalog().at("generic_" + std::to_string(c.n));
  int length = 0;
  bool known = false;
  for (const auto& e : parse_offquadric(gen.meta_at("offquadric")))
    if (e.type == line_type) {
      length = e.length;
      known = true;
    }
  if (!known)
    throw std::invalid_argument("no line family '" + line_type + "' for n = " +
                                std::to_string(c.n));
  int through = 0;
  for (const auto& [type, count] : parse_type_counts(c.meta_at("lines")))
    if (type == line_type) through = count;
  const long ns = std::stol(c.meta_at("ns"));
  const long num = ns * through;
  if (num % length != 0)
    corrupt("case " + c.name + ": " + std::to_string(ns) + " * " + std::to_string(through) +
            " nodes do not distribute evenly over " + std::to_string(length) + " lines");
  return static_cast<int>(num / length);
}

RamificationSheet ramification_sheet(int n, const std::string& line_type) {
  check_n(n);
  const Catalog& cat = builtin_catalog();
  const PencilCase& gen = cat.at("generic_" + std::to_string(n));

  // Only families with at least two point orbits per line can trade points
  // between orbits when a member degenerates.
  bool qualifies = false;
  for (const auto& e : parse_line_points(gen.meta_at("line_points")))
    if (e.type == line_type && e.number >= 2) qualifies = true;
  if (!qualifies)
    throw std::invalid_argument("line family '" + line_type + "' for n = " + std::to_string(n) +
                                " has a single point orbit; its ramification is forced");

  RamificationSheet sheet;
  sheet.n = n;
  sheet.line_type = line_type;
  sheet.cover_degree = n;
  sheet.total_ramification = 2 * n - 2;
  sheet.quadric_contribution = 2 * (n / 2 - 1);
  sheet.off_quadric = sheet.total_ramification - sheet.quadric_contribution;

  int consumed = 0;
  for (int i = 1; i <= 4; ++i) {
    const PencilCase& c = cat.at("special_" + std::to_string(n) + "_" + std::to_string(i));
    const auto it = c.meta.find("swallow_" + line_type);
    if (it == c.meta.end()) continue;
    const auto [nodes, orbits] = parse_int_pair(it->second);
    if (nodes != nodes_on_line(c, line_type))
      corrupt("case " + c.name + ": recorded swallow count " + std::to_string(nodes) +
              " contradicts the node census on the " + line_type + " lines");
    sheet.swallows.push_back({c.name, i, nodes, orbits});
    consumed += nodes;
  }
  // Every node is a double point of the parameter map on the line, so the
  // node counts must exhaust the off-quadric Hurwitz budget exactly.
  if (consumed != sheet.off_quadric)
    corrupt("swallow counts on the " + line_type + " lines consume " +
            std::to_string(consumed) + " of " + std::to_string(sheet.off_quadric));
  return sheet;
}

Rational cross_ratio(const Rational& a, const Rational& b, const Rational& c,
                     const Rational& d) {
  const Rational den = (a - d) * (b - c);
  if (den == 0) throw std::domain_error("cross-ratio of coincident points");
  return (a - c) * (b - d) / den;
}

Rational parameter_cross_ratio(int n) {
  check_n(n);
  const Catalog& cat = builtin_catalog();
  Rational lambda[4];
  for (int i = 1; i <= 4; ++i)
    lambda[i - 1] = cat.at("special_" + std::to_string(n) + "_" + std::to_string(i)).lambda;
  return cross_ratio(lambda[0], lambda[1], lambda[2], lambda[3]);
}

Rational orbit_cross_ratio(int n, const Rational& u) {
  check_n(n);
  const Rational u2 = u * u;
  if (n == 8) {
    const Rational den = (u2 + 2) * (u2 + 2);
    if (den == 0) throw std::domain_error("degenerate line parameter: u^2 = -2");
    return (u2 - 2) * (u2 - 2) / den;
  }
  const Rational den = (1 + u2) * (1 + u2);
  if (den == 0) throw std::domain_error("degenerate line parameter: u^2 = -1");
  return 4 * u2 / den;
}

CycNum orbit_cross_ratio(int n, const CycNum& u) {
  check_n(n);
  const CycNum u2 = u * u;
  if (n == 8) {
    const CycNum den = u2 + CycNum(2);
    if (den.is_zero()) throw std::domain_error("degenerate line parameter: u^2 = -2");
    const CycNum num = u2 - CycNum(2);
    return num * num * (den * den).inv();
  }
  const CycNum den = CycNum(1) + u2;
  if (den.is_zero()) throw std::domain_error("degenerate line parameter: u^2 = -1");
  return CycNum(4) * u2 * (den * den).inv();
}

FactoredRational j_invariant(const Rational& cr) {
  if (cr == 0 || cr == 1) throw std::domain_error("degenerate cross-ratio");
  const Rational base = cr * cr - cr + 1;
  const Rational value = base * base * base / (cr * cr * (cr - 1) * (cr - 1));
  return {value, factorize(rat_num(value)), factorize(rat_den(value))};
}

FactoredRational j_invariant_elliptic(const Rational& cr) {
  FactoredRational j = j_invariant(cr);
  j.value *= 256;
  j.num_factors = factorize(rat_num(j.value));
  j.den_factors = factorize(rat_den(j.value));
  return j;
}

std::string format_prime_powers(const std::map<BigInt, int>& f) {
  if (f.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : f) {
    if (!first) os << " ";
    first = false;
    os << p.str() << ":" << e;
  }
  return os.str();
}

}  // namespace k3pencil
