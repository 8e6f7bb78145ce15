#pragma once

#include "k3lat/ambient.hpp"
#include "k3lat/resolution.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace k3lat {

using json = nlohmann::ordered_json;

inline json to_json(const Integer& a) {
  if (a >= std::numeric_limits<std::int64_t>::min() && a <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(a);
  return a.str();
}

inline json to_json(const Rational& r) {
  if (is_integer(r)) return to_json(numer(r));
  return to_string(r);
}

inline json to_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const RatVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const IntMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline json to_json(const RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (!is_integer(r)) throw LatticeError("expected an integer, got " + j.get<std::string>());
    return numer(r);
  }
  throw LatticeError("expected an integer in JSON input");
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw LatticeError("expected an exact rational (integer or \"num/den\")");
}

inline IntMatrix int_matrix_from_json(const json& j) {
  if (!j.is_array()) throw LatticeError("matrix must be a JSON array of rows");
  const std::size_t n = j.size();
  std::size_t cols = n == 0 ? 0 : j[0].size();
  IntMatrix m(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw LatticeError("matrix rows have different lengths");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

/// {"labels":[...], "gram":[[...],...]}
inline json lattice_to_json(const Lattice& l) {
  json j;
  j["labels"] = l.labels();
  j["gram"] = to_json(l.gram());
  return j;
}

inline Lattice lattice_from_json(const json& j, LatticeOptions opt = {}) {
  if (!j.contains("gram")) throw LatticeError("lattice JSON needs a \"gram\" field");
  IntMatrix g = int_matrix_from_json(j["gram"]);
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return make_lattice(g, labels, opt);
}

inline std::string coords_string(const IntVector& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + c[i].str();
  return s + ")";
}

/// {"orders":[...], "q":[["coords","num/den"],...], "b":[[...]]}, q and b on the generators.
inline json form_to_json(const FiniteQuadraticForm& f) {
  json j;
  j["orders"] = to_json(f.orders);
  j["invariant_factors"] = to_json(invariant_factors(f.orders));
  j["group"] = group_string(f.orders);
  json q = json::array();
  for (std::size_t i = 0; i < f.ngens(); ++i) {
    IntVector c(f.ngens(), 0);
    c[i] = 1;
    q.push_back(json::array({coords_string(c), to_string(f.q[i])}));
  }
  j["q"] = q;
  json b = json::array();
  for (std::size_t i = 0; i < f.ngens(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < f.ngens(); ++k) row.push_back(to_string(f.b(i, k)));
    b.push_back(row);
  }
  j["b"] = b;
  return j;
}

inline json root_base_to_json(const RootBase& base) {
  json j;
  json roots = json::array();
  for (const auto& r : base.simple_roots) roots.push_back(to_json(r));
  j["simple_roots"] = roots;
  json comps = json::array();
  for (const auto& c : base.components) {
    json cj;
    cj["type"] = c.type.name();
    cj["indices"] = c.indices;
    comps.push_back(cj);
  }
  j["components"] = comps;
  j["type"] = base.type_string();
  return j;
}

inline json resolution_to_json(const ResolutionResult& r) {
  json nodes = json::array();
  for (const auto& n : r.graph.nodes) {
    json nj;
    nj["name"] = n.name;
    nj["self_intersection"] = n.self;
    nodes.push_back(nj);
  }
  json edges = json::array();
  for (auto [a, b] : r.graph.edges) edges.push_back(json::array({a, b}));
  json j;
  j["type"] = r.type.name();
  j["dual_graph"] = {{"nodes", nodes}, {"edges", edges}};
  j["m"] = r.m;
  j["iota"] = r.iota_kind;
  j["iota_permutation"] = r.iota;
  j["blowups"] = r.blowups;
  json down = json::array();
  for (std::size_t i = 0; i < r.downstairs.size(); ++i)
    down.push_back({{"name", "E" + std::to_string(i + 1)},
                    {"self_intersection", r.downstairs[i].self},
                    {"branch", r.downstairs[i].branch}});
  j["downstairs"] = down;
  return j;
}

/// {"name":..., "degree":6, "singularities":[{"type":"A3"},...],
///  "components":[{"degree":1, "incidences":[{"sing":0, "node":"middle", "mult":1}]}]}
inline Configuration configuration_from_json(const json& j) {
  Configuration c;
  c.name = j.value("name", std::string());
  c.degree = j.value("degree", 6);
  if (!j.contains("singularities")) throw LatticeError("configuration needs \"singularities\"");
  for (const auto& s : j["singularities"]) {
    std::string t = s.is_string() ? s.get<std::string>() : s.at("type").get<std::string>();
    c.singularities.push_back(parse_ade(t));
  }
  if (j.contains("components"))
    for (const auto& cj : j["components"]) {
      CurveComponent comp;
      comp.degree = cj.at("degree").get<int>();
      if (cj.contains("incidences"))
        for (const auto& ij : cj["incidences"]) {
          Incidence inc;
          inc.sing = ij.at("sing").get<std::size_t>();
          if (inc.sing >= c.singularities.size()) throw LatticeError("incidence refers to a missing singularity");
          const AdeType& t = c.singularities[inc.sing];
          const json& node = ij.contains("node") ? ij["node"] : json(1);
          if (node.is_string()) {
            if (node.get<std::string>() != "middle") throw LatticeError("node must be an index or \"middle\"");
            if (t.family != 'A' || t.n % 2 == 0) throw LatticeError("\"middle\" needs an A_n with n odd");
            inc.node = static_cast<std::size_t>((t.n + 1) / 2);
          } else {
            inc.node = node.get<std::size_t>();
          }
          if (ij.contains("mult")) inc.mult = integer_from_json(ij["mult"]);
          comp.incidences.push_back(inc);
        }
      c.components.push_back(comp);
    }
  return c;
}

inline json configuration_to_json(const Configuration& c) {
  json j;
  j["name"] = c.name;
  j["degree"] = c.degree;
  json s = json::array();
  for (const auto& t : c.singularities) s.push_back({{"type", t.name()}});
  j["singularities"] = s;
  json comps = json::array();
  for (const auto& comp : c.components) {
    json inc = json::array();
    for (const auto& i : comp.incidences)
      inc.push_back({{"sing", i.sing}, {"node", i.node}, {"mult", to_json(i.mult)}});
    comps.push_back({{"degree", comp.degree}, {"incidences", inc}});
  }
  j["components"] = comps;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LatticeError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw LatticeError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace k3lat
