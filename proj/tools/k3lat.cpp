#include "k3lat/casebook.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

using namespace k3lat;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string ade, gram, file, format = "text", case_id, type;
  int n = 0;
  bool all = false, details = false;
  std::int64_t cap_disc = 10000, cap_roots = 100000;
};

Lattice input_lattice(const Options& o) {
  if (!o.ade.empty() && !o.gram.empty()) throw UsageError("give either --ade or --gram, not both");
  if (!o.ade.empty()) {
    std::vector<Lattice> parts;
    std::string spec = o.ade;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      auto plus = spec.find('+', pos);
      std::string t = spec.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
      parts.push_back(ade(t));
      if (plus == std::string::npos) break;
      pos = plus + 1;
    }
    return parts.size() == 1 ? parts[0] : direct_sum(parts);
  }
  if (!o.gram.empty()) return lattice_from_json(read_json_file(o.gram));
  throw UsageError("a lattice is required: --ade TYPE or --gram FILE");
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_lat(const Options& o) {
  Lattice l = input_lattice(o);
  auto in = inertia(l.gram());
  json j = lattice_to_json(l);
  j["rank"] = l.rank();
  j["det"] = to_json(l.det());
  j["even"] = l.even();
  j["signature"] = json::array({in.plus, in.minus});
  j["degenerate"] = in.zero != 0;
  std::ostringstream os;
  os << "rank " << l.rank() << ", det " << l.det() << ", signature (" << in.plus << "," << in.minus << ")"
     << (in.zero ? ", degenerate" : "") << (l.even() ? ", even" : ", odd") << "\n";
  emit(o, j, os.str());
  return 0;
}

int cmd_roots(const Options& o) {
  Lattice l = input_lattice(o);
  auto roots = root_vectors(l);
  if (static_cast<std::int64_t>(roots.size()) > o.cap_roots)
    throw CapExceeded("root count " + std::to_string(roots.size()) + " exceeds --cap-roots");
  RootBase b = classify_root_system(l.gram(), roots);
  json j;
  j["count"] = roots.size();
  j["base"] = root_base_to_json(b);
  std::ostringstream os;
  os << roots.size() << " roots, type " << (b.simple_roots.empty() ? "empty" : b.type_string()) << "\n";
  for (const auto& r : b.simple_roots) os << "  " << coords_string(r) << "\n";
  emit(o, j, os.str());
  return 0;
}

int cmd_disc(const Options& o) {
  Lattice l = input_lattice(o);
  if (l.det() == 0) throw LatticeError("discriminant group of a degenerate lattice");
  FiniteQuadraticForm f = discriminant_group(l);
  if (f.order() > o.cap_disc) throw CapExceeded("discriminant group larger than --cap-disc");
  json j = form_to_json(f);
  std::ostringstream os;
  os << "A = " << group_string(f.orders) << " (order " << f.order() << ")\n";
  for (std::size_t i = 0; i < f.ngens(); ++i) os << "  q(g" << i + 1 << ") = " << to_string(f.q[i]) << " mod 2\n";
  emit(o, j, os.str());
  return 0;
}

// {"gram": [[...]], "vectors": [[...], ...]}
int cmd_sat(const Options& o) {
  if (o.file.empty()) throw UsageError("sat needs --file with \"gram\" and \"vectors\"");
  json in = read_json_file(o.file);
  Lattice l = lattice_from_json(in);
  if (!in.contains("vectors")) throw LatticeError("sat input needs \"vectors\"");
  IntMatrix v = int_matrix_from_json(in["vectors"]);
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    if (v.cols() != l.rank()) throw LatticeError("vector length does not match the rank");
    rows.push_back(v.row(i));
  }
  Sublattice s = saturation(l, rows);
  // span(v) has index prod(torsion) in its saturation
  Integer index = 1;
  for (const auto& d : smith_normal_form(v).torsion()) index *= d;
  json j;
  j["basis"] = to_json(s.basis);
  j["index"] = to_json(index);
  j["primitive"] = index == 1;
  std::ostringstream os;
  os << "saturation of rank " << s.basis.rows() << ", index " << index << (index == 1 ? " (primitive)" : "") << "\n";
  for (std::size_t i = 0; i < s.basis.rows(); ++i) os << "  " << coords_string(s.basis.row(i)) << "\n";
  emit(o, j, os.str());
  return 0;
}

int cmd_overlat(const Options& o) {
  if (!o.file.empty() && o.ade.empty() && o.gram.empty()) {
    json in = read_json_file(o.file);
    Configuration cfg = configuration_from_json(in);
    ConfigFrame f = make_frame(cfg);
    Embedded m = build_M(f);
    AdmissibleResult res = admissible_picard(f, m, cfg.singularities, o.cap_disc);
    Embedded frame = extend_frame(f, {});
    json cands = json::array();
    std::ostringstream os;
    os << res.survivors.size() << " admissible candidate" << (res.survivors.size() == 1 ? "" : "s")
       << (res.complete ? "" : " (search incomplete)") << "\n";
    for (std::size_t i = 0; i < res.survivors.size(); ++i) {
      const Embedded& p = res.survivors[i];
      Integer idx = index_in(p, frame.basis);
      cands.push_back({{"index", to_json(idx)},
                       {"index_over_M", to_json(res.candidates[i].index)},
                       {"basis", to_json(p.basis)},
                       {"gram", to_json(p.lattice.gram())}});
      os << "  candidate " << i + 1 << ": index " << idx << " over <H>+L, " << res.candidates[i].index
         << " over M\n";
    }
    json j{{"name", cfg.name}, {"candidates", cands}, {"complete", res.complete}, {"rejected", res.rejected}};
    emit(o, j, os.str());
    return res.complete ? 0 : 3;
  }
  Lattice l = input_lattice(o);
  OverlatticeEnumeration e = even_overlattices(l, o.cap_disc);
  json cands = json::array();
  std::ostringstream os;
  os << e.candidates.size() << " even overlattices, " << e.isotropic_elements << " isotropic elements"
     << (e.complete ? "" : " (search incomplete)") << "\n";
  for (const auto& c : e.candidates) {
    json g = json::array();
    for (const auto& v : c.glue) g.push_back(to_json(v));
    cands.push_back({{"index", to_json(c.index)}, {"glue", g}, {"gram", to_json(c.lattice.gram())}});
    os << "  index " << c.index << ", glue";
    for (const auto& v : c.glue) os << " " << coords_string(v);
    os << "\n";
  }
  json j{{"candidates", cands}, {"isotropic_elements", e.isotropic_elements}, {"complete", e.complete}};
  emit(o, j, os.str());
  return e.complete ? 0 : 3;
}

int cmd_resolve(const Options& o) {
  AdeType t;
  if (!o.ade.empty())
    t = parse_ade(o.ade);
  else if (!o.type.empty() && o.n > 0)
    t = parse_ade(o.type + std::to_string(o.n));
  else
    throw UsageError("resolve needs --ade TYPE or --type X --n N");
  ResolutionResult r = resolve(t);
  if (o.format == "dot") {
    std::cout << to_dot(r);
    return 0;
  }
  std::ostringstream os;
  os << r.type.name() << ": m = " << r.m << ", iota " << r.iota_kind << ", " << r.blowups << " blowups\n";
  for (const auto& n : r.graph.nodes) os << "  " << n.name << " (" << n.self << ")\n";
  emit(o, resolution_to_json(r), os.str());
  return 0;
}

std::size_t thread_limit() {
  if (const char* e = std::getenv("K3LAT_THREADS")) {
    long v = std::strtol(e, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_verify(const Options& o) {
  std::vector<std::string> ids;
  if (o.all)
    ids = case_ids();
  else if (!o.case_id.empty())
    ids.push_back(o.case_id);
  else
    throw UsageError("verify needs --case ID or --all");
  for (const auto& id : ids)
    if (std::find(case_ids().begin(), case_ids().end(), id) == case_ids().end())
      throw UsageError("unknown case id: " + id);
  Expectations ex = Expectations::load();
  std::vector<CaseReport> reports(ids.size());
  std::vector<std::string> errors(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      try {
        reports[i] = run_case(ids[i], ex);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < std::min(thread_limit(), ids.size()); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = 0;
  json j = json::array();
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!errors[i].empty()) {
      CaseReport& r = reports[i];
      r.case_id = ids[i];
      r.checks.push_back({"pipeline", "", "unknown", errors[i], nullptr});
    }
    const CaseReport& r = reports[i];
    if (!r.ok())
      code = 1;
    else if (r.has_unknown() && code == 0)
      code = 3;
    j.push_back(report_to_json(r, o.details));
    os << report_to_text(r);
  }
  emit(o, json{{"reports", j}}, os.str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice tools for double covers of the plane branched along sextics"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text", "dot"}));
    c->add_option("--cap-disc", o.cap_disc, "Largest discriminant group enumerated")->check(CLI::PositiveNumber);
    c->add_option("--cap-roots", o.cap_roots, "Largest root system enumerated")->check(CLI::PositiveNumber);
  };
  auto add_lattice = [&](CLI::App* c) {
    c->add_option("--ade", o.ade, "ADE type, e.g. E6 or A1+D4");
    c->add_option("--gram", o.gram, "JSON file with a \"gram\" matrix");
  };
  auto* lat = app.add_subcommand("lat", "Rank, determinant, signature and parity");
  auto* roots = app.add_subcommand("roots", "Roots and a base of the root system");
  auto* disc = app.add_subcommand("disc", "Discriminant group and form");
  auto* sat = app.add_subcommand("sat", "Saturation of a set of vectors");
  auto* overlat = app.add_subcommand("overlat", "Even overlattices, or admissible Picard candidates");
  auto* res = app.add_subcommand("resolve", "Resolve an ADE curve germ and lift to the double cover");
  auto* verify = app.add_subcommand("verify", "Run the stored case checks");
  for (auto* c : {lat, roots, disc, sat, overlat, res, verify}) add_common(c);
  for (auto* c : {lat, roots, disc, overlat}) add_lattice(c);
  sat->add_option("--file", o.file, "JSON with \"gram\" and \"vectors\"");
  overlat->add_option("--file", o.file, "Configuration JSON");
  res->add_option("--ade", o.ade, "ADE type, e.g. D6");
  res->add_option("--type", o.type, "Family letter")->check(CLI::IsMember({"A", "D", "E"}));
  res->add_option("--n", o.n, "Rank")->check(CLI::PositiveNumber);
  verify->add_option("--case", o.case_id, "Case id");
  verify->add_flag("--all", o.all, "Run every case");
  verify->add_flag("--details", o.details, "Include lattices and unchecked values");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (o.format == "dot" && !res->parsed()) throw UsageError("--format dot is only available for resolve");
    if (lat->parsed()) return cmd_lat(o);
    if (roots->parsed()) return cmd_roots(o);
    if (disc->parsed()) return cmd_disc(o);
    if (sat->parsed()) return cmd_sat(o);
    if (overlat->parsed()) return cmd_overlat(o);
    if (res->parsed()) return cmd_resolve(o);
    return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const LatticeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
