// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "k3lat/casebook.hpp"
#include "k3lat/resolution.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

using namespace k3lat;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool c, const std::string& what) {
    if (!c && ok) note = what;
    ok = ok && c;
  }
};

// Every listed claim of a case must pass.
void require_claims(Outcome& out, const CaseReport& r, const std::vector<std::string>& claims) {
  for (const auto& claim : claims) {
    bool found = false;
    for (const auto& c : r.checks)
      if (c.claim == claim) {
        found = true;
        out.require(c.status == "pass", r.case_id + " " + claim + " = " + c.computed.dump());
      }
    out.require(found, r.case_id + " has no " + claim);
  }
}

// Each claim with the given prefix and suffix must pass; at least one must exist.
void require_family(Outcome& out, const CaseReport& r, const std::string& prefix, const std::string& suffix) {
  std::size_t n = 0;
  for (const auto& c : r.checks)
    if (c.claim.starts_with(prefix) && c.claim.ends_with(suffix)) {
      ++n;
      out.require(c.status == "pass", r.case_id + " " + c.claim);
    }
  out.require(n > 0, r.case_id + " has no " + prefix + "*" + suffix);
}

std::vector<AdeType> types(char family, int lo, int hi, int step = 1) {
  std::vector<AdeType> ts;
  for (int n = lo; n <= hi; n += step) ts.push_back({family, n});
  return ts;
}

Outcome root_counts() {
  Outcome out;
  auto ts = types('A', 1, 12);
  for (const auto& t : types('D', 4, 12)) ts.push_back(t);
  for (const auto& t : types('E', 6, 8)) ts.push_back(t);
  for (const auto& t : ts) {
    const std::size_t n = static_cast<std::size_t>(t.n);
    std::size_t want = t.family == 'A' ? n * (n + 1) : t.family == 'D' ? 2 * n * (n - 1) : n == 6 ? 72 : n == 7 ? 126 : 240;
    Lattice l = ade(t);
    std::size_t lib = enumerate_roots(l).size();
    std::size_t closure = oracle::reflection_closure(oracle::to_gram(l.gram())).size();
    out.require(lib == want && closure == want, t.name() + " roots " + std::to_string(lib));
  }
  return out;
}

Outcome table_one() {
  Outcome out;
  auto ts = types('A', 1, 19);
  for (const auto& t : types('D', 4, 19)) ts.push_back(t);
  for (const auto& t : types('E', 6, 8)) ts.push_back(t);
  for (const auto& t : ts) {
    int want = t.family == 'A' ? 0 : t.family == 'D' ? (t.n - 2) / 2 : t.n == 6 ? 1 : t.n == 7 ? 3 : 4;
    out.require(resolve(t).m == want, t.name());
  }
  return out;
}

Outcome tables_two_three() {
  Outcome out;
  Expectations ex = Expectations::load();
  for (const char* id : {"anti-invariant", "invariant"}) {
    CaseReport r = run_case(id, ex);
    out.require(!r.checks.empty(), id);
    for (const auto& c : r.checks) out.require(c.status == "pass", std::string(id) + " " + c.claim);
  }
  return out;
}

Outcome lemma_equality() {
  Outcome out;
  auto ts = types('A', 1, 10);
  for (const auto& t : types('D', 4, 10)) ts.push_back(t);
  for (const auto& t : types('E', 6, 8)) ts.push_back(t);
  for (const auto& t : ts) {
    Lattice l = ade(t);
    InvolutionData inv = longest_element(l, simple_roots(l));
    InvariantSplit s = invariant_sublattices(l, inv);
    IntVector q = index_of_sum(l, inv);
    bool two_elementary = std::all_of(q.begin(), q.end(), [](const Integer& x) { return x == 2; });
    out.require(two_elementary && q.size() == s.anti_basis.rows(), t.name());
  }
  return out;
}

Outcome quintic_five_nodes() {
  Outcome out;
  AdmissibleResult a = admissible_picard(config_quintic_five_nodes());
  out.require(a.complete && a.survivors.size() == 1, "survivor count");
  if (a.survivors.size() == 1) {
    const Lattice& p = a.survivors[0].lattice;
    out.require(lattices_isomorphic(p, direct_sum({rescale(hyperbolic_u(), 2), ade("D4")})) == Decision::yes,
                "P not U(2)+D4");
  }
  require_claims(out, run_case("quintic-5nodes"), {"Q/signature", "Q/rank", "Q/matches-claim", "Q/glued-ambient-is-k3"});
  return out;
}

Outcome quintic_tacnode() {
  Outcome out;
  Embedded m = build_M(config_quintic_tacnode());
  out.require(lattices_isomorphic(m.lattice, direct_sum({rescale(hyperbolic_u(), 2), ade("D5")})) == Decision::yes,
              "M not U(2)+D5");
  out.require(invariant_factors(discriminant_group(m.lattice).orders) == IntVector{2, 2, 4}, "A_M");
  AdmissibleResult a = admissible_picard(config_quintic_tacnode());
  out.require(a.complete && a.survivors.size() == 1 && a.candidates[0].index == 1, "P = M");
  return out;
}

Outcome quintic_two_tacnodes() {
  Outcome out;
  Embedded m = build_M(config_quintic_two_tacnodes());
  Lattice model = direct_sum({rank_one(-4), hyperbolic_u(), ade("D5")});
  out.require(invariant_factors(discriminant_group(m.lattice).orders) == IntVector{4, 4}, "A_M");
  out.require(lattices_isomorphic(m.lattice, model) == Decision::yes, "M not <-4>+U+D5");
  out.require(compare_discriminant_forms(discriminant_group(m.lattice), discriminant_group(model)) == Decision::yes,
              "forms differ");
  return out;
}

Outcome zariski() {
  Outcome out;
  CaseReport r = run_case("zariski-pair");
  require_claims(out, r, {"T1/Q/rank", "T2/Q/rank", "T1/Q/signature", "T2/Q/signature", "T1/Q/disc-order",
                          "T2/Q/disc-order", "Q/forms-isomorphic", "Q/lattices-isomorphic"});
  return out;
}

Outcome nodal_suite() {
  Outcome out;
  CaseReport r = run_case("nodal-orbifold");
  require_family(out, r, "irreducible-", "/faithful");
  require_family(out, r, "irreducible-", "/zero-or-five");
  require_family(out, r, "components-", "/zero-or-five");
  require_claims(out, run_case("quintic-5nodes"), {"stabilizer/faithful"});
  for (const auto& cfg : nodal_configurations()) {
    ConfigFrame f = make_frame(cfg);
    out.require(zero_or_five_check(f, build_M(f)), cfg.name);
  }
  return out;
}

Outcome properties() {
  Outcome out;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> rank(1, 6);
  int done = 0;
  for (int t = 0; done < 200 && t < 100000; ++t) {
    IntMatrix g = oracle::random_even_gram(rng, static_cast<std::size_t>(rank(rng)), 3);
    Integer d = abs(determinant(g));
    if (d == 0 || d > 500) continue;
    ++done;
    Lattice m = make_lattice(g);
    OverlatticeEnumeration e = even_overlattices(m);
    out.require(e.complete && !e.candidates.empty(), "enumeration incomplete");
    for (const auto& c : e.candidates)
      out.require(c.index * c.index * discriminant_group(c.lattice).order() == discriminant_group(m).order(),
                  "glue identity");
  }
  out.require(done == 200, "too few samples");
  for (const auto& t : catalog_up_to_rank(12)) {
    Lattice l = ade(t);
    RootBase b = simple_roots(l);
    for (const auto& r : b.simple_roots) {
      IntMatrix s = reflection_matrix(l.gram(), r);
      out.require(s.transpose() * l.gram() * s == l.gram() && s * s == IntMatrix::identity(l.rank()), t.name());
    }
    InvolutionData inv = longest_element(l, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
      IntVector w = inv.w0.apply(b.simple_roots[i]);
      IntVector target = b.simple_roots[inv.permutation[i]];
      for (auto& x : target) x = -x;
      out.require(w == target, t.name() + " w0");
    }
  }
  Lattice k = k3();
  std::uniform_int_distribution<int> c(-3, 3), count(1, 4);
  for (int t = 0; t < 40; ++t) {
    std::vector<IntVector> vs(static_cast<std::size_t>(count(rng)), IntVector(22, 0));
    for (auto& v : vs)
      for (auto& x : v) x = c(rng) * (1 + t % 3);
    Sublattice s = saturation(k, vs);
    if (s.basis.rows() == 0) continue;
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < s.basis.rows(); ++i) rows.push_back(s.basis.row(i));
    out.require(saturation(k, rows).basis == s.basis, "saturation");
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "root counts", 5, root_counts},
      {2, "branch curve table", 10, table_one},
      {3, "invariant and anti-invariant tables", 10, tables_two_three},
      {4, "index of the invariant sum", 5, lemma_equality},
      {5, "quintic with five nodes", 30, quintic_five_nodes},
      {6, "quintic with a tacnode", 30, quintic_tacnode},
      {7, "quintic with two tacnodes", 30, quintic_two_tacnodes},
      {8, "zariski pair", 30, zariski},
      {9, "nodal suite", 30, nodal_suite},
      {10, "property suites", 60, properties},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.limit) {
      o.ok = false;
      o.note = "over time limit";
    }
    failed += !o.ok;
    std::printf("%s %2d %-38s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.note.empty() ? "" : "  ",
                o.note.c_str());
  }
  return failed == 0 ? 0 : 1;
}
