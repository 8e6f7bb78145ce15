#include "k3lat/casebook.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace k3lat;

namespace {

struct BruteStabilizer {
  std::size_t order = 0;
  std::size_t kernel = 0;
};

// Every diagram automorphism of the base, tested directly on the frame coordinates of P and P-dual.
BruteStabilizer brute_stabilizer(const ConfigFrame& f, const Embedded& p) {
  const std::size_t n = f.dim();
  oracle::Membership mem(p.basis);
  auto [rows, scale] = oracle::scaled_rows(p.basis);
  auto [dual, dscale] = oracle::scaled_rows(inverse(p.lattice.gram()) * p.basis);
  BruteStabilizer out;
  auto apply = [&](const std::vector<std::size_t>& perm, const oracle::Vec& v) {
    oracle::Vec w(n, 0);
    w[0] = v[0];
    for (std::size_t j = 0; j + 1 < n; ++j) w[perm[j] + 1] = v[j + 1];
    return w;
  };
  oracle::diagram_automorphisms(oracle::to_gram(f.base.cartan), [&](const std::vector<std::size_t>& perm) {
    for (const auto& r : rows)
      if (!mem.contains(apply(perm, r), scale)) return;
    ++out.order;
    for (const auto& x : dual) {
      oracle::Vec gx = apply(perm, x);
      for (std::size_t k = 0; k < n; ++k) gx[k] -= x[k];
      if (!mem.contains(gx, dscale)) return;
    }
    ++out.kernel;
  });
  return out;
}

// All classes of P / (<H> + L) as 0/1 sums of the basis rows, for 2-elementary quotients.
bool zero_or_five_oracle(const Embedded& p) {
  const std::size_t k = p.basis.rows(), n = p.basis.cols();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    RatVector v(n, Rational(0));
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u)
        for (std::size_t j = 0; j < n; ++j) v[j] += p.basis(i, j);
    std::size_t half = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (!is_integer(v[j])) ++half;
    if (half > 0 && half < 5) return false;
  }
  return true;
}

}  // namespace

TEST(Stabilizer, MatchesBruteForceOnQuinticCases) {
  for (const auto& [cfg, order] : std::vector<std::pair<Configuration, int>>{
           {config_quintic_five_nodes(), 120}, {config_quintic_tacnode(), 12}, {config_quintic_two_tacnodes(), 8}}) {
    ConfigFrame f = make_frame(cfg);
    Embedded p = build_M(f);
    StabilizerDescriptor sd = stabilizer_action(f, p);
    BruteStabilizer b = brute_stabilizer(f, p);
    EXPECT_EQ(sd.group_order, b.order) << cfg.name;
    EXPECT_EQ(sd.group_order, order) << cfg.name;
    EXPECT_EQ(sd.kernel_order, b.kernel) << cfg.name;
    EXPECT_TRUE(sd.disc_action_faithful);
    EXPECT_TRUE(sd.closed);
    EXPECT_EQ(sd.disc_action.size(), sd.generators.size());
  }
}

TEST(Stabilizer, SixCuspsBothTypes) {
  ConfigFrame f = make_frame(config_six_cusps());
  Embedded t1 = extend_frame(f, {});
  RatVector d1(f.dim(), Rational(0));
  d1[0] = 1;
  auto w = fundamental_weights(f.base, f.dim());
  for (const auto& c : f.base.components)
    for (std::size_t k = 0; k < f.dim(); ++k) d1[k] += w[c.indices[0]][k];
  Embedded t2 = extend_frame(f, {d1});
  BruteStabilizer b1 = brute_stabilizer(f, t1), b2 = brute_stabilizer(f, t2);
  EXPECT_EQ(b1.order, 46080u);
  EXPECT_EQ(stabilizer_action(f, t1).group_order, b1.order);
  // only the simultaneous flip of all six A2 chains keeps the class of D1
  EXPECT_EQ(b2.order, 1440u);
  StabilizerDescriptor s2 = stabilizer_action(f, t2);
  EXPECT_EQ(s2.group_order, b2.order);
  EXPECT_EQ(s2.kernel_order, b2.kernel);
}

TEST(Stabilizer, QuarticBitangentsOnM) {
  ConfigFrame f = make_frame(config_quartic_bitangents());
  Embedded m = build_M(f);
  BruteStabilizer b = brute_stabilizer(f, m);
  StabilizerDescriptor sd = stabilizer_action(f, m);
  EXPECT_EQ(sd.group_order, b.order);
  EXPECT_EQ(b.order, 128u);
  EXPECT_EQ(sd.kernel_order, b.kernel);
}

TEST(Stabilizer, IrreducibleNodalIsSymmetricGroup) {
  Integer fact = 1;
  for (int m = 1; m <= 10; ++m) {
    fact *= m;
    ConfigFrame f = make_frame(config_irreducible_nodal(m));
    Embedded p = build_M(f);
    StabilizerDescriptor sd = stabilizer_action(f, p);
    EXPECT_EQ(sd.group_order, fact) << m;
    EXPECT_TRUE(sd.disc_action_faithful) << m;
    if (m <= 6) {
      BruteStabilizer b = brute_stabilizer(f, p);
      EXPECT_EQ(b.order, fact);
      EXPECT_EQ(b.kernel, 1u);
    }
  }
}

TEST(Stabilizer, ReducibleNodalAgainstBruteForce) {
  for (const auto& d : std::vector<std::vector<int>>{{5, 1}, {4, 1, 1}, {3, 3}}) {
    Configuration cfg = config_transverse_components(d);
    ConfigFrame f = make_frame(cfg);
    Embedded p = build_M(f);
    BruteStabilizer b = brute_stabilizer(f, p);
    StabilizerDescriptor sd = stabilizer_action(f, p);
    EXPECT_EQ(sd.group_order, b.order) << cfg.name;
    EXPECT_EQ(sd.kernel_order, b.kernel) << cfg.name;
  }
}

TEST(Stabilizer, TrivialRootPart) {
  Lattice p = rank_one(2);
  RootBase empty;
  StabilizerDescriptor sd = stabilizer_action(p, IntVector{1}, empty);
  EXPECT_EQ(sd.group_order, 1);
  EXPECT_TRUE(sd.disc_action_faithful);
  EXPECT_TRUE(sd.generators.empty());
}

TEST(ZeroOrFive, AgreesWithBruteForce) {
  for (const auto& cfg : nodal_configurations()) {
    ConfigFrame f = make_frame(cfg);
    Embedded p = build_M(f);
    if (p.basis.rows() > 20) continue;
    EXPECT_EQ(zero_or_five_check(f, p), zero_or_five_oracle(p)) << cfg.name;
    EXPECT_TRUE(zero_or_five_check(f, p)) << cfg.name;
  }
  ConfigFrame f = make_frame(config_quintic_five_nodes());
  EXPECT_TRUE(zero_or_five_check(f, build_M(f)));
}

TEST(ZeroOrFive, CatchesThreeHalves) {
  ConfigFrame f = make_frame(config_irreducible_nodal(5));
  RatMatrix rows(7, 6);
  for (std::size_t i = 0; i < 6; ++i) rows(i, i) = 1;
  rows(6, 0) = rows(6, 1) = rows(6, 2) = rows(6, 3) = Rational(1, 2);
  EXPECT_FALSE(zero_or_five_check(f, hermite_rows(rows)));
  EXPECT_THROW(zero_or_five_check(make_frame(config_quintic_tacnode()), build_M(config_quintic_tacnode()).basis),
               LatticeError);
}

TEST(Casebook, ExpectationsLoadAndReject) {
  Expectations ex = Expectations::load();
  for (const auto& id : case_ids()) EXPECT_TRUE(ex.has(id)) << id;
  EXPECT_THROW(run_case("no-such-case", ex), LatticeError);
  EXPECT_THROW(Expectations(json::object()), LatticeError);
}

TEST(Casebook, ReportStatusRules) {
  json e = json::parse(R"({"cases": {"x": [
    {"claim": "a", "ref": "r", "expected": 1},
    {"claim": "b", "ref": "r", "expected": 2},
    {"claim": "c", "ref": "r", "expected": "yes"},
    {"claim": "d", "ref": "r", "expected": "open", "mode": "candidates"},
    {"claim": "e", "ref": "r", "expected": 5}]}})");
  Expectations ex(e);
  json computed = {{"a", 1}, {"b", 3}, {"c", "unknown"}, {"d", json::array()}, {"z", 0}};
  CaseReport r = make_report("x", computed, ex);
  ASSERT_EQ(r.checks.size(), 5u);
  EXPECT_EQ(r.checks[0].status, "pass");
  EXPECT_EQ(r.checks[1].status, "fail");
  EXPECT_EQ(r.checks[2].status, "unknown");
  EXPECT_EQ(r.checks[3].status, "candidates");
  EXPECT_EQ(r.checks[4].status, "fail");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.has_unknown());
  EXPECT_EQ(r.details["unchecked"]["z"], 0);
}

TEST(Casebook, ReportsAreDeterministic) {
  Expectations ex = Expectations::load();
  for (const auto& id : {"quintic-tacnode", "anti-invariant"}) {
    std::string a = report_to_json(run_case(id, ex), true).dump();
    std::string b = report_to_json(run_case(id, ex), true).dump();
    EXPECT_EQ(a, b) << id;
  }
}

TEST(Casebook, EveryCaseMatchesItsExpectations) {
  Expectations ex = Expectations::load();
  for (const auto& id : case_ids()) {
    CaseReport r = run_case(id, ex);
    EXPECT_FALSE(r.checks.empty()) << id;
    for (const auto& c : r.checks) {
      if (id == std::string("zariski-pair") && c.claim == "T2/stabilizer/order") {
        // stated order disagrees with the brute-force count above; recorded as a known discrepancy
        EXPECT_EQ(c.status, "fail");
        EXPECT_EQ(c.computed, 1440);
        continue;
      }
      if (c.status == "candidates") {
        EXPECT_EQ(id, std::string("quartic-bitangents"));
        continue;
      }
      EXPECT_EQ(c.status, "pass") << id << " " << c.claim << " computed " << c.computed.dump();
    }
  }
}
