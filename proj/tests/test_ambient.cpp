#include "k3lat/casebook.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace k3lat;

namespace {

// Isotropic subgroups of (Z/2)^n with q(x) = sum q_i x_i (orthogonal generators), by spanning
// every set of isotropic elements.
std::size_t count_isotropic_subgroups(const std::vector<Rational>& q) {
  const std::size_t n = q.size();
  auto qv = [&](unsigned x) {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (x >> i & 1u) s += q[i];
    return mod(s, Integer(2));
  };
  std::vector<unsigned> iso;
  for (unsigned x = 1; x < (1u << n); ++x)
    if (qv(x) == 0) iso.push_back(x);
  std::set<std::set<unsigned>> groups;
  std::function<void(std::set<unsigned>, std::size_t)> grow = [&](std::set<unsigned> g, std::size_t from) {
    if (!groups.insert(g).second) return;
    for (std::size_t k = from; k < iso.size(); ++k) {
      if (g.count(iso[k])) continue;
      std::set<unsigned> h = g;
      for (unsigned a : g) h.insert(a ^ iso[k]);
      bool ok = true;
      for (unsigned a : h) ok = ok && qv(a) == 0;
      if (ok) grow(h, k + 1);
    }
  };
  grow({0u}, 0);
  return groups.size();
}

// Admissibility of N containing <H> + A1^m, brute force over half-integral node coefficients.
bool nodal_admissible_oracle(const RatMatrix& basis, std::size_t m) {
  oracle::Membership mem(basis);
  std::vector<std::int64_t> k(m + 1, 0);
  std::vector<int> c(m, -2);
  while (true) {
    std::int64_t sq = 0;
    for (int x : c) sq += x * x;
    // k/2: (H-part, c); norms are -2 sum (c/2)^2 and 1/2 - 2 sum (c/2)^2
    for (int hpart : {0, 1}) {
      k[0] = hpart;
      for (std::size_t i = 0; i < m; ++i) k[i + 1] = c[i];
      bool extra_root = hpart == 0 && sq == 4 && std::count_if(c.begin(), c.end(), [](int x) { return x != 0; }) > 1;
      bool iso_u = hpart == 1 && sq == 1;
      if ((extra_root || iso_u) && mem.contains(k, 2)) return false;
    }
    std::size_t i = 0;
    while (i < m && c[i] == 2) c[i++] = -2;
    if (i == m) break;
    ++c[i];
  }
  return true;
}

Configuration five_nodes() { return config_quintic_five_nodes(); }

}  // namespace

TEST(Ambient, OrthogonalComplementAndSaturation) {
  Lattice u = hyperbolic_u();
  Sublattice k = orthogonal_complement(u, {IntVector{1, 1}});
  EXPECT_EQ(k.lattice.gram(), (IntMatrix{{-2}}));
  Sublattice s = saturation(u, {IntVector{2, 4}});
  ASSERT_EQ(s.basis.rows(), 1u);
  EXPECT_EQ(abs(s.basis(0, 0)) + abs(s.basis(0, 1)), 3);
  EXPECT_THROW(orthogonal_complement(u, {IntVector{1, 0}}), LatticeError);
}

TEST(Ambient, SaturationIsIdempotentInK3) {
  std::mt19937_64 rng(29);
  Lattice l = k3();
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 20; ++t) {
    std::vector<IntVector> vs(3, IntVector(22, 0));
    for (auto& v : vs)
      for (auto& x : v) x = 2 * c(rng);
    Sublattice s = saturation(l, vs);
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < s.basis.rows(); ++i) rows.push_back(s.basis.row(i));
    Sublattice s2 = saturation(l, rows);
    EXPECT_EQ(s2.basis, s.basis);
    EXPECT_TRUE(smith_normal_form(s.basis).torsion().empty());
  }
}

TEST(Ambient, OverlatticesOfA1Four) {
  OverlatticeEnumeration e = even_overlattices(direct_sum({ade("A1"), ade("A1"), ade("A1"), ade("A1")}));
  ASSERT_EQ(e.candidates.size(), 2u);
  EXPECT_EQ(e.candidates[1].index, 2);
  EXPECT_EQ(lattices_isomorphic(e.candidates[1].lattice, ade("D4")), Decision::yes);
}

TEST(Ambient, OverlatticeCountMatchesSubgroupOracle) {
  // <2> + A1^5: the overlattice search against a brute count of isotropic subgroups
  Lattice m = direct_sum({rank_one(2), ade("A1"), ade("A1"), ade("A1"), ade("A1"), ade("A1")});
  OverlatticeEnumeration e = even_overlattices(m);
  std::vector<Rational> q{Rational(1, 2)};
  for (int i = 0; i < 5; ++i) q.push_back(Rational(3, 2));
  EXPECT_EQ(e.candidates.size(), count_isotropic_subgroups(q));
  EXPECT_EQ(e.candidates.size(), 17u);
  for (const auto& c : e.candidates) {
    EXPECT_TRUE(c.lattice.even());
    EXPECT_EQ(c.index * c.index * abs(c.lattice.det()), abs(m.det()));
  }
}

TEST(Ambient, FrameAndM) {
  ConfigFrame f = make_frame(five_nodes());
  EXPECT_EQ(f.dim(), 6u);
  EXPECT_EQ(f.betas.size(), 2u);
  EXPECT_EQ(f.betas[0][0], Rational(5, 2));
  Embedded m = build_M(f);
  EXPECT_EQ(abs(m.lattice.det()), 16);
  EXPECT_TRUE(z2_independence(f));
  Configuration bad = five_nodes();
  bad.components[0].degree = 4;
  EXPECT_THROW(make_frame(bad), LatticeError);
  EXPECT_THROW(embed(f.frame, RatMatrix{{Rational(1, 2), 0, 0, 0, 0, 0}}), LatticeError);
}

TEST(Ambient, AdmissibilityAgreesWithBruteForce) {
  for (const auto& cfg : {five_nodes(), config_irreducible_nodal(5), config_irreducible_nodal(6),
                          config_transverse_components({4, 1, 1})}) {
    if (cfg.singularities.size() > 9) continue;
    ConfigFrame f = make_frame(cfg);
    Embedded m = build_M(f);
    auto hc = to_integer(*m.coords(to_rational(f.h)));
    OverlatticeEnumeration all = even_overlattices(m.lattice);
    ASSERT_TRUE(all.complete);
    std::size_t admissible = 0;
    for (const auto& c : all.candidates) {
      auto hn = to_integer(*solve_rows(c.basis, to_rational(hc)));
      bool lib = check_admissible(c.lattice, hn, root_count(cfg.singularities)).admissible();
      bool brute = nodal_admissible_oracle(c.basis * m.basis, cfg.singularities.size());
      EXPECT_EQ(lib, brute) << cfg.name;
      admissible += lib;
    }
    EXPECT_EQ(admissible_picard(f, m, cfg.singularities).survivors.size(), admissible) << cfg.name;
  }
}

TEST(Ambient, WitnessesAreGenuine) {
  ConfigFrame f = make_frame(config_quartic_bitangents());
  Embedded m = build_M(f);
  auto hc = to_integer(*m.coords(to_rational(f.h)));
  OverlatticeEnumeration all = even_overlattices(m.lattice);
  ASSERT_TRUE(all.complete);
  ASSERT_GT(all.candidates.size(), 1u);
  for (std::size_t i = 1; i < all.candidates.size(); ++i) {
    const auto& c = all.candidates[i];
    IntVector hn = to_integer(*solve_rows(c.basis, to_rational(hc)));
    AdmissibilityReport r = check_admissible(c.lattice, hn, root_count(f.base.types()));
    EXPECT_FALSE(r.admissible());
    if (r.witness) {
      EXPECT_EQ(c.lattice.pair(*r.witness, *r.witness), 0);
      EXPECT_EQ(c.lattice.pair(*r.witness, hn), 1);
    } else {
      EXPECT_GT(r.root_count, root_count(f.base.types()));
    }
  }
}

TEST(Ambient, QuinticCasesLeaveOnlyM) {
  for (const auto& cfg : {config_quintic_five_nodes(), config_quintic_tacnode(), config_quintic_two_tacnodes()}) {
    AdmissibleResult r = admissible_picard(cfg);
    EXPECT_TRUE(r.complete);
    ASSERT_EQ(r.survivors.size(), 1u) << cfg.name;
    EXPECT_EQ(r.candidates[0].index, 1);
  }
}

TEST(Ambient, GluingRecoversK3) {
  Lattice p = direct_sum({rescale(hyperbolic_u(), 2), ade("D4")});
  Lattice q = direct_sum({rescale(hyperbolic_u(), 2), hyperbolic_u(), ade("D4"), ade("E8")});
  GluedEmbedding g = glue_along_discriminants(p, q);
  ASSERT_EQ(g.forms_match, Decision::yes);
  EXPECT_EQ(abs(g.ambient.det()), 1);
  EXPECT_TRUE(g.ambient.even());
  EXPECT_EQ(signature(g.ambient), (std::pair<std::size_t, std::size_t>{3, 19}));
  EXPECT_TRUE(smith_normal_form(g.p_rows).torsion().empty());
  EXPECT_EQ(g.p_rows * g.ambient.gram() * g.p_rows.transpose(), p.gram());
  EXPECT_EQ(lattices_isomorphic(g.complement.lattice, q), Decision::yes);
  EXPECT_EQ(glue_along_discriminants(p, direct_sum({hyperbolic_u(), hyperbolic_u(), ade("D4"), ade("E8")})).forms_match,
            Decision::no);
}

TEST(Ambient, EightDividesFilter) {
  std::size_t roots = 0, kept = 0;
  for (const auto& e : eight_divides_filter()) {
    int s = 0;
    for (int x : e.coeffs) s += x * x;
    EXPECT_EQ(s % 8, 0);
    if (e.status == "root") {
      ++roots;
      EXPECT_EQ(e.norm, -2);
    }
    if (e.status == "kept") {
      ++kept;
      EXPECT_EQ(e.coeffs, (std::array<int, 4>{2, 2, 2, 2}));
    }
  }
  EXPECT_EQ(roots, 6u);
  EXPECT_EQ(kept, 1u);
}
