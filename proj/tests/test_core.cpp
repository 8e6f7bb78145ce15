#include "k3lat/isometry.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace k3lat;

TEST(Number, ParseAndPrintRationals) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(to_string(Rational(4, 3)), "4/3");
  EXPECT_EQ(to_string(Rational(-2)), "-2");
  EXPECT_EQ(mod(Rational(-4, 3), Integer(2)), Rational(2, 3));
  EXPECT_EQ(floor(Rational(-1, 2)), -1);
  EXPECT_EQ(ceil(Rational(-1, 2)), 0);
  EXPECT_THROW(parse_rational("1/0"), LatticeError);
}

TEST(Matrix, DeterminantMatchesInverse) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    IntMatrix a = oracle::random_even_gram(rng, 5, 3);
    Integer d = determinant(a);
    if (d == 0) continue;
    RatMatrix prod = inverse(a) * to_rational(a);
    EXPECT_EQ(prod, RatMatrix::identity(5));
  }
}

TEST(Snf, DiagonalDividesAndTransformsAgree) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    IntMatrix a = oracle::random_even_gram(rng, 4 + t % 3, 4);
    SmithForm s = smith_normal_form(a);
    IntMatrix d = s.U * a * s.V;
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (i != j) EXPECT_EQ(d(i, j), 0);
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i)
      if (s.diagonal[i + 1] != 0) EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    Integer prod = 1;
    for (const auto& x : s.diagonal) prod *= x;
    EXPECT_EQ(abs(prod), abs(determinant(a)));
  }
}

TEST(Snf, KernelIsExact) {
  IntMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  IntMatrix k = integer_kernel(a);
  ASSERT_EQ(k.rows(), 1u);
  IntVector x = k.row(0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2], 0);
  EXPECT_EQ(abs(x[0]) + abs(x[1]) + abs(x[2]), 3);  // (1, 1, -1) up to sign
}

TEST(Lattice, RejectsMalformedGram) {
  EXPECT_THROW(make_lattice(IntMatrix{{2, 1}, {0, 2}}), LatticeError);
  EXPECT_THROW(make_lattice(IntMatrix{{2, 1, 0}, {1, 2, 0}}), LatticeError);
  EXPECT_THROW(parse_ade("E9"), LatticeError);
  EXPECT_THROW(parse_ade("D3"), LatticeError);
}

TEST(Lattice, K3LatticeInvariants) {
  Lattice l = k3();
  EXPECT_EQ(l.rank(), 22u);
  EXPECT_EQ(abs(l.det()), 1);
  EXPECT_TRUE(l.even());
  EXPECT_EQ(signature(l), (std::pair<std::size_t, std::size_t>{3, 19}));
}

TEST(Lattice, AdeDeterminants) {
  // |det| of A_n, D_n, E6, E7, E8 is n+1, 4, 3, 2, 1
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(abs(ade(AdeType{'A', n}).det()), n + 1);
  for (int n = 4; n <= 12; ++n) EXPECT_EQ(abs(ade(AdeType{'D', n}).det()), 4);
  EXPECT_EQ(abs(ade("E6").det()), 3);
  EXPECT_EQ(abs(ade("E7").det()), 2);
  EXPECT_EQ(abs(ade("E8").det()), 1);
}

TEST(Lattice, Divisibility) {
  Lattice u2 = rescale(hyperbolic_u(), 2);
  EXPECT_EQ(divisibility(u2, LatticeVector{IntVector{1, 0}}), 2);
  EXPECT_EQ(divisibility(hyperbolic_u(), LatticeVector{IntVector{2, 4}}), 2);
}

TEST(Discriminant, E6HasOrderThreeAndWeightNorm) {
  Lattice e6 = ade("E6");
  FiniteQuadraticForm f = discriminant_group(e6);
  ASSERT_EQ(f.orders, (IntVector{3}));
  // oracle: the minuscule weight has norm -4/3 in E6(-1)
  RatMatrix inv = inverse(e6.gram());
  Rational w = inv(0, 0);
  EXPECT_EQ(mod(w, Integer(2)), f.q[0]);
  EXPECT_EQ(f.q[0], Rational(2, 3));
}

TEST(Discriminant, OrderEqualsDeterminant) {
  std::mt19937_64 rng(3);
  int seen = 0;
  for (int t = 0; t < 200 && seen < 60; ++t) {
    IntMatrix g = oracle::random_even_gram(rng, 2 + t % 4, 3);
    Integer d = determinant(g);
    if (d == 0 || abs(d) > 2000) continue;
    ++seen;
    Lattice l = make_lattice(g);
    EXPECT_EQ(discriminant_group(l).order(), abs(d));
  }
  EXPECT_GT(seen, 20);
}

TEST(Discriminant, FormsOfKnownLattices) {
  auto u2 = discriminant_group(rescale(hyperbolic_u(), 2));
  EXPECT_EQ(invariant_factors(u2.orders), (IntVector{2, 2}));
  for (const auto& q : u2.q) EXPECT_EQ(q, 0);
  auto d4 = discriminant_group(ade("D4"));
  EXPECT_EQ(invariant_factors(d4.orders), (IntVector{2, 2}));
  for (const auto& q : d4.q) EXPECT_EQ(q, 1);
  // U(2) and D4 have different forms, A1+A1 and U(2) too
  EXPECT_EQ(compare_discriminant_forms(u2, d4), Decision::no);
  EXPECT_EQ(compare_discriminant_forms(discriminant_group(direct_sum({ade("A1"), ade("A1")})), u2), Decision::no);
  EXPECT_EQ(compare_discriminant_forms(discriminant_group(ade("D4")), discriminant_group(ade("D4")).negated()),
            Decision::yes);
}

TEST(Discriminant, FormIsBasisIndependent) {
  std::mt19937_64 rng(5);
  for (auto name : {"A3", "D5", "E6", "A2"}) {
    Lattice l = direct_sum({ade(name), rescale(hyperbolic_u(), 2)});
    IntMatrix u = oracle::random_unimodular(rng, l.rank(), 20);
    Lattice m = make_lattice(u * l.gram() * u.transpose());
    EXPECT_EQ(compare_discriminant_forms(discriminant_group(l), discriminant_group(m)), Decision::yes) << name;
  }
}

TEST(ShortVectors, MatchBoxEnumeration) {
  std::mt19937_64 rng(13);
  for (auto name : {"A3", "D4", "A4"}) {
    IntMatrix g = -ade(name).gram();
    IntMatrix u = oracle::random_unimodular(rng, g.rows(), 6);
    IntMatrix h = u * g * u.transpose();
    auto fast = vectors_of_norm(h, 2);
    // roots have simple-root coordinates of size at most 3 in the unscrambled basis
    auto slow = oracle::box_vectors(oracle::to_gram(g), 2, 3);
    EXPECT_EQ(fast.size(), slow.size()) << name;
    for (const auto& v : fast) {
      oracle::Vec x;
      for (const auto& c : v) x.push_back(to_int64(c));
      EXPECT_EQ(oracle::pair(oracle::to_gram(h), x, x), 2) << name;
    }
  }
}

TEST(Isometry, DefiniteYesAndNo) {
  std::mt19937_64 rng(17);
  for (auto name : {"D4", "E6", "A5"}) {
    Lattice l = ade(name);
    IntMatrix u = oracle::random_unimodular(rng, l.rank(), 25);
    Lattice m = make_lattice(u * l.gram() * u.transpose());
    EXPECT_EQ(lattices_isomorphic(l, m), Decision::yes) << name;
    auto t = find_isometry_definite(-l.gram(), -m.gram());
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ((*t) * (-m.gram()) * t->transpose(), -l.gram());
  }
  EXPECT_EQ(lattices_isomorphic(ade("A2"), direct_sum({ade("A1"), ade("A1")})), Decision::no);
  // same determinant and rank, different root systems
  EXPECT_EQ(lattices_isomorphic(ade("D8"), direct_sum({ade("A3"), ade("A3"), ade("A1"), ade("A1")})), Decision::no);
  EXPECT_EQ(lattices_isomorphic(ade("E8"), direct_sum({ade("D4"), ade("D4")})), Decision::no);
}

TEST(Isometry, IndefiniteByGenus) {
  Lattice a = direct_sum({hyperbolic_u(), ade("E8")});
  Lattice b = direct_sum({ade("E8"), hyperbolic_u()});
  EXPECT_EQ(lattices_isomorphic(a, b), Decision::yes);
  EXPECT_EQ(lattices_isomorphic(direct_sum({rescale(hyperbolic_u(), 2), ade("D4")}),
                                direct_sum({hyperbolic_u(), ade("D4")})),
            Decision::no);
}
