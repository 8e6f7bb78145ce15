#pragma once

#include "k3lat/discriminant.hpp"
#include "k3lat/short_vectors.hpp"

#include <functional>
#include <map>
#include <optional>

namespace k3lat {

/// Isometry between positive definite Gram matrices, as rows of images: T * G2 * T^T = G1.
inline std::optional<IntMatrix> find_isometry_definite(const IntMatrix& g1, const IntMatrix& g2) {
  const std::size_t n = g1.rows();
  if (g2.rows() != n) return std::nullopt;
  if (n == 0) return IntMatrix(0, 0);
  LllResult r1 = lll_gram(g1), r2 = lll_gram(g2);
  const IntMatrix& a = r1.gram;
  Integer top = 0;
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, a(i, i));
  // fingerprints: counts by norm must agree
  if (norm_profile(a, top) != norm_profile(r2.gram, top)) return std::nullopt;

  std::vector<std::vector<IntVector>> cand(n);
  {
    std::map<Integer, std::vector<IntVector>> by_norm;
    for (std::size_t i = 0; i < n; ++i) {
      const Integer& nn = a(i, i);
      if (!by_norm.count(nn)) by_norm[nn] = vectors_of_norm(r2.gram, nn);
      cand[i] = by_norm[nn];
    }
  }
  const IntMatrix& b = r2.gram;
  std::vector<IntVector> img(n);
  std::vector<IntVector> bimg(n);  // B * img, for fast pairings
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (const auto& v : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if (dot(v, bimg[j]) != a(i, j)) ok = false;
      if (!ok) continue;
      img[i] = v;
      bimg[i] = b.apply(v);
      if (rec(i + 1)) return true;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  // compose: basis1 = T1^-1 * reduced1, reduced1 -> img (in reduced2) -> basis2 via T2
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, img[i]);
  RatMatrix t1inv = inverse(r1.transform);
  RatMatrix full = t1inv * to_rational(m) * to_rational(r2.transform);
  return to_integer(full);
}

/// Three-valued isomorphism test for nondegenerate even lattices.
inline Decision lattices_isomorphic(const Lattice& l1, const Lattice& l2, const Integer& cap = 10000) {
  if (l1.rank() != l2.rank()) return Decision::no;
  if (l1.det() != l2.det()) return Decision::no;
  auto s1 = signature(l1), s2 = signature(l2);
  if (s1 != s2) return Decision::no;
  FiniteQuadraticForm f1 = discriminant_group(l1), f2 = discriminant_group(l2);
  Decision forms = compare_discriminant_forms(f1, f2, cap);
  if (forms == Decision::no) return Decision::no;
  const std::size_t n = l1.rank();
  if (s1.first >= 1 && s1.second >= 1) {
    if (forms == Decision::yes && n >= form_length(f1) + 2) return Decision::yes;
    return Decision::unknown;
  }
  if (n <= 10) {
    IntMatrix g1 = l1.gram(), g2 = l2.gram();
    if (s1.second == n) {
      g1 = -g1;
      g2 = -g2;
    }
    return find_isometry_definite(g1, g2) ? Decision::yes : Decision::no;
  }
  return Decision::unknown;
}

}  // namespace k3lat
