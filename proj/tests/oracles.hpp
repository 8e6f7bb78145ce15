#pragma once

// Brute-force reference computations on plain int64 data, kept apart from the library algorithms.

#include "k3lat/lattice.hpp"
#include "k3lat/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;
using Gram = std::vector<Vec>;

inline Gram to_gram(const k3lat::IntMatrix& m) {
  Gram g(m.rows(), Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = k3lat::to_int64(m(i, j));
  return g;
}

inline std::int64_t pair(const Gram& g, const Vec& a, const Vec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * g[i][j] * b[j];
  return s;
}

/// All roots of a root lattice given by its Gram matrix on simple roots, by closing the simple
/// roots under reflections.
inline std::set<Vec> reflection_closure(const Gram& g) {
  const std::size_t n = g.size();
  std::set<Vec> seen;
  std::vector<Vec> queue;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    if (seen.insert(e).second) queue.push_back(e);
  }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (std::size_t i = 0; i < n; ++i) {
      // s_i(x) = x - 2 (x.r_i)/(r_i.r_i) r_i with r_i.r_i = -2
      Vec x = queue[h];
      Vec ri(n, 0);
      ri[i] = 1;
      x[i] += pair(g, queue[h], ri);
      if (seen.insert(x).second) queue.push_back(x);
    }
  return seen;
}

/// Vectors with x.x = norm in the box |x_i| <= bound.
inline std::vector<Vec> box_vectors(const Gram& g, std::int64_t norm, int bound) {
  const std::size_t n = g.size();
  std::vector<Vec> out;
  Vec x(n, -bound);
  while (true) {
    if (pair(g, x, x) == norm) out.push_back(x);
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) break;
    ++x[i];
  }
  return out;
}

/// Cartan-preserving permutations of the index set, by plain backtracking.
inline void diagram_automorphisms(const Gram& c, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  const std::size_t n = c.size();
  std::vector<std::size_t> p(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      visit(p);
      return;
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (used[t]) continue;
      bool ok = true;
      for (std::size_t j = 0; j <= k && ok; ++j) ok = c[j][k] == c[j == k ? t : p[j]][t];
      if (!ok) continue;
      p[k] = t;
      used[t] = true;
      rec(k + 1);
      used[t] = false;
    }
  };
  rec(0);
}

/// Random even Gram matrix of the given rank with entries bounded by b.
inline k3lat::IntMatrix random_even_gram(std::mt19937_64& rng, std::size_t n, int b) {
  std::uniform_int_distribution<int> off(-b, b), diag(-b, b);
  k3lat::IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = 2 * diag(rng);
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = off(rng);
  }
  return g;
}

/// Random unimodular matrix as a product of elementary operations.
inline k3lat::IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps) {
  k3lat::IntMatrix u = k3lat::IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> k(-2, 2);
  for (int s = 0; s < steps; ++s) {
    std::size_t a = idx(rng), b = idx(rng);
    if (a == b) continue;
    int f = k(rng);
    for (std::size_t j = 0; j < n; ++j) u(a, j) += f * u(b, j);
  }
  return u;
}

/// Membership in a full-rank sublattice of Q^n given by basis rows, via an integer inverse.
struct Membership {
  std::vector<Vec> num;
  std::int64_t den = 1;
  explicit Membership(const k3lat::RatMatrix& basis) {
    k3lat::RatMatrix inv = k3lat::inverse(basis);
    k3lat::Integer d = 1;
    for (std::size_t i = 0; i < inv.rows(); ++i)
      for (std::size_t j = 0; j < inv.cols(); ++j) d = k3lat::lcm(d, k3lat::denom(inv(i, j)));
    den = k3lat::to_int64(d);
    num.assign(inv.rows(), Vec(inv.cols()));
    for (std::size_t i = 0; i < inv.rows(); ++i)
      for (std::size_t j = 0; j < inv.cols(); ++j) num[i][j] = k3lat::to_int64(k3lat::numer(inv(i, j) * k3lat::Rational(d)));
  }
  /// Is k / scale in the lattice?
  bool contains(const Vec& k, std::int64_t scale) const {
    for (std::size_t j = 0; j < num[0].size(); ++j) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * num[i][j];
      if (s % (scale * den) != 0) return false;
    }
    return true;
  }
};

/// Rows of a rational matrix as integer vectors over one common denominator.
inline std::pair<std::vector<Vec>, std::int64_t> scaled_rows(const k3lat::RatMatrix& m) {
  k3lat::Integer d = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d = k3lat::lcm(d, k3lat::denom(m(i, j)));
  std::vector<Vec> rows(m.rows(), Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = k3lat::to_int64(k3lat::numer(m(i, j) * k3lat::Rational(d)));
  return {rows, k3lat::to_int64(d)};
}

}  // namespace oracle
