#pragma once

#include "k3lat/short_vectors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace k3lat {

/// All r with r.r = -2 in a negative definite lattice, sorted.
inline std::vector<IntVector> root_vectors(const Lattice& l) {
  if (l.rank() == 0) return {};
  if (!negative_definite(l)) throw LatticeError("root enumeration needs a negative definite lattice");
  return vectors_of_norm(-l.gram(), 2);
}

inline std::vector<LatticeVector> enumerate_roots(const Lattice& l) {
  std::vector<LatticeVector> out;
  for (const auto& r : root_vectors(l)) out.emplace_back(r);
  return out;
}

/// s_r(x) = x + (x.r) r
inline IntVector reflect(const IntMatrix& g, const IntVector& r, const IntVector& x) {
  Integer xr = bilinear(g, x, r);
  IntVector y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += xr * r[i];
  return y;
}

inline IntMatrix reflection_matrix(const IntMatrix& g, const IntVector& r) {
  const std::size_t n = g.rows();
  IntVector gr = g.apply(r);
  IntMatrix s = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) += r[i] * gr[j];
  return s;
}

/// Orbit of the seeds under the group generated by reflections in `gens`.
inline std::vector<IntVector> weyl_orbit(const IntMatrix& g, const std::vector<IntVector>& gens,
                                         const std::vector<IntVector>& seeds, std::size_t cap = 100000) {
  std::set<IntVector> seen(seeds.begin(), seeds.end());
  std::vector<IntVector> queue(seeds.begin(), seeds.end());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& s : gens) {
      IntVector y = reflect(g, s, queue[head]);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw CapExceeded("Weyl orbit exceeds cap");
        queue.push_back(y);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

/// Deterministic positive-system functional sum x_i M^i with M = 10^6 + 3.
inline Integer height_functional(const IntVector& x) {
  static const Integer m = 1000003;
  Integer s = 0, p = 1;
  for (const auto& c : x) {
    if (abs(c) * 2 >= m) throw LatticeError("root coordinate too large for the positive-system functional");
    s += c * p;
    p *= m;
  }
  return s;
}

struct RootComponent {
  AdeType type;
  std::vector<std::size_t> indices;  // positions in RootBase::simple_roots, Bourbaki order
};

struct RootBase {
  std::vector<IntVector> simple_roots;
  IntMatrix cartan;
  std::vector<RootComponent> components;

  std::size_t size() const { return simple_roots.size(); }

  /// e.g. "A3+A1+A1+A1"; empty string for the empty system.
  std::string type_string() const {
    std::string s;
    for (const auto& c : components) s += (s.empty() ? "" : "+") + c.type.name();
    return s;
  }
  std::vector<AdeType> types() const {
    std::vector<AdeType> t;
    for (const auto& c : components) t.push_back(c.type);
    return t;
  }
};

namespace detail {

// Order one connected Dynkin component in Bourbaki numbering.
inline std::pair<AdeType, std::vector<std::size_t>> order_component(
    const std::vector<std::size_t>& nodes, const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> branch;
  for (auto v : nodes) {
    if (adj[v].size() > 3) throw LatticeError("root system component is not of ADE type");
    if (adj[v].size() == 3) branch.push_back(v);
  }
  auto walk = [&](std::size_t from, std::size_t start) {
    std::vector<std::size_t> arm{start};
    std::size_t prev = from, cur = start;
    for (;;) {
      std::size_t next = SIZE_MAX;
      for (auto w : adj[cur])
        if (w != prev) next = w;
      if (next == SIZE_MAX || adj[cur].size() > 2) break;
      arm.push_back(next);
      prev = cur;
      cur = next;
    }
    return arm;
  };
  if (branch.empty()) {
    std::size_t start = SIZE_MAX;
    for (auto v : nodes)
      if (adj[v].size() <= 1 && v < start) start = v;
    if (start == SIZE_MAX) throw LatticeError("cyclic root diagram");
    std::vector<std::size_t> order{start};
    if (n > 1) {
      auto arm = walk(start, adj[start][0]);
      order.insert(order.end(), arm.begin(), arm.end());
    }
    if (order.size() != n) throw LatticeError("root system component is not of ADE type");
    return {AdeType{'A', static_cast<int>(n)}, order};
  }
  if (branch.size() != 1) throw LatticeError("root system component is not of ADE type");
  std::size_t b = branch[0];
  std::vector<std::vector<std::size_t>> arms;
  for (auto w : adj[b]) arms.push_back(walk(b, w));
  std::sort(arms.begin(), arms.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x.front() < y.front();
  });
  const std::size_t a0 = arms[0].size(), a1 = arms[1].size(), a2 = arms[2].size();
  std::vector<std::size_t> order;
  if (a0 == 1 && a1 == 1) {
    for (auto it = arms[2].rbegin(); it != arms[2].rend(); ++it) order.push_back(*it);
    order.push_back(b);
    order.push_back(arms[0][0]);
    order.push_back(arms[1][0]);
    return {AdeType{'D', static_cast<int>(n)}, order};
  }
  if (a0 == 1 && a1 == 2 && a2 >= 2 && a2 <= 4) {
    order = {arms[1][1], arms[0][0], arms[1][0], b};
    order.insert(order.end(), arms[2].begin(), arms[2].end());
    return {AdeType{'E', static_cast<int>(n)}, order};
  }
  throw LatticeError("root system component is not of ADE type");
}

}  // namespace detail

/// Base from a finite root system closed under negation.
inline RootBase classify_root_system(const IntMatrix& g, const std::vector<IntVector>& roots) {
  std::set<IntVector> all(roots.begin(), roots.end());
  for (const auto& r : roots) {
    if (bilinear(g, r, r) != -2) throw LatticeError("input vector is not a root");
    IntVector m = r;
    for (auto& c : m) c = -c;
    if (!all.count(m)) throw LatticeError("root set is not closed under negation");
  }
  std::vector<std::pair<Integer, IntVector>> pos;
  for (const auto& r : all) {
    Integer h = height_functional(r);
    if (h > 0) pos.emplace_back(h, r);
  }
  std::sort(pos.begin(), pos.end());
  std::set<IntVector> posset;
  for (const auto& p : pos) posset.insert(p.second);
  std::set<IntVector> decomposable;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      IntVector s = pos[i].second;
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += pos[j].second[k];
      if (posset.count(s)) decomposable.insert(s);
    }
  std::vector<IntVector> simple;
  for (const auto& p : pos)
    if (!decomposable.count(p.second)) simple.push_back(p.second);

  const std::size_t m = simple.size();
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      Integer p = bilinear(g, simple[i], simple[j]);
      if (p == 1) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      } else if (p != 0) {
        throw LatticeError("simple roots pair outside {0, 1}");
      }
    }
  std::vector<bool> seen(m, false);
  std::vector<std::pair<AdeType, std::vector<std::size_t>>> comps;
  for (std::size_t s = 0; s < m; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> nodes{s};
    seen[s] = true;
    for (std::size_t h = 0; h < nodes.size(); ++h)
      for (auto w : adj[nodes[h]])
        if (!seen[w]) {
          seen[w] = true;
          nodes.push_back(w);
        }
    std::sort(nodes.begin(), nodes.end());
    comps.push_back(detail::order_component(nodes, adj));
  }
  std::stable_sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    if (x.first.family != y.first.family) return x.first.family < y.first.family;
    return x.first.n > y.first.n;
  });
  RootBase base;
  for (const auto& [type, order] : comps) {
    RootComponent c{type, {}};
    for (auto v : order) {
      c.indices.push_back(base.simple_roots.size());
      base.simple_roots.push_back(simple[v]);
    }
    base.components.push_back(c);
  }
  base.cartan = IntMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) base.cartan(i, j) = -bilinear(g, base.simple_roots[i], base.simple_roots[j]);
  for (const auto& c : base.components) {
    IntMatrix ref = cartan_matrix(c.type);
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      for (std::size_t j = 0; j < c.indices.size(); ++j)
        if (base.cartan(c.indices[i], c.indices[j]) != ref(i, j))
          throw LatticeError("component Cartan matrix does not match the catalog");
  }
  return base;
}

inline RootBase simple_roots(const Lattice& l) { return classify_root_system(l.gram(), root_vectors(l)); }

/// Number of positive roots of an ADE type.
inline std::size_t positive_root_count(const AdeType& t) {
  const std::size_t n = static_cast<std::size_t>(t.n);
  switch (t.family) {
    case 'A': return n * (n + 1) / 2;
    case 'D': return n * (n - 1);
    default: return t.n == 6 ? 36 : t.n == 7 ? 63 : 120;
  }
}

struct InvolutionData {
  std::vector<std::size_t> permutation;  // -w0(r_i) = r_{permutation[i]}
  IntMatrix matrix;                      // iota = -w0, acting on column coordinates
  IntMatrix w0;
  std::size_t length = 0;                // reduced word length of w0
};

/// lambda_i with lambda_i . r_j = delta_ij, in lattice coordinates.
inline std::vector<RatVector> fundamental_weights(const RootBase& base, std::size_t dim) {
  std::vector<RatVector> out(base.size(), RatVector(dim, Rational(0)));
  for (const auto& c : base.components) {
    RatMatrix inv = inverse(cartan_matrix(c.type));
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      for (std::size_t j = 0; j < c.indices.size(); ++j) {
        const IntVector& r = base.simple_roots[c.indices[j]];
        for (std::size_t k = 0; k < dim; ++k) out[c.indices[i]][k] -= inv(i, j) * Rational(r[k]);
      }
  }
  return out;
}

inline std::vector<RatVector> fundamental_weights(const Lattice& l, const RootBase& base) {
  return fundamental_weights(base, l.rank());
}

/// w0 by reflecting a strictly dominant vector until it is antidominant.
inline InvolutionData longest_element(const Lattice& l, const RootBase& base) {
  const std::size_t n = l.rank(), m = base.size();
  const IntMatrix& g = l.gram();
  auto weights = fundamental_weights(base, n);
  RatVector v(n, Rational(0));
  for (const auto& w : weights)
    for (std::size_t k = 0; k < n; ++k) v[k] += w[k];
  std::vector<IntVector> gr;
  for (const auto& r : base.simple_roots) gr.push_back(g.apply(r));
  std::size_t bound = 0;
  for (const auto& c : base.components) bound += positive_root_count(c.type);

  IntMatrix w = IntMatrix::identity(n);
  InvolutionData out;
  for (;;) {
    std::size_t pick = m;
    Rational vr;
    for (std::size_t i = 0; i < m && pick == m; ++i) {
      vr = 0;
      for (std::size_t k = 0; k < n; ++k) vr += v[k] * Rational(gr[i][k]);
      if (vr > 0) pick = i;
    }
    if (pick == m) break;
    if (++out.length > bound) throw LatticeError("longest element walk exceeded the positive root count");
    const IntVector& r = base.simple_roots[pick];
    // s_r(v) = v + (v.r) r
    for (std::size_t k = 0; k < n; ++k) v[k] += vr * Rational(r[k]);
    IntVector u(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) u[j] += gr[pick][k] * w(k, j);
    for (std::size_t i = 0; i < n; ++i)
      if (r[i] != 0)
        for (std::size_t j = 0; j < n; ++j) w(i, j) += r[i] * u[j];
  }
  if (out.length != bound) throw LatticeError("longest element has unexpected length");
  out.w0 = w;
  out.matrix = -w;
  out.permutation.assign(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    IntVector img = out.matrix.apply(base.simple_roots[i]);
    for (std::size_t j = 0; j < m; ++j)
      if (img == base.simple_roots[j]) out.permutation[i] = j;
    if (out.permutation[i] == m) throw LatticeError("-w0 does not permute the simple roots");
  }
  return out;
}

struct InvariantSplit {
  IntMatrix inv_basis;   // rows, lattice coordinates
  IntMatrix anti_basis;
  Lattice inv;
  Lattice anti;
};

/// Kernels of (iota - 1) and (iota + 1) with induced forms.
inline InvariantSplit invariant_sublattices(const Lattice& l, const IntMatrix& iota) {
  const std::size_t n = l.rank();
  IntMatrix id = IntMatrix::identity(n);
  InvariantSplit s;
  s.inv_basis = integer_kernel(iota - id);
  s.anti_basis = integer_kernel(iota + id);
  s.inv = sublattice(l, s.inv_basis, default_labels(s.inv_basis.rows(), "p"));
  s.anti = sublattice(l, s.anti_basis, default_labels(s.anti_basis.rows(), "m"));
  return s;
}

inline InvariantSplit invariant_sublattices(const Lattice& l, const InvolutionData& iota) {
  return invariant_sublattices(l, iota.matrix);
}

/// Invariant factors of L / (L^iota + L^-iota).
inline IntVector index_of_sum(const Lattice& l, const IntMatrix& iota) {
  InvariantSplit s = invariant_sublattices(l, iota);
  IntMatrix both(s.inv_basis.rows() + s.anti_basis.rows(), l.rank());
  for (std::size_t i = 0; i < s.inv_basis.rows(); ++i) both.set_row(i, s.inv_basis.row(i));
  for (std::size_t i = 0; i < s.anti_basis.rows(); ++i) both.set_row(s.inv_basis.rows() + i, s.anti_basis.row(i));
  return smith_normal_form(both).torsion();
}

inline IntVector index_of_sum(const Lattice& l, const InvolutionData& iota) { return index_of_sum(l, iota.matrix); }

/// True when the permutation is the identity.
inline bool is_identity(const std::vector<std::size_t>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

}  // namespace k3lat
