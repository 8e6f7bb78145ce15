#pragma once

#include "k3lat/isometry.hpp"
#include "k3lat/roots.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace k3lat {

/// A sublattice given by basis rows in the coordinates of some frame.
struct Sublattice {
  IntMatrix basis;
  Lattice lattice;
};

/// Solve c * B = v for c (B has independent rows); nullopt if v is outside the span.
inline std::optional<RatVector> solve_rows(const RatMatrix& b, const RatVector& v) {
  const std::size_t k = b.rows(), n = b.cols();
  // augmented system B^T c = v
  RatMatrix a(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) a(i, j) = b(j, i);
    a(i, k) = v[i];
  }
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t p = r;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw LatticeError("basis rows are dependent");
    a.swap_rows(r, p);
    Rational piv = a(r, c);
    for (std::size_t j = 0; j <= k; ++j) a(r, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j <= k; ++j) a(i, j) -= f * a(r, j);
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (a(i, k) != 0) return std::nullopt;
  RatVector c(k);
  for (std::size_t i = 0; i < r; ++i) c[pivcol[i]] = a(i, k);
  return c;
}

/// {v : v.s = 0 for all s}, primitive, with induced form.
inline Sublattice orthogonal_complement(const Lattice& ambient, const std::vector<IntVector>& s,
                                        bool allow_degenerate = false) {
  const std::size_t n = ambient.rank();
  IntMatrix sm(s.size(), n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].size() != n) throw LatticeError("vector dimension does not match lattice rank");
    sm.set_row(i, s[i]);
  }
  IntMatrix k = integer_kernel(sm * ambient.gram());
  Sublattice out{k, Lattice()};
  try {
    out.lattice = sublattice(ambient, k, default_labels(k.rows(), "c"), {allow_degenerate, false});
  } catch (const LatticeError&) {
    throw LatticeError("orthogonal complement is degenerate");
  }
  return out;
}

/// Primitive hull span_Q(S) intersected with the ambient lattice.
inline Sublattice saturation(const Lattice& ambient, const std::vector<IntVector>& s,
                             bool allow_degenerate = true) {
  const std::size_t n = ambient.rank();
  IntMatrix sm(s.size(), n);
  for (std::size_t i = 0; i < s.size(); ++i) sm.set_row(i, s[i]);
  SmithForm f = smith_normal_form(sm);
  if (f.rank != s.size()) throw LatticeError("saturation needs independent vectors");
  IntMatrix vinv = to_integer(inverse(f.V));
  IntMatrix rows(f.rank, n);
  for (std::size_t i = 0; i < f.rank; ++i) rows.set_row(i, vinv.row(i));
  rows = hermite_rows(rows);
  return {rows, sublattice(ambient, rows, default_labels(rows.rows(), "s"), {allow_degenerate, !ambient.even()})};
}

/// Even overlattice M <= N <= M^dual for an isotropic subgroup of A_M.
struct OverlatticeCandidate {
  std::vector<IntVector> glue;  // generator coordinates in A_M
  Integer index = 1;            // |N / M|
  RatMatrix basis;              // rows in M coordinates
  Lattice lattice;
};

struct OverlatticeEnumeration {
  std::vector<OverlatticeCandidate> candidates;
  bool complete = true;
  std::size_t isotropic_elements = 0;
  std::size_t rejected = 0;
};

inline OverlatticeCandidate overlattice_from_glue(const Lattice& m, const DiscriminantData& dd,
                                                  const std::vector<IntVector>& glue) {
  const std::size_t n = m.rank();
  RatMatrix rows(n + glue.size(), n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1;
  for (std::size_t g = 0; g < glue.size(); ++g)
    for (std::size_t k = 0; k < dd.form.ngens(); ++k)
      if (glue[g][k] != 0)
        for (std::size_t j = 0; j < n; ++j) rows(n + g, j) += Rational(glue[g][k]) * dd.form.lifts[k][j];
  OverlatticeCandidate c;
  c.glue = glue;
  c.basis = hermite_rows(rows);
  RatMatrix g = c.basis * to_rational(m.gram()) * c.basis.transpose();
  c.lattice = make_lattice(to_integer(g), default_labels(n, "n"));
  Integer det_m = abs(m.det()), det_n = abs(c.lattice.det());
  Integer sq = det_m / det_n;
  c.index = isqrt(sq);
  if (c.index * c.index * det_n != det_m) throw LatticeError("glue identity violated");
  return c;
}

/// Subgroup search over A_M; `accept` prunes (supersets of rejected glue are never visited).
inline OverlatticeEnumeration enumerate_overlattices(
    const Lattice& m, const std::function<bool(const OverlatticeCandidate&)>& accept,
    const Integer& cap_disc = 10000, std::size_t cap_subgroups = 20000) {
  OverlatticeEnumeration out;
  DiscriminantData dd = discriminant_data(m);
  if (dd.form.order() > cap_disc) {
    out.complete = false;
    return out;
  }
  std::int64_t den = FormTable::common_den({&dd.form});
  FormTable t(dd.form, den);
  std::vector<std::int64_t> iso;
  for (std::int64_t e = 1; e < t.size(); ++e)
    if (t.q(e) == 0) iso.push_back(e);
  out.isotropic_elements = iso.size();

  struct Node {
    std::vector<std::int64_t> elems;  // sorted
    std::vector<std::int64_t> gens;
  };
  std::set<std::vector<std::int64_t>> seen;
  std::vector<Node> frontier{{{0}, {}}};
  seen.insert({0});
  {
    OverlatticeCandidate c = overlattice_from_glue(m, dd, {});
    if (!accept(c)) {
      ++out.rejected;
      return out;
    }
    out.candidates.push_back(c);
  }
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const auto& s : frontier) {
      for (std::int64_t x : iso) {
        if (std::binary_search(s.elems.begin(), s.elems.end(), x)) continue;
        bool orth = true;
        for (auto g : s.gens)
          if (t.b(x, g) != 0) orth = false;
        if (!orth) continue;
        std::vector<std::int64_t> el;
        std::int64_t ord = t.element_order(x);
        for (auto e : s.elems) {
          std::int64_t y = e;
          for (std::int64_t k = 0; k < ord; ++k) {
            el.push_back(y);
            y = t.add(y, x);
          }
        }
        std::sort(el.begin(), el.end());
        el.erase(std::unique(el.begin(), el.end()), el.end());
        if (!seen.insert(el).second) continue;
        if (seen.size() > cap_subgroups) {
          out.complete = false;
          return out;
        }
        Node nn{el, s.gens};
        nn.gens.push_back(x);
        std::vector<IntVector> glue;
        for (auto g : nn.gens) glue.push_back(t.coords_of(g));
        OverlatticeCandidate c = overlattice_from_glue(m, dd, glue);
        if (!accept(c)) {
          ++out.rejected;
          continue;
        }
        out.candidates.push_back(c);
        next.push_back(std::move(nn));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

/// All even overlattices (one per isotropic subgroup), M itself first.
inline OverlatticeEnumeration even_overlattices(const Lattice& m, const Integer& cap_disc = 10000,
                                                std::size_t cap_subgroups = 20000) {
  return enumerate_overlattices(m, [](const OverlatticeCandidate&) { return true; }, cap_disc, cap_subgroups);
}

struct AdmissibilityReport {
  bool roots_ok = false;
  bool isotropic_u_ok = false;
  std::size_t root_count = 0;       // roots of N meeting H trivially
  std::optional<IntVector> witness;  // u with u^2 = 0, u.H = 1 (N coordinates)
  bool admissible() const { return roots_ok && isotropic_u_ok; }
};

/// Filters (b) and (c) for a candidate N containing H with H^2 = 2.
inline AdmissibilityReport check_admissible(const Lattice& n, const IntVector& h, std::size_t expected_roots) {
  if (n.pair(h, h) != 2) throw LatticeError("admissibility test expects H^2 = 2");
  AdmissibilityReport rep;
  Sublattice k = orthogonal_complement(n, {h});
  std::vector<IntVector> roots;
  for (const auto& r : root_vectors(k.lattice)) {
    IntVector v(n.rank(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] != 0)
        for (std::size_t j = 0; j < n.rank(); ++j) v[j] += r[i] * k.basis(i, j);
    roots.push_back(v);
  }
  rep.root_count = roots.size();
  rep.roots_ok = roots.size() == expected_roots;
  // u^2 = 0, u.H = 1  <=>  u = (H + r)/2 with r a root orthogonal to H
  rep.isotropic_u_ok = true;
  for (const auto& r : roots) {
    bool even = true;
    for (std::size_t j = 0; j < h.size() && even; ++j)
      if ((h[j] + r[j]) % 2 != 0) even = false;
    if (even) {
      IntVector u(h.size());
      for (std::size_t j = 0; j < h.size(); ++j) u[j] = (h[j] + r[j]) / 2;
      rep.isotropic_u_ok = false;
      rep.witness = u;
      break;
    }
  }
  return rep;
}

/// Singularities, component degrees and incidences defining the classes beta_i.
struct Incidence {
  std::size_t sing = 0;
  std::size_t node = 1;  // Bourbaki index, 1-based
  Integer mult = 1;
};

struct CurveComponent {
  int degree = 1;
  std::vector<Incidence> incidences;
};

struct Configuration {
  std::string name;
  int degree = 6;
  std::vector<AdeType> singularities;
  std::vector<CurveComponent> components;
};

/// <H> + L with H first, plus the component classes and the involution.
struct ConfigFrame {
  Lattice frame;
  Lattice root_part;
  std::vector<std::size_t> offsets;  // frame index of node 1 of each singularity
  RootBase base;                     // simple roots = frame basis vectors of L
  std::vector<RatVector> betas;
  IntMatrix iota;                    // H fixed, -w0 on each block
  IntVector h;

  std::size_t dim() const { return frame.rank(); }
};

inline ConfigFrame make_frame(const Configuration& cfg) {
  int total = 0;
  for (const auto& c : cfg.components) total += c.degree;
  if (!cfg.components.empty() && total != cfg.degree)
    throw LatticeError("component degrees do not sum to the curve degree");
  ConfigFrame f;
  std::vector<Lattice> parts;
  std::vector<std::string> labels{"H"};
  std::size_t off = 1;
  for (std::size_t s = 0; s < cfg.singularities.size(); ++s) {
    Lattice a = ade(cfg.singularities[s]);
    parts.push_back(a);
    f.offsets.push_back(off);
    for (std::size_t i = 0; i < a.rank(); ++i)
      labels.push_back(cfg.singularities[s].name() + "#" + std::to_string(s + 1) + ".r" + std::to_string(i + 1));
    off += a.rank();
  }
  const std::size_t n = off;
  if (!parts.empty()) f.root_part = direct_sum(parts);
  std::vector<IntMatrix> blocks{IntMatrix{{2}}};
  for (const auto& p : parts) blocks.push_back(p.gram());
  f.frame = make_lattice(block_diagonal(blocks), labels);
  f.h = IntVector(n, 0);
  f.h[0] = 1;

  f.iota = IntMatrix::identity(n);
  for (std::size_t s = 0; s < cfg.singularities.size(); ++s) {
    const AdeType& t = cfg.singularities[s];
    RootComponent comp{t, {}};
    for (int i = 0; i < t.n; ++i) {
      comp.indices.push_back(f.base.simple_roots.size());
      IntVector r(n, 0);
      r[f.offsets[s] + static_cast<std::size_t>(i)] = 1;
      f.base.simple_roots.push_back(r);
    }
    f.base.components.push_back(comp);
    Lattice a = ade(t);
    // catalog basis is the Bourbaki simple system
    RootBase std_base;
    for (int i = 0; i < t.n; ++i) {
      IntVector r(static_cast<std::size_t>(t.n), 0);
      r[static_cast<std::size_t>(i)] = 1;
      std_base.simple_roots.push_back(r);
    }
    std_base.components.push_back({t, {}});
    for (int i = 0; i < t.n; ++i) std_base.components[0].indices.push_back(static_cast<std::size_t>(i));
    std_base.cartan = cartan_matrix(t);
    InvolutionData inv = longest_element(a, std_base);
    for (int i = 0; i < t.n; ++i)
      for (int j = 0; j < t.n; ++j)
        f.iota(f.offsets[s] + static_cast<std::size_t>(i), f.offsets[s] + static_cast<std::size_t>(j)) =
            inv.matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  const std::size_t m = f.base.simple_roots.size();
  f.base.cartan = IntMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      f.base.cartan(i, j) = -f.frame.pair(f.base.simple_roots[i], f.base.simple_roots[j]);

  auto weights = fundamental_weights(f.base, n);
  for (const auto& c : cfg.components) {
    RatVector beta(n, Rational(0));
    beta[0] = Rational(c.degree, 2);
    for (const auto& inc : c.incidences) {
      if (inc.sing >= cfg.singularities.size()) throw LatticeError("incidence refers to a missing singularity");
      if (inc.node < 1 || inc.node > static_cast<std::size_t>(cfg.singularities[inc.sing].n))
        throw LatticeError("incidence node out of range");
      const RatVector& w = weights[f.base.components[inc.sing].indices[inc.node - 1]];
      for (std::size_t k = 0; k < n; ++k) beta[k] += Rational(inc.mult) * w[k];
    }
    f.betas.push_back(beta);
  }
  return f;
}

/// A lattice with rational basis rows inside a frame.
struct Embedded {
  RatMatrix basis;
  Lattice lattice;

  std::optional<RatVector> coords(const RatVector& v) const { return solve_rows(basis, v); }
  bool contains(const RatVector& v) const {
    auto c = coords(v);
    return c && all_integral(*c);
  }
  RatVector to_frame(const RatVector& c) const {
    RatVector v(basis.cols(), Rational(0));
    for (std::size_t i = 0; i < basis.rows(); ++i)
      if (c[i] != 0)
        for (std::size_t j = 0; j < basis.cols(); ++j) v[j] += c[i] * basis(i, j);
    return v;
  }
};

inline Embedded embed(const Lattice& frame, const RatMatrix& rows, std::vector<std::string> labels = {}) {
  RatMatrix g = rows * to_rational(frame.gram()) * rows.transpose();
  if (!all_integral(g)) throw LatticeError("configuration classes pair non-integrally");
  IntMatrix gi = to_integer(g);
  for (std::size_t i = 0; i < gi.rows(); ++i)
    if (gi(i, i) % 2 != 0) throw LatticeError("configuration classes give an odd lattice");
  return {rows, make_lattice(gi, std::move(labels))};
}

/// <H> + L extended by the classes beta_i.
inline Embedded build_M(const ConfigFrame& f) {
  const std::size_t n = f.dim();
  for (const auto& b : f.betas) {
    Rational bb = bilinear(to_rational(f.frame.gram()), b, b);
    if (!is_integer(bb) || numer(bb) % 2 != 0) throw LatticeError("component class has odd or fractional square");
  }
  RatMatrix rows(n + f.betas.size(), n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1;
  for (std::size_t k = 0; k < f.betas.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) rows(n + k, j) = f.betas[k][j];
  return embed(f.frame, hermite_rows(rows), default_labels(n, "m"));
}

inline Embedded build_M(const Configuration& cfg) { return build_M(make_frame(cfg)); }

/// Frame lattice generated by <H> + L and extra rational vectors.
inline Embedded extend_frame(const ConfigFrame& f, const std::vector<RatVector>& extra) {
  const std::size_t n = f.dim();
  RatMatrix rows(n + extra.size(), n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1;
  for (std::size_t k = 0; k < extra.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) rows(n + k, j) = extra[k][j];
  return embed(f.frame, hermite_rows(rows), default_labels(n, "p"));
}

inline std::size_t root_count(const std::vector<AdeType>& types) {
  std::size_t c = 0;
  for (const auto& t : types) c += 2 * positive_root_count(t);
  return c;
}

/// Admissibility of an embedded candidate in a configuration frame.
inline AdmissibilityReport check_admissible(const ConfigFrame& f, const Embedded& n,
                                            const std::vector<AdeType>& types) {
  auto hc = n.coords(to_rational(f.h));
  if (!hc || !all_integral(*hc)) throw LatticeError("H is not in the candidate lattice");
  return check_admissible(n.lattice, to_integer(*hc), root_count(types));
}

struct AdmissibleResult {
  Embedded M;
  std::vector<Embedded> survivors;             // frame bases; M first when admissible
  std::vector<OverlatticeCandidate> candidates;  // same order, M coordinates
  bool complete = true;
  std::size_t rejected = 0;
};

/// Overlattices of M passing the root and isotropic-u filters.
inline AdmissibleResult admissible_picard(const ConfigFrame& f, const Embedded& m, const std::vector<AdeType>& types,
                                          const Integer& cap_disc = 10000) {
  AdmissibleResult res;
  res.M = m;
  auto hc = m.coords(to_rational(f.h));
  if (!hc || !all_integral(*hc)) throw LatticeError("H is not in M");
  RatVector h_m = *hc;
  const std::size_t expected = root_count(types);
  OverlatticeEnumeration en = enumerate_overlattices(
      m.lattice,
      [&](const OverlatticeCandidate& c) {
        auto hn = solve_rows(c.basis, h_m);
        return check_admissible(c.lattice, to_integer(*hn), expected).admissible();
      },
      cap_disc);
  res.complete = en.complete;
  res.rejected = en.rejected;
  for (auto& c : en.candidates) {
    res.survivors.push_back({c.basis * m.basis, c.lattice});
    res.candidates.push_back(std::move(c));
  }
  return res;
}

inline AdmissibleResult admissible_picard(const Configuration& cfg, const Integer& cap_disc = 10000) {
  ConfigFrame f = make_frame(cfg);
  return admissible_picard(f, build_M(f), cfg.singularities, cap_disc);
}

/// Every nonempty sum of at most l'-1 distinct beta_i has a non-integral coordinate.
inline bool z2_independence(const ConfigFrame& f) {
  const std::size_t l = f.betas.size();
  if (l > 20) throw CapExceeded("z2_independence is capped at 20 components");
  if (l <= 1) return true;
  const std::size_t n = f.dim();
  for (std::uint32_t mask = 1; mask < (1u << l); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > l - 1) continue;
    RatVector s(n, Rational(0));
    for (std::size_t i = 0; i < l; ++i)
      if (mask & (1u << i))
        for (std::size_t k = 0; k < n; ++k) s[k] += f.betas[i][k];
    if (all_integral(s)) return false;
  }
  return true;
}

inline bool z2_independence(const Configuration& cfg) { return z2_independence(make_frame(cfg)); }

/// Classes a(x1-x3)/4 + ... over four A3 summands with 8 | a^2+b^2+c^2+d^2.
struct EightDividesEntry {
  std::array<int, 4> coeffs{};
  Rational norm;
  std::string status;  // "zero", "root" (rejected) or "kept"
};

inline bool eight_divides(const std::array<int, 4>& t) {
  int s = 0;
  for (int x : t) s += x * x;
  return s % 8 == 0;
}

inline std::vector<EightDividesEntry> eight_divides_filter() {
  Lattice a3 = ade(AdeType{'A', 3});
  Lattice l = direct_sum({a3, a3, a3, a3});
  std::vector<EightDividesEntry> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          std::array<int, 4> t{a, b, c, d};
          if (!eight_divides(t)) continue;
          RatVector w(12, Rational(0));
          for (std::size_t k = 0; k < 4; ++k) {
            w[3 * k] += Rational(t[k], 4);
            w[3 * k + 2] -= Rational(t[k], 4);
          }
          EightDividesEntry e{t, bilinear(to_rational(l.gram()), w, w), ""};
          if (a == 0 && b == 0 && c == 0 && d == 0)
            e.status = "zero";
          else if (e.norm == -2)
            e.status = "root";
          else
            e.status = "kept";
          out.push_back(e);
        }
  return out;
}

/// Primitive embedding of P into an even unimodular lattice with complement Q, by gluing along
/// an anti-isometry A_P(-1) -> A_Q.
struct GluedEmbedding {
  Decision forms_match = Decision::unknown;
  Lattice ambient;     // the glued lattice
  IntMatrix p_rows;    // P basis inside ambient
  Sublattice complement;
};

inline GluedEmbedding glue_along_discriminants(const Lattice& p, const Lattice& q, const Integer& cap = 10000) {
  GluedEmbedding out;
  DiscriminantData dp = discriminant_data(p), dq = discriminant_data(q);
  FormComparison cmp = compare_discriminant_forms_detailed(dp.form.negated(), dq.form, cap);
  out.forms_match = cmp.result;
  if (cmp.result != Decision::yes) return out;
  const std::size_t a = p.rank(), b = q.rank(), n = a + b;
  RatMatrix rows(n + dp.form.ngens(), n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1;
  for (std::size_t g = 0; g < dp.form.ngens(); ++g) {
    for (std::size_t j = 0; j < a; ++j) rows(n + g, j) = dp.form.lifts[g][j];
    for (std::size_t k = 0; k < dq.form.ngens(); ++k)
      if (cmp.images[g][k] != 0)
        for (std::size_t j = 0; j < b; ++j) rows(n + g, a + j) += Rational(cmp.images[g][k]) * dq.form.lifts[k][j];
  }
  RatMatrix basis = hermite_rows(rows);
  IntMatrix big = block_diagonal(std::vector<IntMatrix>{p.gram(), q.gram()});
  RatMatrix g = basis * to_rational(big) * basis.transpose();
  out.ambient = make_lattice(to_integer(g), default_labels(n, "x"));
  RatMatrix inv = inverse(basis);
  out.p_rows = IntMatrix(a, n);
  std::vector<IntVector> pv;
  for (std::size_t i = 0; i < a; ++i) {
    RatVector e(n, Rational(0));
    e[i] = 1;
    RatVector c(n, Rational(0));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[j] += e[k] * inv(k, j);
    IntVector ci = to_integer(c);
    out.p_rows.set_row(i, ci);
    pv.push_back(ci);
  }
  out.complement = orthogonal_complement(out.ambient, pv);
  return out;
}

}  // namespace k3lat
