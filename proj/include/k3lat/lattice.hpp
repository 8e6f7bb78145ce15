#pragma once

#include "k3lat/snf.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace k3lat {

/// Coordinates relative to a lattice basis; rational for dual vectors.
struct LatticeVector {
  RatVector coords;

  LatticeVector() = default;
  explicit LatticeVector(RatVector c) : coords(std::move(c)) {}
  explicit LatticeVector(const IntVector& c) : coords(to_rational(c)) {}

  std::size_t size() const { return coords.size(); }
  bool integral() const { return all_integral(coords); }
  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }
  friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.coords == b.coords; }
  friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
    LatticeVector r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
    return r;
  }
  friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
    LatticeVector r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
  }
  friend LatticeVector operator*(const Rational& k, const LatticeVector& a) {
    LatticeVector r = a;
    for (auto& c : r.coords) c *= k;
    return r;
  }
};

struct LatticeOptions {
  bool allow_degenerate = false;
  bool allow_odd = false;
};

class Lattice {
 public:
  Lattice() = default;

  const IntMatrix& gram() const { return gram_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t rank() const { return gram_.rows(); }
  const Integer& det() const { return det_; }
  bool even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_(i, i) % 2 != 0) return false;
    return true;
  }

  Rational pair(const LatticeVector& a, const LatticeVector& b) const {
    check_dim(a);
    check_dim(b);
    return bilinear(gram_, a.coords, b.coords);
  }
  Rational norm(const LatticeVector& a) const { return pair(a, a); }

  Integer pair(const IntVector& a, const IntVector& b) const { return bilinear(gram_, a, b); }

  LatticeVector basis_vector(std::size_t i) const {
    RatVector c(rank(), Rational(0));
    c.at(i) = 1;
    return LatticeVector(c);
  }

  /// Basis index by label; throws if absent.
  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw LatticeError("no basis vector labelled '" + label + "'");
  }

 private:
  friend Lattice make_lattice(const IntMatrix&, std::vector<std::string>, LatticeOptions);

  void check_dim(const LatticeVector& v) const {
    if (v.size() != rank()) throw LatticeError("vector dimension does not match lattice rank");
  }

  IntMatrix gram_;
  std::vector<std::string> labels_;
  Integer det_ = 1;
};

inline std::vector<std::string> default_labels(std::size_t n, const std::string& stem = "b") {
  std::vector<std::string> l;
  for (std::size_t i = 0; i < n; ++i) l.push_back(stem + std::to_string(i + 1));
  return l;
}

inline Lattice make_lattice(const IntMatrix& gram, std::vector<std::string> labels = {},
                            LatticeOptions opt = {}) {
  if (!gram.square()) throw LatticeError("Gram matrix is not square");
  if (!gram.symmetric()) throw LatticeError("Gram matrix is not symmetric");
  if (labels.empty()) labels = default_labels(gram.rows());
  if (labels.size() != gram.rows()) throw LatticeError("label count does not match Gram dimension");
  Lattice l;
  l.gram_ = gram;
  l.labels_ = std::move(labels);
  l.det_ = determinant(gram);
  if (l.det_ == 0 && !opt.allow_degenerate) throw LatticeError("degenerate Gram matrix (det = 0)");
  if (!opt.allow_odd && !l.even()) throw LatticeError("odd diagonal entry in Gram matrix");
  return l;
}

/// ADE family and rank, e.g. {'D', 5}.
struct AdeType {
  char family = 'A';
  int n = 1;

  std::string name() const { return std::string(1, family) + std::to_string(n); }
  friend bool operator==(const AdeType& a, const AdeType& b) { return a.family == b.family && a.n == b.n; }
  friend bool operator<(const AdeType& a, const AdeType& b) {
    return a.family != b.family ? a.family < b.family : a.n < b.n;
  }
};

inline AdeType parse_ade(const std::string& s) {
  if (s.size() < 2) throw LatticeError("invalid ADE type '" + s + "'");
  AdeType t;
  t.family = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  try {
    std::size_t used = 0;
    t.n = std::stoi(s.substr(1), &used);
    if (used != s.size() - 1) throw LatticeError("");
  } catch (...) {
    throw LatticeError("invalid ADE type '" + s + "'");
  }
  bool ok = (t.family == 'A' && t.n >= 1) || (t.family == 'D' && t.n >= 4) ||
            (t.family == 'E' && t.n >= 6 && t.n <= 8);
  if (!ok) throw LatticeError("invalid ADE type '" + s + "'");
  return t;
}

/// Cartan matrix in Bourbaki numbering.
inline IntMatrix cartan_matrix(const AdeType& t) {
  const std::size_t n = static_cast<std::size_t>(t.n);
  IntMatrix c(n, n);
  auto link = [&](std::size_t a, std::size_t b) {  // 1-based nodes
    c(a - 1, b - 1) = -1;
    c(b - 1, a - 1) = -1;
  };
  for (std::size_t i = 0; i < n; ++i) c(i, i) = 2;
  switch (t.family) {
    case 'A':
      for (std::size_t i = 1; i < n; ++i) link(i, i + 1);
      break;
    case 'D':
      if (n < 4) throw LatticeError("D_n requires n >= 4");
      for (std::size_t i = 1; i + 1 < n; ++i) link(i, i + 1);
      link(n - 2, n);
      break;
    case 'E':
      if (n < 6 || n > 8) throw LatticeError("E_n requires 6 <= n <= 8");
      link(1, 3);
      link(3, 4);
      link(2, 4);
      for (std::size_t i = 4; i < n; ++i) link(i, i + 1);
      break;
    default:
      throw LatticeError("unknown ADE family");
  }
  return c;
}

inline Lattice ade(const AdeType& t) {
  return make_lattice(-cartan_matrix(t), default_labels(static_cast<std::size_t>(t.n), "r"));
}
inline Lattice ade(const std::string& s) { return ade(parse_ade(s)); }

inline Lattice hyperbolic_u() { return make_lattice(IntMatrix{{0, 1}, {1, 0}}, {"e", "f"}); }

inline Lattice rank_one(const Integer& k) { return make_lattice(IntMatrix{{k}}, {"x"}); }

inline Lattice rescale(const Lattice& l, const Integer& n) {
  if (n == 0) throw LatticeError("rescale factor must be nonzero");
  return make_lattice(n * l.gram(), l.labels(), {true, true});
}

inline Lattice direct_sum(const std::vector<Lattice>& parts) {
  std::vector<IntMatrix> blocks;
  std::vector<std::string> labels;
  bool degenerate = false, odd = false;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    blocks.push_back(parts[k].gram());
    for (const auto& s : parts[k].labels()) labels.push_back(s + "_" + std::to_string(k + 1));
    degenerate = degenerate || parts[k].det() == 0;
    odd = odd || !parts[k].even();
  }
  return make_lattice(block_diagonal(blocks), labels, {degenerate, odd});
}

/// U^3 + E8(-1)^2, signature (3,19).
inline Lattice k3() {
  Lattice u = hyperbolic_u(), e8 = ade(AdeType{'E', 8});
  return direct_sum({u, u, u, e8, e8});
}

/// Inertia (p, q, zero) by exact symmetric elimination.
struct Inertia {
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t zero = 0;
};

inline Inertia inertia(const IntMatrix& g) {
  const std::size_t n = g.rows();
  RatMatrix a = to_rational(g);
  Inertia out;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> piv;
    for (std::size_t i = 0; i < n && !piv; ++i)
      if (!done[i] && a(i, i) != 0) piv = i;
    if (!piv) {
      // all remaining diagonal entries vanish: use e_i + e_j
      std::optional<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t i = 0; i < n && !off; ++i)
        for (std::size_t j = i + 1; j < n && !off; ++j)
          if (!done[i] && !done[j] && a(i, j) != 0) off = {i, j};
      if (!off) break;
      auto [i, j] = *off;
      a.add_row(i, j, Rational(1));
      a.add_col(i, j, Rational(1));
      piv = i;
    }
    std::size_t p = *piv;
    done[p] = true;
    (a(p, p) > 0 ? out.plus : out.minus)++;
    RatVector col = a.col(p);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || col[i] == 0) continue;
      Rational f = col[i] / col[p];
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a(i, j) -= f * col[j];
    }
  }
  out.zero = n - out.plus - out.minus;
  return out;
}

inline std::pair<std::size_t, std::size_t> signature(const Lattice& l) {
  Inertia in = inertia(l.gram());
  if (in.zero != 0) throw LatticeError("signature of a degenerate lattice");
  return {in.plus, in.minus};
}

inline bool negative_definite(const Lattice& l) {
  Inertia in = inertia(l.gram());
  return in.minus == l.rank();
}

inline bool positive_definite(const Lattice& l) {
  Inertia in = inertia(l.gram());
  return in.plus == l.rank();
}

/// gcd of the pairings of v with a basis.
inline Integer divisibility(const Lattice& l, const LatticeVector& v) {
  if (!v.integral()) throw LatticeError("divisibility needs an integral vector");
  if (v.is_zero()) throw LatticeError("divisibility of the zero vector");
  IntVector c = to_integer(v.coords);
  Integer g = 0;
  for (std::size_t j = 0; j < l.rank(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < l.rank(); ++i) s += c[i] * l.gram()(i, j);
    g = gcd(g, s);
  }
  return g;
}

/// Sublattice spanned by integer rows (in l's coordinates), with induced Gram.
inline Lattice sublattice(const Lattice& l, const IntMatrix& rows, std::vector<std::string> labels = {},
                          LatticeOptions opt = {}) {
  IntMatrix g = rows * l.gram() * rows.transpose();
  return make_lattice(g, std::move(labels), opt);
}

}  // namespace k3lat
