#pragma once

#include "k3lat/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace k3lat {

/// Finite abelian group (+) Z/orders[i] with a Q/2Z-valued quadratic form.
struct FiniteQuadraticForm {
  IntVector orders;
  std::vector<Rational> q;       // q(g_i) mod 2
  RatMatrix b;                   // b(g_i, g_j) mod 1; b(g_i, g_i) = q(g_i) mod 1
  std::vector<RatVector> lifts;  // dual vectors in the source lattice, when known

  std::size_t ngens() const { return orders.size(); }

  Integer order() const {
    Integer n = 1;
    for (const auto& d : orders) n *= d;
    return n;
  }

  /// q of an element given by generator coefficients.
  Rational q_of(const IntVector& c) const {
    Rational s = 0;
    for (std::size_t i = 0; i < ngens(); ++i) {
      if (c[i] == 0) continue;
      s += Rational(c[i] * c[i]) * q[i];
      for (std::size_t j = i + 1; j < ngens(); ++j)
        if (c[j] != 0) s += Rational(2 * c[i] * c[j]) * b(i, j);
    }
    return mod(s, Integer(2));
  }

  Rational b_of(const IntVector& x, const IntVector& y) const {
    Rational s = 0;
    for (std::size_t i = 0; i < ngens(); ++i)
      for (std::size_t j = 0; j < ngens(); ++j)
        if (x[i] != 0 && y[j] != 0) s += Rational(x[i] * y[j]) * b(i, j);
    return mod(s, Integer(1));
  }

  /// The form with q negated (A(-1)).
  FiniteQuadraticForm negated() const {
    FiniteQuadraticForm f = *this;
    for (auto& v : f.q) v = mod(-v, Integer(2));
    for (std::size_t i = 0; i < ngens(); ++i)
      for (std::size_t j = 0; j < ngens(); ++j) f.b(i, j) = mod(-b(i, j), Integer(1));
    f.lifts.clear();
    return f;
  }
};

/// Build a form from orders and a symmetric matrix of pairings (diagonal read mod 2, rest mod 1).
inline FiniteQuadraticForm make_form(IntVector orders, const RatMatrix& pairing) {
  FiniteQuadraticForm f;
  const std::size_t n = orders.size();
  if (pairing.rows() != n || pairing.cols() != n) throw LatticeError("form dimension mismatch");
  for (const auto& d : orders)
    if (d < 1) throw LatticeError("form orders must be positive");
  f.orders = std::move(orders);
  f.b = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    f.q.push_back(mod(pairing(i, i), Integer(2)));
    for (std::size_t j = 0; j < n; ++j) f.b(i, j) = mod(pairing(i, j), Integer(1));
  }
  return f;
}

/// Invariant factors (> 1) of a finite abelian group given by cyclic orders.
inline IntVector invariant_factors(const IntVector& orders) {
  IntMatrix d(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) d(i, i) = orders[i];
  return smith_normal_form(d).torsion();
}

/// A_L = L^dual / L via Smith form of the Gram matrix.
struct DiscriminantData {
  FiniteQuadraticForm form;
  SmithForm snf;
  std::vector<std::size_t> active;  // SNF positions with d > 1
};

inline DiscriminantData discriminant_data(const Lattice& l) {
  if (l.det() == 0) throw LatticeError("discriminant group of a degenerate lattice");
  DiscriminantData out;
  out.snf = smith_normal_form(l.gram());
  const std::size_t n = l.rank();
  IntVector orders;
  std::vector<RatVector> lifts;
  for (std::size_t i = 0; i < n; ++i) {
    const Integer& d = out.snf.diagonal[i];
    if (d == 1) continue;
    out.active.push_back(i);
    orders.push_back(d);
    RatVector g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = Rational(out.snf.V(k, i), d);
    lifts.push_back(g);
  }
  RatMatrix p(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i)
    for (std::size_t j = 0; j < orders.size(); ++j) p(i, j) = bilinear(l.gram(), lifts[i], lifts[j]);
  out.form = make_form(orders, p);
  out.form.lifts = lifts;
  return out;
}

inline FiniteQuadraticForm discriminant_group(const Lattice& l) { return discriminant_data(l).form; }

/// Generator coefficients of the class of a dual vector x (coordinates in l's basis).
inline IntVector discriminant_coords(const Lattice& l, const DiscriminantData& dd, const RatVector& x) {
  RatVector y = to_rational(l.gram()).apply(x);
  if (!all_integral(y)) throw LatticeError("vector is not in the dual lattice");
  IntVector z = dd.snf.U.apply(to_integer(y));
  IntVector c;
  for (std::size_t k = 0; k < dd.active.size(); ++k) c.push_back(mod(z[dd.active[k]], dd.form.orders[k]));
  return c;
}

/// Dense integer tables for a form of modest order; elements are mixed-radix indices.
class FormTable {
 public:
  FormTable(const FiniteQuadraticForm& f, std::int64_t den) : n_(f.ngens()), den_(den) {
    size_ = 1;
    for (const auto& d : f.orders) {
      ord_.push_back(to_int64(d));
      size_ *= ord_.back();
    }
    qi_.resize(n_);
    bij_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      qi_[i] = scaled(f.q[i], 2);
      for (std::size_t j = 0; j < n_; ++j) bij_[i * n_ + j] = scaled(f.b(i, j), 1);
    }
    coords_.resize(static_cast<std::size_t>(size_) * n_);
    for (std::int64_t e = 0; e < size_; ++e) {
      std::int64_t r = e;
      for (std::size_t i = 0; i < n_; ++i) {
        coords_[static_cast<std::size_t>(e) * n_ + i] = r % ord_[i];
        r /= ord_[i];
      }
    }
    qv_.resize(static_cast<std::size_t>(size_));
    for (std::int64_t e = 0; e < size_; ++e) qv_[static_cast<std::size_t>(e)] = compute_q(e);
  }

  std::int64_t size() const { return size_; }
  std::size_t ngens() const { return n_; }
  std::int64_t den() const { return den_; }
  std::int64_t gen_order(std::size_t i) const { return ord_[i]; }
  std::int64_t coord(std::int64_t e, std::size_t i) const { return coords_[static_cast<std::size_t>(e) * n_ + i]; }

  /// q(e) * den, reduced mod 2 * den
  std::int64_t q(std::int64_t e) const { return qv_[static_cast<std::size_t>(e)]; }
  /// b(x, y) * den, reduced mod den
  std::int64_t b(std::int64_t x, std::int64_t y) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t xi = coord(x, i);
      if (!xi) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        std::int64_t yj = coord(y, j);
        if (yj) s = (s + xi * yj % den_ * bij_[i * n_ + j]) % den_;
      }
    }
    return s;
  }

  std::int64_t add(std::int64_t x, std::int64_t y) const {
    std::int64_t e = 0, m = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      e += (coord(x, i) + coord(y, i)) % ord_[i] * m;
      m *= ord_[i];
    }
    return e;
  }

  std::int64_t neg(std::int64_t x) const {
    std::int64_t e = 0, m = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      e += (ord_[i] - coord(x, i)) % ord_[i] * m;
      m *= ord_[i];
    }
    return e;
  }

  std::int64_t index_of(const IntVector& c) const {
    std::int64_t e = 0, m = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      e += to_int64(mod(c[i], Integer(ord_[i]))) * m;
      m *= ord_[i];
    }
    return e;
  }

  IntVector coords_of(std::int64_t e) const {
    IntVector c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = coord(e, i);
    return c;
  }

  std::int64_t element_order(std::int64_t e) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t c = coord(e, i);
      if (!c) continue;
      std::int64_t g = std::gcd(c, ord_[i]);
      o = std::lcm(o, ord_[i] / g);
    }
    return o;
  }

  /// Common denominator for both forms' values.
  static std::int64_t common_den(const std::vector<const FiniteQuadraticForm*>& fs) {
    Integer d = 1;
    for (const auto* f : fs) {
      for (const auto& v : f->q) d = lcm(d, denom(v));
      for (std::size_t i = 0; i < f->ngens(); ++i)
        for (std::size_t j = 0; j < f->ngens(); ++j) d = lcm(d, denom(f->b(i, j)));
    }
    return to_int64(d);
  }

 private:
  std::int64_t scaled(const Rational& v, std::int64_t modulus) const {
    Rational s = v * Rational(den_);
    if (!is_integer(s)) throw LatticeError("form value incompatible with denominator");
    return to_int64(mod(numer(s), Integer(modulus * den_)));
  }

  std::int64_t compute_q(std::int64_t e) const {
    const std::int64_t m2 = 2 * den_;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t ci = coord(e, i);
      if (!ci) continue;
      s = (s + ci * ci % m2 * qi_[i]) % m2;
      for (std::size_t j = i + 1; j < n_; ++j) {
        std::int64_t cj = coord(e, j);
        if (cj) s = (s + 2 * (ci * cj % den_) * bij_[i * n_ + j]) % m2;
      }
    }
    return s;
  }

  std::size_t n_;
  std::int64_t den_;
  std::int64_t size_ = 1;
  std::vector<std::int64_t> ord_;
  std::vector<std::int64_t> qi_;
  std::vector<std::int64_t> bij_;
  std::vector<std::int64_t> coords_;
  std::vector<std::int64_t> qv_;
};

struct FormComparison {
  Decision result = Decision::unknown;
  /// images of the generators of the first form, as coordinates in the second
  std::vector<IntVector> images;
};

/// Isometry search by backtracking over generator images.
inline FormComparison compare_discriminant_forms_detailed(const FiniteQuadraticForm& a,
                                                          const FiniteQuadraticForm& b,
                                                          const Integer& cap = 10000) {
  FormComparison out;
  if (a.order() != b.order() || invariant_factors(a.orders) != invariant_factors(b.orders)) {
    out.result = Decision::no;
    return out;
  }
  if (a.order() > cap) return out;
  std::int64_t den = FormTable::common_den({&a, &b});
  FormTable ta(a, den), tb(b, den);
  const std::size_t n = ta.ngens();
  const std::int64_t size = tb.size();

  // candidates per generator, filtered by order and q
  std::vector<std::vector<std::int64_t>> cand(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t g = ta.index_of([&] {
      IntVector c(n, 0);
      c[k] = 1;
      return c;
    }());
    std::int64_t ord = ta.gen_order(k), qv = ta.q(g);
    for (std::int64_t e = 0; e < size; ++e)
      if (tb.element_order(e) == ord && tb.q(e) == qv) cand[k].push_back(e);
    if (cand[k].empty()) {
      out.result = Decision::no;
      return out;
    }
  }
  std::vector<std::int64_t> gen_a(n);
  for (std::size_t k = 0; k < n; ++k) {
    IntVector c(n, 0);
    c[k] = 1;
    gen_a[k] = ta.index_of(c);
  }

  // search most constrained generators first
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return cand[x].size() < cand[y].size(); });

  std::vector<std::int64_t> img(n, -1);
  std::vector<std::vector<char>> member(n + 1);
  std::vector<std::vector<std::int64_t>> elems(n + 1);
  member[0].assign(static_cast<std::size_t>(size), 0);
  member[0][0] = 1;
  elems[0] = {0};

  std::function<bool(std::size_t)> search = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    std::size_t k = order[depth];
    std::int64_t ord = ta.gen_order(k);
    for (std::int64_t h : cand[k]) {
      bool ok = true;
      for (std::size_t p = 0; p < depth && ok; ++p) {
        std::size_t j = order[p];
        if (tb.b(h, img[j]) != ta.b(gen_a[k], gen_a[j])) ok = false;
      }
      if (!ok) continue;
      // <h> meets the current subgroup trivially
      std::int64_t m = h;
      for (std::int64_t t = 1; t < ord && ok; ++t) {
        if (member[depth][static_cast<std::size_t>(m)]) ok = false;
        m = tb.add(m, h);
      }
      if (!ok) continue;
      member[depth + 1] = member[depth];
      elems[depth + 1].clear();
      for (std::int64_t s : elems[depth]) {
        std::int64_t x = s;
        for (std::int64_t t = 0; t < ord; ++t) {
          elems[depth + 1].push_back(x);
          member[depth + 1][static_cast<std::size_t>(x)] = 1;
          x = tb.add(x, h);
        }
      }
      img[k] = h;
      if (search(depth + 1)) return true;
    }
    img[k] = -1;
    return false;
  };

  if (search(0)) {
    out.result = Decision::yes;
    for (std::size_t k = 0; k < n; ++k) out.images.push_back(tb.coords_of(img[k]));
  } else {
    out.result = Decision::no;
  }
  return out;
}

/// yes / no, or unknown when the groups exceed the cap.
inline Decision compare_discriminant_forms(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                                           const Integer& cap = 10000) {
  return compare_discriminant_forms_detailed(a, b, cap).result;
}

struct GenusDescriptor {
  std::size_t sig_plus = 0;
  std::size_t sig_minus = 0;
  FiniteQuadraticForm form;
};

inline GenusDescriptor genus(const Lattice& l) {
  auto [p, q] = signature(l);
  return {p, q, discriminant_group(l)};
}

inline Decision same_genus(const GenusDescriptor& a, const GenusDescriptor& b, const Integer& cap = 10000) {
  if (a.sig_plus != b.sig_plus || a.sig_minus != b.sig_minus) return Decision::no;
  return compare_discriminant_forms(a.form, b.form, cap);
}

/// Length l(A): number of invariant factors.
inline std::size_t form_length(const FiniteQuadraticForm& f) { return invariant_factors(f.orders).size(); }

/// Human-readable group structure such as "Z/2 x Z/4".
inline std::string group_string(const IntVector& orders) {
  IntVector inv = invariant_factors(orders);
  if (inv.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < inv.size(); ++i) s += (i ? " x Z/" : "Z/") + inv[i].str();
  return s;
}

}  // namespace k3lat
