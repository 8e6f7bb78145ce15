#pragma once

#include "k3lat/matrix.hpp"

#include <optional>

namespace k3lat {

/// U * A * V = diag(d_0, d_1, ...), d_i | d_{i+1}, U and V unimodular.
struct SmithForm {
  IntVector diagonal;  // length min(rows, cols); trailing zeros for rank deficiency
  IntMatrix U;
  IntMatrix V;
  std::size_t rank = 0;

  /// Invariant factors greater than one.
  IntVector torsion() const {
    IntVector t;
    for (const auto& d : diagonal)
      if (d > 1) t.push_back(d);
    return t;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a;
  IntMatrix u = IntMatrix::identity(m), v = IntMatrix::identity(n);
  const std::size_t lim = std::min(m, n);
  std::size_t t = 0;
  for (; t < lim; ++t) {
    for (;;) {
      // minimal nonzero |entry| in the trailing block
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          Integer av = abs(d(i, j));
          if (!piv || av < best) {
            best = av;
            piv = {i, j};
            if (best == 1) break;
          }
        }
      if (!piv) {
        SmithForm out;
        out.rank = t;
        for (std::size_t i = 0; i < lim; ++i) out.diagonal.push_back(i < t ? d(i, i) : Integer(0));
        out.U = std::move(u);
        out.V = std::move(v);
        return out;
      }
      d.swap_rows(t, piv->first);
      u.swap_rows(t, piv->first);
      d.swap_cols(t, piv->second);
      v.swap_cols(t, piv->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q = floor_div(d(i, t), d(t, t));
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q = floor_div(d(t, j), d(t, t));
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility of the remaining block by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < m; ++j) u(t, j) = -u(t, j);
    }
  }
  SmithForm out;
  out.rank = lim;
  for (std::size_t i = 0; i < lim; ++i) out.diagonal.push_back(d(i, i));
  out.U = std::move(u);
  out.V = std::move(v);
  return out;
}

/// Row Hermite normal form; returns only the nonzero rows (a basis of the row span).
inline IntMatrix hermite_rows(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    // Euclid down the column until a single nonzero entry remains at row r
    for (;;) {
      std::optional<std::size_t> piv;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (!piv || abs(h(i, c)) < abs(h(*piv, c)))) piv = i;
      if (!piv) break;
      h.swap_rows(r, *piv);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        h.add_row(i, r, -floor_div(h(i, c), h(r, c)));
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0)
      for (std::size_t j = 0; j < n; ++j) h(r, j) = -h(r, j);
    for (std::size_t i = 0; i < r; ++i) h.add_row(i, r, -floor_div(h(i, c), h(r, c)));
    ++r;
  }
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = h(i, j);
  return out;
}

/// Row HNF of rational rows: scale to integers, reduce, scale back.
inline RatMatrix hermite_rows(const RatMatrix& a) {
  Integer den = 1;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) den = lcm(den, denom(a(i, j)));
  IntMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = numer(a(i, j) * Rational(den));
  IntMatrix h = hermite_rows(s);
  RatMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = Rational(h(i, j), den);
  return out;
}

/// Basis (as rows) of the integer kernel {x : A x = 0}; always primitive.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  const std::size_t n = a.cols();
  IntMatrix k(n - s.rank, n);
  for (std::size_t i = s.rank; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - s.rank, j) = s.V(j, i);
  return hermite_rows(k);
}

/// Exact LLL on a positive definite Gram matrix.
struct LllResult {
  IntMatrix transform;  // rows express the reduced basis in the old basis
  IntMatrix gram;       // transform * G * transform^T
};

inline LllResult lll_gram(const IntMatrix& g, const Rational& delta = Rational(3, 4)) {
  const std::size_t n = g.rows();
  IntMatrix t = IntMatrix::identity(n);
  IntMatrix gg = g;
  if (n <= 1) return {t, gg};
  RatMatrix mu(n, n);
  RatVector b(n);

  auto reduce = [&](std::size_t k, std::size_t l) {
    Rational half(1, 2);
    if (abs(numer(mu(k, l))) * 2 <= denom(mu(k, l))) return;
    Integer q = floor(mu(k, l) + half);
    t.add_row(k, l, -q);
    gg.add_row(k, l, -q);
    gg.add_col(k, l, -q);
    mu(k, l) -= Rational(q);
    for (std::size_t i = 0; i < l; ++i) mu(k, i) -= Rational(q) * mu(l, i);
  };

  b[0] = Rational(gg(0, 0));
  std::size_t k = 1, kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j < k; ++j) {
        Rational s(gg(k, j));
        for (std::size_t i = 0; i < j; ++i) s -= mu(j, i) * mu(k, i) * b[i];
        mu(k, j) = s / b[j];
      }
      Rational s(gg(k, k));
      for (std::size_t j = 0; j < k; ++j) s -= mu(k, j) * mu(k, j) * b[j];
      b[k] = s;
      if (b[k] <= 0) throw LatticeError("LLL input is not positive definite");
    }
    reduce(k, k - 1);
    if (b[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * b[k - 1]) {
      t.swap_rows(k, k - 1);
      gg.swap_rows(k, k - 1);
      gg.swap_cols(k, k - 1);
      for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu(k, j), mu(k - 1, j));
      Rational m = mu(k, k - 1);
      Rational bb = b[k] + m * m * b[k - 1];
      mu(k, k - 1) = m * b[k - 1] / bb;
      b[k] = b[k - 1] * b[k] / bb;
      b[k - 1] = bb;
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        Rational tt = mu(i, k);
        mu(i, k) = mu(i, k - 1) - m * tt;
        mu(i, k - 1) = tt + mu(k, k - 1) * mu(i, k);
      }
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }
  return {t, gg};
}

}  // namespace k3lat
