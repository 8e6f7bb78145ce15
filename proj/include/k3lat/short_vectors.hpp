#pragma once

#include "k3lat/lattice.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace k3lat {

/// Fincke-Pohst enumeration for a positive definite Gram matrix.
/// Visits every nonzero x with bound_lo <= x^T G x <= bound, one of each pair {x, -x}.
class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const IntMatrix& g) : g_(g), n_(g.rows()) {
    // G = R^T D R with R unit upper triangular: Q(x) = sum_i d_i (x_i + sum_{j>i} r_ij x_j)^2
    RatMatrix a = to_rational(g);
    d_.assign(n_, Rational(0));
    r_ = RatMatrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Rational s = a(i, i);
      for (std::size_t k = 0; k < i; ++k) s -= r_(k, i) * r_(k, i) * d_[k];
      if (s <= 0) throw LatticeError("short vector enumeration needs a positive definite form");
      d_[i] = s;
      for (std::size_t j = i + 1; j < n_; ++j) {
        Rational t = a(i, j);
        for (std::size_t k = 0; k < i; ++k) t -= r_(k, i) * r_(k, j) * d_[k];
        r_(i, j) = t / d_[i];
      }
    }
  }

  /// Returns false from the visitor to stop early.
  void enumerate(const Integer& bound, const std::function<bool(const IntVector&, const Integer&)>& visit,
                 const Integer& bound_lo = 1) const {
    if (n_ == 0) return;
    IntVector x(n_, 0);
    std::vector<Rational> center(n_), budget(n_ + 1);
    budget[n_] = Rational(bound);
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
      if (stop) return;
      std::size_t i = level - 1;
      Rational c = 0;
      for (std::size_t j = i + 1; j < n_; ++j)
        if (x[j] != 0) c += r_(i, j) * Rational(x[j]);
      center[i] = c;
      const Rational& t = budget[i + 1];
      // integers m with d_i (m + c)^2 <= t
      Integer s = floor_sqrt(t / d_[i]);
      Integer lo = floor(-c) - s - 1, hi = ceil(-c) + s + 1;
      auto fits = [&](const Integer& m) {
        Rational y = Rational(m) + c;
        return d_[i] * y * y <= t;
      };
      while (lo <= hi && !fits(lo)) ++lo;
      while (hi >= lo && !fits(hi)) --hi;
      bool top = true;
      for (std::size_t j = i + 1; j < n_; ++j)
        if (x[j] != 0) top = false;
      // canonical sign: the last nonzero coordinate is positive
      if (top && lo < 0) lo = 0;
      for (Integer m = lo; m <= hi && !stop; ++m) {
        x[i] = m;
        Rational y = Rational(m) + c;
        budget[i] = t - d_[i] * y * y;
        if (i == 0) {
          bool zero = true;
          for (const auto& v : x)
            if (v != 0) zero = false;
          if (zero) continue;
          Rational used = Rational(bound) - budget[0];
          Integer nrm = numer(used);
          if (nrm >= bound_lo && !visit(x, nrm)) stop = true;
        } else {
          rec(i);
        }
      }
      x[i] = 0;
    };
    rec(n_);
  }

  std::vector<IntVector> vectors(const Integer& bound, const Integer& bound_lo = 1) const {
    std::vector<IntVector> out;
    enumerate(bound, [&](const IntVector& v, const Integer&) {
      out.push_back(v);
      return true;
    }, bound_lo);
    return out;
  }

 private:
  IntMatrix g_;
  std::size_t n_;
  std::vector<Rational> d_;
  RatMatrix r_;
};

/// All x (both signs) with x^T G x == norm for positive definite G, enumerated on an LLL basis.
inline std::vector<IntVector> vectors_of_norm(const IntMatrix& g, const Integer& norm) {
  LllResult red = lll_gram(g);
  ShortVectorEnumerator en(red.gram);
  std::vector<IntVector> out;
  IntMatrix tt = red.transform.transpose();
  en.enumerate(norm, [&](const IntVector& y, const Integer& v) {
    if (v == norm) {
      IntVector x = tt.apply(y);
      out.push_back(x);
      IntVector m = x;
      for (auto& c : m) c = -c;
      out.push_back(m);
    }
    return true;
  }, norm);
  std::sort(out.begin(), out.end());
  return out;
}

/// Counts of vectors (both signs) by norm up to bound.
inline std::vector<std::size_t> norm_profile(const IntMatrix& g, const Integer& bound) {
  LllResult red = lll_gram(g);
  ShortVectorEnumerator en(red.gram);
  std::vector<std::size_t> counts(static_cast<std::size_t>(bound) + 1, 0);
  en.enumerate(bound, [&](const IntVector&, const Integer& v) {
    counts[static_cast<std::size_t>(v)] += 2;
    return true;
  });
  return counts;
}

}  // namespace k3lat
