#pragma once

#include "k3lat/roots.hpp"

#include <array>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace k3lat {

/// Bivariate polynomial with exact rational coefficients, keyed by (deg x, deg y).
class Poly {
 public:
  using Key = std::pair<int, int>;

  Poly() = default;
  static Poly monomial(const Rational& c, int i, int j) {
    Poly p;
    p.add(c, i, j);
    return p;
  }

  void add(const Rational& c, int i, int j) {
    if (c == 0) return;
    auto& v = t_[{i, j}];
    v += c;
    if (v == 0) t_.erase({i, j});
  }
  const std::map<Key, Rational>& terms() const { return t_; }
  bool zero() const { return t_.empty(); }
  Rational coeff(int i, int j) const {
    auto it = t_.find({i, j});
    return it == t_.end() ? Rational(0) : it->second;
  }

  /// Lowest total degree of a term (order at the origin); -1 for the zero polynomial.
  int order() const {
    int m = -1;
    for (const auto& [k, c] : t_)
      if (m < 0 || k.first + k.second < m) m = k.first + k.second;
    return m;
  }
  int max_degree() const {
    int m = -1;
    for (const auto& [k, c] : t_) m = std::max(m, k.first + k.second);
    return m;
  }

  Poly operator*(const Poly& o) const {
    Poly p;
    for (const auto& [a, ca] : t_)
      for (const auto& [b, cb] : o.t_) p.add(ca * cb, a.first + b.first, a.second + b.second);
    return p;
  }
  Poly operator+(const Poly& o) const {
    Poly p = *this;
    for (const auto& [k, c] : o.t_) p.add(c, k.first, k.second);
    return p;
  }

  /// (x, y) -> (x, x y) divided by x^k.
  Poly chart_x(int k) const {
    Poly p;
    for (const auto& [key, c] : t_) {
      int e = key.first + key.second - k;
      if (e < 0) throw LatticeError("chart substitution is not divisible by the exceptional power");
      p.add(c, e, key.second);
    }
    return p;
  }
  /// (x, y) -> (x y, y) divided by y^k.
  Poly chart_y(int k) const {
    Poly p;
    for (const auto& [key, c] : t_) {
      int e = key.first + key.second - k;
      if (e < 0) throw LatticeError("chart substitution is not divisible by the exceptional power");
      p.add(c, key.first, e);
    }
    return p;
  }
  /// y -> y + a.
  Poly shift_y(const Rational& a) const {
    Poly p;
    for (const auto& [key, c] : t_) {
      // (y + a)^j = sum binom(j, s) a^(j-s) y^s
      Integer binom = 1;
      Rational apow = 1;
      std::vector<Rational> pw(static_cast<std::size_t>(key.second) + 1);
      for (int s = 0; s <= key.second; ++s) {
        pw[static_cast<std::size_t>(s)] = apow;
        apow *= a;
      }
      for (int s = 0; s <= key.second; ++s) {
        p.add(c * Rational(binom) * pw[static_cast<std::size_t>(key.second - s)], key.first, s);
        binom = binom * (key.second - s) / (s + 1);
      }
    }
    return p;
  }
  void truncate(int cap) {
    for (auto it = t_.begin(); it != t_.end();)
      if (it->first.first + it->first.second > cap)
        it = t_.erase(it);
      else
        ++it;
  }
  /// Restriction to x = 0 as coefficients of y^j.
  std::vector<Rational> on_x_axis() const { return restrict(true); }
  std::vector<Rational> on_y_axis() const { return restrict(false); }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest total degree last
    std::vector<std::pair<Key, Rational>> v(t_.begin(), t_.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
      if (da != db) return da < db;
      return a.first.first > b.first.first;
    });
    for (const auto& [k, c] : v) {
      Rational cc = c;
      if (!first) os << (cc < 0 ? " - " : " + ");
      else if (cc < 0) os << "-";
      if (cc < 0) cc = -cc;
      bool unit = cc == 1 && (k.first || k.second);
      if (!unit) os << to_string(cc);
      auto var = [&](const char* name, int e) {
        if (e == 0) return;
        os << name;
        if (e > 1) os << "^" << e;
      };
      var("x", k.first);
      var("y", k.second);
      first = false;
    }
    return os.str();
  }

 private:
  std::vector<Rational> restrict(bool x_zero) const {
    std::vector<Rational> out;
    for (const auto& [k, c] : t_) {
      if ((x_zero ? k.first : k.second) != 0) continue;
      std::size_t d = static_cast<std::size_t>(x_zero ? k.second : k.first);
      if (out.size() <= d) out.resize(d + 1, Rational(0));
      out[d] += c;
    }
    return out;
  }
  std::map<Key, Rational> t_;
};

namespace detail {

// Univariate helpers, coefficients low to high.
inline void trim(std::vector<Rational>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const std::vector<Rational>& p, const Rational& a) {
  Rational s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * a + *it;
  return s;
}

// Divide by (y - a), assuming a is a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& a) {
  std::vector<Rational> q(p.size() - 1);
  Rational carry = 0;
  for (std::size_t i = p.size() - 1; i > 0; --i) {
    carry = p[i] + carry * a;
    q[i - 1] = carry;
  }
  return q;
}

inline std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> d;
  for (Integer k = 1; k * k <= n; ++k)
    if (n % k == 0) {
      d.push_back(k);
      if (k * k != n) d.push_back(n / k);
    }
  return d;
}

inline std::vector<Rational> poly_mod(std::vector<Rational> a, const std::vector<Rational>& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t s = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline std::size_t poly_gcd_degree(std::vector<Rational> a, std::vector<Rational> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

struct RootSplit {
  std::vector<std::pair<Rational, int>> rational;  // root, multiplicity
  std::size_t simple_irrational = 0;
};

inline RootSplit split_roots(std::vector<Rational> p) {
  trim(p);
  RootSplit out;
  if (p.size() <= 1) return out;
  Integer den = 1;
  for (const auto& c : p) den = lcm(den, denom(c));
  for (;;) {
    trim(p);
    if (p.size() <= 1) break;
    std::optional<Rational> found;
    if (p[0] == 0) {
      found = Rational(0);
    } else {
      std::vector<Integer> ip;
      Integer d = 1;
      for (const auto& c : p) d = lcm(d, denom(c));
      for (const auto& c : p) ip.push_back(numer(c * Rational(d)));
      for (const auto& num : divisors(ip.front())) {
        for (const auto& dd : divisors(ip.back())) {
          for (int sgn : {1, -1}) {
            Rational a(num * sgn, dd);
            if (eval(p, a) == 0) found = a;
            if (found) break;
          }
          if (found) break;
        }
        if (found) break;
      }
    }
    if (!found) break;
    p = deflate(p, *found);
    bool merged = false;
    for (auto& r : out.rational)
      if (r.first == *found) {
        ++r.second;
        merged = true;
      }
    if (!merged) out.rational.emplace_back(*found, 1);
  }
  trim(p);
  if (p.size() > 1) {
    std::vector<Rational> dp;
    for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * Rational(static_cast<long>(i)));
    if (poly_gcd_degree(p, dp) != 0) throw LatticeError("repeated irrational tangency is outside the simulator's range");
    out.simple_irrational = p.size() - 1;
  }
  std::sort(out.rational.begin(), out.rational.end());
  return out;
}

inline int order_of(const std::vector<Rational>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) return static_cast<int>(i);
  return -1;  // identically zero
}

}  // namespace detail

struct CurveGerm {
  Poly poly;
  int origin_mult = 0;
};

/// Normal forms x^2+y^(n+1), y(x^2+y^(n-2)), x^3+y^4, x(x^2+y^3), x^3+y^5.
inline CurveGerm ade_germ(const AdeType& t) {
  if (t.n < 1 || t.n > 30) throw LatticeError("germ index out of range");
  Poly p;
  switch (t.family) {
    case 'A':
      p.add(1, 2, 0);
      p.add(1, 0, t.n + 1);
      break;
    case 'D':
      if (t.n < 4) throw LatticeError("D_n needs n >= 4");
      p.add(1, 2, 1);
      p.add(1, 0, t.n - 1);
      break;
    case 'E':
      if (t.n == 6) {
        p.add(1, 3, 0);
        p.add(1, 0, 4);
      } else if (t.n == 7) {
        p.add(1, 3, 0);
        p.add(1, 1, 3);
      } else if (t.n == 8) {
        p.add(1, 3, 0);
        p.add(1, 0, 5);
      } else {
        throw LatticeError("E_n needs n in {6, 7, 8}");
      }
      break;
    default: throw LatticeError("unknown ADE family");
  }
  return {p, p.order()};
}

inline CurveGerm ade_germ(char family, int n) { return ade_germ(AdeType{family, n}); }

/// A point on the blown-up plane with the local total branch curve and the exceptional axes through it.
struct GermPoint {
  Poly branch;         // includes the factors of branch exceptional axes
  int axis_x = -1;     // exceptional curve {x = 0}
  int axis_y = -1;     // exceptional curve {y = 0}
};

struct ExceptionalCurve {
  int self = -1;
  bool branch = false;
  int created_at = 0;  // blowup step
};

struct ResolutionState {
  std::vector<ExceptionalCurve> curves;
  std::vector<GermPoint> pending;   // points still to be examined
  std::vector<GermPoint> finished;  // smooth or off-branch points
  int steps = 0;
  int degree_cap = 0;
};

inline ResolutionState initial_state(const CurveGerm& g, int degree_cap) {
  ResolutionState s;
  s.degree_cap = degree_cap;
  s.pending.push_back({g.poly, -1, -1});
  return s;
}

/// Examine the next pending point; blow it up if the branch curve is singular there.
inline ResolutionState blowup_step(ResolutionState s) {
  if (s.pending.empty()) return s;
  GermPoint p = s.pending.back();
  s.pending.pop_back();
  const int mu = p.branch.order();
  if (mu == 0 || mu == 1) {
    s.finished.push_back(p);
    return s;
  }
  if (mu < 0) throw LatticeError("nonreduced strict transform");
  ++s.steps;
  const int e = static_cast<int>(s.curves.size());
  const bool branch = mu % 2 == 1;
  s.curves.push_back({-1, branch, s.steps});
  for (int c : {p.axis_x, p.axis_y})
    if (c >= 0) s.curves[static_cast<std::size_t>(c)].self -= 1;

  Poly efac = branch ? Poly::monomial(1, 1, 0) : Poly::monomial(1, 0, 0);
  // chart (x, xy): E = {x = 0}
  Poly strict1 = p.branch.chart_x(mu);
  strict1.truncate(s.degree_cap);
  auto split = detail::split_roots(strict1.on_x_axis());
  bool origin_seen = false;
  for (const auto& root : split.rational) {
    const Rational& a = root.first;
    GermPoint q;
    if (a == 0) {
      q.branch = efac * strict1;
      q.axis_y = p.axis_y;
      origin_seen = true;
    } else {
      q.branch = efac * strict1.shift_y(a);
    }
    q.branch.truncate(s.degree_cap);
    q.axis_x = e;
    s.pending.push_back(q);
  }
  // simple irrational roots: smooth transverse crossing, local model x^branch * y
  for (std::size_t k = 0; k < split.simple_irrational; ++k)
    s.pending.push_back({efac * Poly::monomial(1, 0, 1), e, -1});
  if (!origin_seen && p.axis_y >= 0) s.pending.push_back({efac, e, p.axis_y});
  // chart (xy, y): E = {y = 0}, only its origin is new
  Poly strict2 = p.branch.chart_y(mu);
  strict2.truncate(s.degree_cap);
  Poly b2 = (branch ? Poly::monomial(1, 0, 1) : Poly::monomial(1, 0, 0)) * strict2;
  if (strict2.coeff(0, 0) == 0 || p.axis_x >= 0) s.pending.push_back({b2, p.axis_x, e});
  return s;
}

struct DualGraphNode {
  std::string name;
  int self = -2;
  int below = 0;  // downstairs curve
  int sheet = 0;  // 0 single, 1/2 for split pairs
};

struct DualGraph {
  std::vector<DualGraphNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  IntMatrix cartan() const {
    const std::size_t n = nodes.size();
    IntMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) c(i, i) = -nodes[i].self;
    for (auto [a, b] : edges) {
      c(a, b) -= 1;
      c(b, a) -= 1;
    }
    return c;
  }
};

struct ResolutionResult {
  AdeType type;
  DualGraph graph;                    // upstairs, nodes in Bourbaki order of the detected type
  std::vector<std::size_t> iota;      // covering involution on the ordered nodes
  std::string iota_kind;              // "identity" or "flip"
  int m = 0;                          // branch exceptional curves downstairs
  int blowups = 0;
  std::vector<ExceptionalCurve> downstairs;
  bool parity_ok = true;
};

/// Iterated blowups of the branch germ and the combinatorial lift to the double cover.
inline ResolutionResult resolve(const AdeType& t) {
  CurveGerm g = ade_germ(t);
  ResolutionState s = initial_state(g, 2 * t.n + 4);
  const int cap = 4 * t.n;
  while (!s.pending.empty()) {
    s = blowup_step(std::move(s));
    if (s.steps > cap) throw CapExceeded("resolution exceeded the blowup cap");
  }
  ResolutionResult res;
  res.blowups = s.steps;
  res.downstairs = s.curves;
  const std::size_t nc = s.curves.size();

  // intersection data with the branch divisor, per curve
  std::vector<int> odd(nc, 0), even_sum(nc, 0), branch_dot(nc, 0);
  struct Meet {
    int a, b;
    bool on_branch;
  };
  std::vector<Meet> meets;
  for (const auto& q : s.finished) {
    bool on = q.branch.coeff(0, 0) == 0;
    for (int side = 0; side < 2; ++side) {
      int c = side == 0 ? q.axis_x : q.axis_y;
      if (c < 0 || !on) continue;
      const auto& cv = s.curves[static_cast<std::size_t>(c)];
      std::vector<Rational> r = side == 0 ? q.branch.on_x_axis() : q.branch.on_y_axis();
      int m;
      if (cv.branch) {
        // divide out the axis factor first
        Poly div;
        for (const auto& [k, cc] : q.branch.terms()) {
          if (side == 0) {
            if (k.first == 0) throw LatticeError("branch axis factor missing");
            div.add(cc, k.first - 1, k.second);
          } else {
            if (k.second == 0) throw LatticeError("branch axis factor missing");
            div.add(cc, k.first, k.second - 1);
          }
        }
        m = detail::order_of(side == 0 ? div.on_x_axis() : div.on_y_axis());
        if (m < 0) throw LatticeError("branch divisor is not reduced along an exceptional curve");
        branch_dot[static_cast<std::size_t>(c)] += m;
      } else {
        m = detail::order_of(r);
        if (m < 0) throw LatticeError("exceptional curve inside the strict transform");
        if (m % 2) ++odd[static_cast<std::size_t>(c)];
        else even_sum[static_cast<std::size_t>(c)] += m;
        branch_dot[static_cast<std::size_t>(c)] += m;
      }
    }
    if (q.axis_x >= 0 && q.axis_y >= 0) meets.push_back({q.axis_x, q.axis_y, on});
  }
  for (std::size_t c = 0; c < nc; ++c) {
    int total = branch_dot[c] + (s.curves[c].branch ? s.curves[c].self : 0);
    if (total % 2 != 0) res.parity_ok = false;
    if (s.curves[c].branch) ++res.m;
  }
  if (!res.parity_ok) throw LatticeError("branch divisor lost 2-divisibility");

  // lift
  DualGraph raw;
  std::vector<std::array<int, 2>> up(nc, {-1, -1});
  std::vector<std::pair<std::size_t, std::size_t>> swaps;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& cv = s.curves[c];
    std::string base = "E" + std::to_string(c + 1);
    if (cv.branch) {
      if (cv.self % 2) throw LatticeError("odd self-intersection on a branch curve");
      up[c][0] = static_cast<int>(raw.nodes.size());
      raw.nodes.push_back({base, cv.self / 2, static_cast<int>(c), 0});
    } else if (odd[c] == 2) {
      up[c][0] = static_cast<int>(raw.nodes.size());
      raw.nodes.push_back({base, 2 * cv.self, static_cast<int>(c), 0});
    } else if (odd[c] == 0) {
      int k = even_sum[c] / 2;
      up[c][0] = static_cast<int>(raw.nodes.size());
      raw.nodes.push_back({base + "'", cv.self - k, static_cast<int>(c), 1});
      up[c][1] = static_cast<int>(raw.nodes.size());
      raw.nodes.push_back({base + "''", cv.self - k, static_cast<int>(c), 2});
      for (int i = 0; i < k; ++i) raw.edges.emplace_back(up[c][0], up[c][1]);
      swaps.emplace_back(up[c][0], up[c][1]);
    } else {
      throw LatticeError("exceptional curve meets the branch locus in an odd number of points other than 2");
    }
  }
  for (const auto& mt : meets) {
    const auto& ua = up[static_cast<std::size_t>(mt.a)];
    const auto& ub = up[static_cast<std::size_t>(mt.b)];
    {
      if (mt.on_branch) {
        if (ua[1] >= 0 || ub[1] >= 0) throw LatticeError("split curve through a branch point");
        raw.edges.emplace_back(ua[0], ub[0]);
      } else if (ua[1] >= 0 && ub[1] >= 0) {
        raw.edges.emplace_back(ua[0], ub[0]);
        raw.edges.emplace_back(ua[1], ub[1]);
      } else if (ua[1] >= 0 || ub[1] >= 0) {
        const auto& split = ua[1] >= 0 ? ua : ub;
        int single = ua[1] >= 0 ? ub[0] : ua[0];
        raw.edges.emplace_back(split[0], single);
        raw.edges.emplace_back(split[1], single);
      } else {
        raw.edges.emplace_back(ua[0], ub[0]);
        raw.edges.emplace_back(ua[0], ub[0]);
      }
    }
  }
  for (const auto& nd : raw.nodes)
    if (nd.self != -2) throw LatticeError("lifted curve " + nd.name + " has self-intersection " + std::to_string(nd.self));

  const std::size_t n = raw.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : raw.edges) {
      if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second)
        throw LatticeError("lifted configuration has a multiple edge");
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  auto [type, order] = detail::order_component(all, adj);
  if (order.size() != n) throw LatticeError("lifted configuration is disconnected");
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  for (auto v : order) res.graph.nodes.push_back(raw.nodes[v]);
  for (auto [a, b] : raw.edges) res.graph.edges.emplace_back(std::min(pos[a], pos[b]), std::max(pos[a], pos[b]));
  std::sort(res.graph.edges.begin(), res.graph.edges.end());
  res.type = type;
  if (res.graph.cartan() != cartan_matrix(type)) throw LatticeError("dual graph does not match the catalog Cartan matrix");
  res.iota.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.iota[i] = i;
  for (auto [a, b] : swaps) {
    res.iota[pos[a]] = pos[b];
    res.iota[pos[b]] = pos[a];
  }
  res.iota_kind = is_identity(res.iota) ? "identity" : "flip";
  return res;
}

inline ResolutionResult resolve(char family, int n) { return resolve(AdeType{family, n}); }

inline std::string to_dot(const ResolutionResult& r) {
  std::ostringstream os;
  os << "graph " << r.type.name() << " {\n";
  for (std::size_t i = 0; i < r.graph.nodes.size(); ++i)
    os << "  n" << i + 1 << " [label=\"" << r.graph.nodes[i].name << " (" << r.graph.nodes[i].self << ")\"];\n";
  for (auto [a, b] : r.graph.edges) os << "  n" << a + 1 << " -- n" << b + 1 << ";\n";
  for (std::size_t i = 0; i < r.iota.size(); ++i)
    if (r.iota[i] > i) os << "  n" << i + 1 << " -- n" << r.iota[i] + 1 << " [style=dashed, constraint=false];\n";
  os << "}\n";
  return os.str();
}

}  // namespace k3lat
