#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3lat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown for malformed input or a violated precondition.
class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive search would exceed its documented cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Decision { no, yes, unknown };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::yes: return "yes";
    case Decision::no: return "no";
    default: return "unknown";
  }
}

inline Integer numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denom(r) == 1; }

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Least nonnegative residue of a modulo m (m > 0).
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Integer floor(const Rational& r) { return floor_div(numer(r), denom(r)); }
inline Integer ceil(const Rational& r) { return -floor_div(-numer(r), denom(r)); }

/// Representative of r modulo m in [0, m).
inline Rational mod(const Rational& r, const Integer& m) {
  Rational q = r / Rational(m);
  return r - Rational(floor(q) * m);
}

/// Largest integer k with k*k <= n (n >= 0).
inline Integer isqrt(const Integer& n) {
  if (n < 0) throw LatticeError("isqrt of negative number");
  return boost::multiprecision::sqrt(n);
}

/// floor(sqrt(t)) for a nonnegative rational t.
inline Integer floor_sqrt(const Rational& t) {
  if (t < 0) throw LatticeError("floor_sqrt of negative number");
  // floor(sqrt(p/q)) = floor(sqrt(p*q)/q)
  Integer p = numer(t), q = denom(t);
  Integer s = isqrt(p * q);
  Integer k = s / q;
  while (Rational((k + 1) * (k + 1)) <= t) ++k;
  while (k > 0 && Rational(k * k) > t) --k;
  return k;
}

inline std::string to_string(const Integer& a) { return a.str(); }

/// Exact "num/den" text; integers print without a denominator.
inline std::string to_string(const Rational& r) {
  if (denom(r) == 1) return numer(r).str();
  return numer(r).str() + "/" + denom(r).str();
}

inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer d(s.substr(slash + 1));
    if (d == 0) throw LatticeError("zero denominator in '" + s + "'");
    return Rational(Integer(s.substr(0, slash)), d);
  } catch (const std::runtime_error&) {
    throw LatticeError("malformed rational '" + s + "'");
  }
}

inline std::int64_t to_int64(const Integer& a) {
  if (a > Integer(INT64_MAX) || a < Integer(INT64_MIN)) throw LatticeError("integer overflows int64");
  return static_cast<std::int64_t>(a);
}

}  // namespace k3lat
