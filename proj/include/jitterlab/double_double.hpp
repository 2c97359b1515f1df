#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace jitterlab {

// Unevaluated sum of two doubles, |lo| <= ulp(hi)/2. Gives ~31 decimal
// digits, enough headroom for the alternating sums in the distribution
// formulas up to the configured hop limits.
//
// Error-free transforms follow Dekker (1971) and Shewchuk (1997);
// two_prod uses std::fma, which is exact whether or not the hardware
// has a fused multiply-add.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace detail {

inline DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double e = (a - (s - v)) + (b - v);
  return {s, e};
}

// requires |a| >= |b|
inline DoubleDouble quick_two_sum(double a, double b) {
  double s = a + b;
  double e = b - (s - a);
  return {s, e};
}

inline DoubleDouble two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

}  // namespace detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = detail::two_sum(a.hi, b.hi);
  double e = s.lo + a.lo + b.lo;
  return detail::quick_two_sum(s.hi, e);
}

inline DoubleDouble operator+(DoubleDouble a, double b) {
  DoubleDouble s = detail::two_sum(a.hi, b);
  double e = s.lo + a.lo;
  return detail::quick_two_sum(s.hi, e);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
inline DoubleDouble operator-(DoubleDouble a, double b) { return a + (-b); }
inline DoubleDouble operator-(double a, DoubleDouble b) { return (-b) + a; }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = detail::two_prod(a.hi, b.hi);
  double e = p.lo + a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, e);
}

inline DoubleDouble operator*(DoubleDouble a, double b) {
  DoubleDouble p = detail::two_prod(a.hi, b);
  double e = p.lo + a.lo * b;
  return detail::quick_two_sum(p.hi, e);
}

inline DoubleDouble operator*(double a, DoubleDouble b) { return b * a; }

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  // one Newton step on the double quotient
  double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  DoubleDouble q = detail::quick_two_sum(q1, q2);
  return q + q3;
}

inline DoubleDouble operator/(DoubleDouble a, double b) { return a / DoubleDouble(b); }
inline DoubleDouble operator/(double a, DoubleDouble b) { return DoubleDouble(a) / b; }

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator+=(DoubleDouble& a, double b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator*=(DoubleDouble& a, double b) { return a = a * b; }

inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }

inline DoubleDouble dd_abs(DoubleDouble a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// a^e by binary exponentiation; e == 0 yields exactly 1.
inline DoubleDouble dd_pow(DoubleDouble a, unsigned e) {
  DoubleDouble result(1.0);
  DoubleDouble base = a;
  while (e != 0) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return result;
}

inline DoubleDouble dd_factorial(unsigned n) {
  DoubleDouble f(1.0);
  for (unsigned k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

// unit roundoff of the double-double format
inline constexpr double kDoubleDoubleEps = 4.93038065763132e-32;  // 2^-104

}  // namespace jitterlab
