#pragma once

// Forward-mode dual numbers a + b*eps, eps^2 = 0, for directional derivatives.

#include <cmath>

namespace quadsym {

struct Dual {
  double v = 0.0;  // value
  double d = 0.0;  // derivative

  Dual() = default;
  Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { d = (d * o.v - v * o.d) / (o.v * o.v); v /= o.v; return *this; }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

inline Dual pow(const Dual& a, double p) {
  const double vp = std::pow(a.v, p);
  return {vp, p * std::pow(a.v, p - 1.0) * a.d};
}

inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return {s, 0.5 * a.d / s};
}

}  // namespace quadsym
