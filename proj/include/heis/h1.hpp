#pragma once

#include <cmath>

#include "heis/point.hpp"

namespace heis::h1 {

/// Flat point of the first Heisenberg group; the allocation-free fast path
/// used by samplers, walkers and distance queries.
struct P3 {
  double x = 0, y = 0, t = 0;
};

inline P3 mul(P3 a, P3 b) { return {a.x + b.x, a.y + b.y, a.t + b.t + 2.0 * (a.y * b.x - a.x * b.y)}; }
inline P3 inv(P3 a) { return {-a.x, -a.y, -a.t}; }
inline P3 dil(double r, P3 a) { return {r * a.x, r * a.y, r * r * a.t}; }

inline double zmod2(P3 a) { return a.x * a.x + a.y * a.y; }
inline double zmod(P3 a) { return std::sqrt(zmod2(a)); }

inline double gauge(P3 a) {
  double z2 = zmod2(a);
  return std::sqrt(std::sqrt(z2 * z2 + a.t * a.t));
}

inline double gauge4(P3 a) {
  double z2 = zmod2(a);
  return z2 * z2 + a.t * a.t;
}

inline double dist(P3 a, P3 b) { return gauge(mul(inv(b), a)); }

inline P3 from_hpoint(const HPoint& p) {
  if (p.n() != 1) throw DimensionError("expected a point of H^1");
  return {p.x(0), p.y(0), p.t()};
}

inline HPoint to_hpoint(P3 p) { return HPoint::h1(p.x, p.y, p.t); }

}  // namespace heis::h1
