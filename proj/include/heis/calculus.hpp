#pragma once

#include <algorithm>
#include <functional>

#include "heis/point.hpp"

namespace heis {

using ScalarFn = std::function<double(const HPoint&)>;

/// Default finite-difference step: balances truncation against rounding
/// at double precision, scaled by the point's gauge size.
inline double default_step(const HPoint& p) { return 1e-4 * std::max(1.0, gauge_norm(p)); }

inline HPoint offset(const HPoint& p, int coord, double h) {
  std::vector<double> c(p.coords());
  c[coord] += h;
  return HPoint(std::move(c));
}

/// Central difference of f at p along the Euclidean direction `dir`.
inline double directional_diff(const ScalarFn& f, const HPoint& p,
                               const std::vector<double>& dir, double h) {
  std::vector<double> cp(p.coords()), cm(p.coords());
  for (std::size_t k = 0; k < cp.size(); ++k) {
    cp[k] += h * dir[k];
    cm[k] -= h * dir[k];
  }
  return (f(HPoint(std::move(cp))) - f(HPoint(std::move(cm)))) / (2.0 * h);
}

/// Frame coefficients (X_i f, Y_i f)(p) by central differences along the
/// frozen frame directions; O(h^2).
inline HVector horizontal_gradient(const ScalarFn& f, const HPoint& p, double h = 0.0) {
  if (h <= 0.0) h = default_step(p);
  auto rows = frame(p);
  int n = p.n();
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = directional_diff(f, p, rows[2 * i], h);
    b[i] = directional_diff(f, p, rows[2 * i + 1], h);
  }
  return HVector(std::move(a), std::move(b), p);
}

/// Sub-Laplacian via the expanded Euclidean form
///   sum_i [dxx_i + dyy_i + 4 y_i dx_i dt - 4 x_i dy_i dt] + 4|z|^2 dtt,
/// centered second differences and 4-point cross stencils; O(h^2).
inline double sub_laplacian_apply(const ScalarFn& f, const HPoint& p, double h = 0.0) {
  if (h <= 0.0) h = default_step(p);
  int n = p.n();
  int it = 2 * n;  // index of the t coordinate
  double f0 = f(p);
  double acc = 0.0;
  auto second = [&](int k) {
    return (f(offset(p, k, h)) - 2.0 * f0 + f(offset(p, k, -h))) / (h * h);
  };
  auto cross_t = [&](int k) {
    // d^2 f / (d coord_k d t), centered 4-point stencil
    HPoint pp = offset(offset(p, k, h), it, h);
    HPoint pm = offset(offset(p, k, h), it, -h);
    HPoint mp = offset(offset(p, k, -h), it, h);
    HPoint mm = offset(offset(p, k, -h), it, -h);
    return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
  };
  double z2 = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += second(2 * i) + second(2 * i + 1);
    acc += 4.0 * p.y(i) * cross_t(2 * i);
    acc -= 4.0 * p.x(i) * cross_t(2 * i + 1);
    z2 += p.x(i) * p.x(i) + p.y(i) * p.y(i);
  }
  acc += 4.0 * z2 * second(it);
  return acc;
}

}  // namespace heis
