#pragma once

#include <cmath>

#include "heis/h1.hpp"

namespace heis::detail {

/// Unit gauge sphere {|z|^4 + t^2 = 1} as a surface of revolution:
/// P(phi, theta) = (rho(phi) cos theta, rho(phi) sin theta, sin phi),
/// rho(phi) = cos(phi)^{1/2}, phi in [-pi/2, pi/2].
inline h1::P3 sphere_point(double phi, double theta) {
  double rho = std::sqrt(std::sqrt(std::max(0.0, std::cos(phi))));
  rho *= rho;  // cos(phi)^{1/2}
  return {rho * std::cos(theta), rho * std::sin(theta), std::sin(phi)};
}

/// Euclidean area element |P_phi x P_theta| = sqrt(sin^2(phi)/4 + cos^3(phi)).
/// Bounded on the whole sphere (value 1/2 at the poles).
inline double sphere_area_element(double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  return std::sqrt(0.25 * s * s + c * c * c);
}

/// Density of the 3-regular metric surface measure against the Euclidean
/// area element: the horizontal component of the Euclidean unit normal.
/// Vanishes exactly at the characteristic poles.
inline double horizontal_normal_density(const h1::P3& q) {
  double z2 = h1::zmod2(q);
  double gx = 4.0 * z2 * q.x, gy = 4.0 * z2 * q.y, gt = 2.0 * q.t;
  double g = std::sqrt(gx * gx + gy * gy + gt * gt);
  if (g == 0.0) return 0.0;
  double nx = gx / g, ny = gy / g, nt = gt / g;
  double hx = nx + 2.0 * q.y * nt;  // <N, X>
  double hy = ny - 2.0 * q.x * nt;  // <N, Y>
  return std::sqrt(hx * hx + hy * hy);
}

/// Parameters (phi, theta) of the radial-curve boundary projection of a
/// point w inside the unit ball (gauge s = |w|, |z(w)| > 0).
inline void radial_projection_params(const h1::P3& w, double* phi, double* theta) {
  double s = h1::gauge(w);
  double t_b = w.t / (s * s);
  double zm2 = h1::zmod2(w);
  double rot = (w.t / zm2) * std::log(s);
  *phi = std::asin(std::clamp(t_b, -1.0, 1.0));
  *theta = std::atan2(w.y, w.x) + rot;
}

}  // namespace heis::detail
