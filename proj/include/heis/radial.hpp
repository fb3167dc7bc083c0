#pragma once

#include <cmath>
#include <complex>

#include "heis/point.hpp"

namespace heis {

/// Parameters of the radial horizontal curve from the origin to a unit-gauge
/// boundary point omega with |z(omega)| > 0.
struct RadialCurveParams {
  HPoint omega;
  double s;

  RadialCurveParams(HPoint w, double s_) : omega(std::move(w)), s(s_) {
    if (std::abs(gauge_norm(omega) - 1.0) > 1e-12)
      throw PreconditionError("radial curve: omega must have unit gauge norm");
    if (omega.zmod() <= 0.0)
      throw CharacteristicError("radial curve: omega lies on the t-axis");
    if (!(s > 0.0) || s > 1.0) throw PreconditionError("radial curve: s must lie in (0,1]");
  }
};

constexpr double kRadialSFloor = 1e-8;

/// gamma(s,(z,t)) = (s z e^{-i (t/|z|^2) log s}, s^2 t); gauge norm is s.
inline HPoint radial_curve(const RadialCurveParams& prm) {
  const HPoint& w = prm.omega;
  double s = std::max(prm.s, kRadialSFloor);
  double zm = w.zmod();
  double phase = -(w.t() / (zm * zm)) * std::log(s);
  double c = std::cos(phase), sn = std::sin(phase);
  int n = w.n();
  std::vector<double> out(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    out[2 * i] = s * (w.x(i) * c - w.y(i) * sn);
    out[2 * i + 1] = s * (w.x(i) * sn + w.y(i) * c);
  }
  out[2 * n] = s * s * w.t();
  return HPoint(std::move(out));
}

inline HPoint radial_curve(const HPoint& omega, double s) {
  return radial_curve(RadialCurveParams(omega, s));
}

constexpr double kCharacteristicZFloor = 1e-10;

/// Boundary point omega_x of the unit gauge sphere whose radial curve passes
/// through x: t = x_t/||x||^2, z = (x_z/||x||) e^{i (x_t/|x_z|^2) log ||x||}.
/// Undefined on the t-axis.
inline HPoint boundary_projection(const HPoint& x) {
  double s = gauge_norm(x);
  if (!(s > 0.0) || s >= 1.0 + 1e-12)
    throw PreconditionError("boundary_projection: need 0 < ||x|| <= 1");
  double zm = x.zmod();
  if (zm < kCharacteristicZFloor * std::max(1.0, s))
    throw CharacteristicError("boundary_projection: point too close to the t-axis");
  double phase = (x.t() / (zm * zm)) * std::log(s);
  double c = std::cos(phase), sn = std::sin(phase);
  int n = x.n();
  std::vector<double> out(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    out[2 * i] = (x.x(i) * c - x.y(i) * sn) / s;
    out[2 * i + 1] = (x.x(i) * sn + x.y(i) * c) / s;
  }
  out[2 * n] = x.t() / (s * s);
  return HPoint(std::move(out));
}

/// Defect of the horizontality identity t' = sum(2 y_i x_i' - 2 x_i y_i')
/// for the radial curve at parameter s, with velocities from central
/// differences at step h. O(h^2) for admissible omega.
inline double radial_horizontality_residual(const HPoint& omega, double s, double h) {
  HPoint gp = radial_curve(omega, s + h);
  HPoint gm = radial_curve(omega, s - h);
  HPoint g0 = radial_curve(omega, s);
  int n = omega.n();
  double td = (gp.t() - gm.t()) / (2.0 * h);
  double hsum = 0.0;
  for (int i = 0; i < n; ++i) {
    double xd = (gp.x(i) - gm.x(i)) / (2.0 * h);
    double yd = (gp.y(i) - gm.y(i)) / (2.0 * h);
    hsum += 2.0 * g0.y(i) * xd - 2.0 * g0.x(i) * yd;
  }
  return std::abs(td - hsum);
}

}  // namespace heis
