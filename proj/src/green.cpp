#include "heis/green.hpp"

#include <cmath>
#include <mutex>

namespace heis {

using h1::P3;

double calibrate_cQ(int resolution) {
  // weak identity with a radial cutoff eta: for Gamma_c = c ||x||^{-2},
  //   integral <grad_H Gamma_c, grad_H eta> dx = eta(0) = 1,
  // so c = 1 / (-4 pi  integral eta'(s) rho^3 s^{-5} drho dt) over the
  // annulus r1 < s < r2 (axially symmetric reduction, s = (rho^4+t^2)^{1/4}).
  const double r1 = 0.5, r2 = 1.0;
  auto etap = [&](double s) {
    if (s <= r1 || s >= r2) return 0.0;
    double u = (s - r1) / (r2 - r1);
    return -(6.0 * u - 6.0 * u * u) / (r2 - r1);  // smoothstep ramp derivative
  };
  const int n = resolution;
  const double rmax = r2, tmax = r2 * r2;
  const double dr = rmax / n, dt = 2.0 * tmax / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double rho = (i + 0.5) * dr;
    double rho3 = rho * rho * rho;
    for (int j = 0; j < n; ++j) {
      double t = -tmax + (j + 0.5) * dt;
      double s = std::pow(rho3 * rho + t * t, 0.25);
      double e = etap(s);
      if (e == 0.0) continue;
      acc += -e * rho3 / std::pow(s, 5.0);
    }
  }
  double flux = 4.0 * M_PI * acc * dr * dt;
  return 1.0 / flux;
}

double fundamental_constant() {
  static std::once_flag flag;
  static double value = 0.0;
  std::call_once(flag, [] { value = calibrate_cQ(); });
  return value;
}

double fundamental_solution(const P3& p, const P3& q, double c_q) {
  double d = h1::dist(p, q);
  if (d == 0.0) throw PoleError("fundamental_solution: evaluation at the pole");
  return c_q / (d * d);
}

double fundamental_solution(const HPoint& p, const HPoint& q, double c_q) {
  return fundamental_solution(h1::from_hpoint(p), h1::from_hpoint(q), c_q);
}

namespace {

ScalarField regular_part_of(const SubLaplacian& op, const P3& pole, double c_q,
                            const SolveOptions& opt) {
  if (op.grid().domain().boundary_distance(pole) < 4.0 * op.grid().h())
    throw PreconditionError("GreenFunction: pole closer than 4h to the boundary");
  return op.solve_dirichlet(
      [&](const P3& anchor, AnchorKind) { return fundamental_solution(anchor, pole, c_q); }, opt);
}

}  // namespace

GreenFunction::GreenFunction(const SubLaplacian& op, const P3& pole, double c_q,
                             const SolveOptions& opt)
    : pole_(pole), cq_(c_q), h_(regular_part_of(op, pole, c_q, opt)) {}

double GreenFunction::value(const P3& x) const {
  return fundamental_solution(x, pole_, cq_) - h_.value(x);
}

}  // namespace heis
