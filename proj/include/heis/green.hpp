#pragma once

#include <memory>

#include "heis/solver.hpp"

namespace heis {

/// Normalization constant of the fundamental solution Gamma = c_Q d^{2-Q}
/// (Q = 4 on H^1), produced by a divergence-theorem flux balance on a gauge
/// annulus around the pole. Never hardcoded; resolution-controlled.
double calibrate_cQ(int resolution = 2000);

/// Cached default calibration.
double fundamental_constant();

/// Gamma(p, q) = c_Q d(p,q)^{2-Q}; harmonic off the pole.
double fundamental_solution(const h1::P3& p, const h1::P3& q, double c_q);
double fundamental_solution(const HPoint& p, const HPoint& q, double c_q);

/// Green function of the grid's ball by fundamental-solution splitting:
/// G(x) = Gamma(x, pole) - h(x), with h the harmonic extension of the
/// boundary trace of Gamma. The splitting keeps the singularity closed-form.
class GreenFunction {
 public:
  GreenFunction(const SubLaplacian& op, const h1::P3& pole, double c_q, const SolveOptions& opt);

  double value(const h1::P3& x) const;
  const h1::P3& pole() const { return pole_; }
  double c_q() const { return cq_; }
  const ScalarField& regular_part() const { return h_; }

 private:
  h1::P3 pole_;
  double cq_;
  ScalarField h_;
};

}  // namespace heis
