#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "heis/domain.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Positive measure on a domain, either a density (integrated by Monte
/// Carlo over gauge-ball proposals) or a finite atom list.
struct MeasureRep {
  std::function<double(const h1::P3&)> density;  // null -> atoms
  long mc_budget = 20000;
  std::vector<std::pair<h1::P3, double>> atoms;

  bool is_density() const { return static_cast<bool>(density); }

  /// mu(B(x0, r) ∩ Omega). Density mode: uniform proposals in the gauge
  /// ball B(x0, r) (exact Lebesgue sampler), mean of density * indicator;
  /// the Monte Carlo standard error is written to *std_error when given.
  /// Atom mode: exact summation (std error 0).
  double ball_mass(const GaugeBall& domain, const h1::P3& x0, double r, Rng& rng,
                   double* std_error = nullptr) const;

  /// mu(Omega).
  double total_mass(const GaugeBall& domain, Rng& rng) const;

  static MeasureRep lebesgue(double scale = 1.0);

  /// Atoms p_k = gamma(1 - 2^{-k}, omega), masses 2^{-2k}, k = k0..k1.
  /// Carleson-violating with ball-mass ~ r^2 against the r^3 target
  /// (log2-slope one per dyadic level).
  static MeasureRep dyadic_radial_atoms(const HPoint& omega, int k0, int k1);

  /// A single deep atom near the boundary point omega (depth along the
  /// radial curve). Ball masses are constant in r, so ratios against r^3
  /// grow by 8x per halving: the strong counterexample for the superlevel
  /// and Mobius characterizations.
  static MeasureRep boundary_atom(const HPoint& omega, double depth, double mass = 1.0);
};

}  // namespace heis
