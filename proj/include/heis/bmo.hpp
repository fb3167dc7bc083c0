#pragma once

#include <functional>

#include "heis/report.hpp"
#include "heis/walk.hpp"

namespace heis {

struct BmoLadderSpec {
  int n_base_points = 8;
  double delta = 0.15;
  int k_min = 1, k_max = 4;  // surface-ball radii 2^-k
};

/// Empirical BMO(dOmega, d omega^z) seminorm: sup over sampled surface balls
/// of the mean oscillation against the walk-estimated harmonic measure.
/// Surface balls with no exits are skipped.
double bmo_norm(const std::function<double(const h1::P3&)>& f, const GaugeBall& domain,
                const HarmonicMeasureEstimate& omega_z, const BmoLadderSpec& spec, uint64_t seed,
                int* skipped = nullptr);

/// Ratio of the seminorms computed against omega^z and omega^z0; finiteness
/// in one base point implies it in the other (kernel-function boundedness).
CheckReport bmo_basepoint_invariance(const std::function<double(const h1::P3&)>& f,
                                     const GaugeBall& domain, const h1::P3& z, const h1::P3& z0,
                                     long n_walks, const WalkConfig& cfg,
                                     const BmoLadderSpec& spec);

/// The shipped BMO exemplar: log of gauge distance to a fixed
/// non-characteristic boundary point, mollified at the given scale.
std::function<double(const h1::P3&)> log_distance_exemplar(const h1::P3& omega0,
                                                           double mollify = 1e-3);

}  // namespace heis
