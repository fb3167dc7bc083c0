#pragma once

#include "heis/report.hpp"

namespace heis {

/// Exact-identity sweep: group axioms, metric axioms, left invariance,
/// dilation homogeneity, inversion identities, T-map norm/distance closed
/// forms. Reports the max violation per identity (relative where the
/// identity has a scale).
CheckReport identity_suite(uint64_t seed, long n_samples, double tolerance = 1e-9);

/// Finite-difference Jacobian of the T map against rho^4 / d(a,y)^8.
CheckReport jacobian_suite(uint64_t seed, long n_samples, double tolerance = 1e-5);

/// Radial curves: gauge norm exactness, horizontality Richardson ratio,
/// boundary-projection round trip.
CheckReport radial_suite(uint64_t seed, long n_samples);

/// Order-2 consistency of the assembled sub-Laplacian on the fundamental
/// solution off the pole (residual ratio between h and h/2 in [3.5, 4.5]).
CheckReport discretization_suite(double h_coarse = 1.0 / 32, int workers = 1);

}  // namespace heis
