#pragma once

#include <functional>
#include <vector>

#include "heis/domain.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Euler-Maruyama realization of the diffusion generated by Delta_H:
///   dx = sqrt(2) dW_1, dy = sqrt(2) dW_2, dt_coord = 2y dx - 2x dy.
/// The sqrt(2) makes the generator Delta_H rather than Delta_H / 2; harmonic
/// measure is invariant under the time scaling either way.
struct WalkConfig {
  double dt = 1e-5;
  long max_steps = 20000000;
  uint64_t seed = 0;
  double band = 0.0;  // absorption band; 0 -> sqrt(2 dt)
  int workers = 1;

  // never below the per-step diffusion scale
  double band_width() const { return std::max(band, std::sqrt(2.0 * dt)); }
};

struct ExitResult {
  h1::P3 exit{};
  long steps = 0;
  bool censored = false;
};

/// One walk from `start` in the unit-coordinates of the ball, absorbed when
/// the gauge radius enters the band; exit point projected along the radial
/// curve (pole fallback near the t-axis). Path depends only on
/// (cfg.seed, stream), never on scheduling.
ExitResult simulate_exit(const h1::P3& start, const GaugeBall& ball, const WalkConfig& cfg,
                         uint64_t stream = 0);

/// Generic-domain walk (membership + boundary-distance absorption; exit
/// projected to the nearest boundary-cloud point). Test-scale budgets only.
ExitResult simulate_exit_generic(const h1::P3& start, const Domain& domain, const WalkConfig& cfg,
                                 uint64_t stream = 0);

/// Empirical harmonic measure: exit distribution over a (phi, theta) cell
/// partition of the ball boundary. Keeps the raw exits for surface-ball
/// queries.
struct HarmonicMeasureEstimate {
  int n_phi = 0, n_theta = 0;
  long n_walks = 0;
  long censored = 0;
  double mean_steps = 0;
  std::vector<long> hits;        // cell counts, phi-major
  std::vector<double> estimate;  // hits / absorbed
  std::vector<double> std_error; // binomial
  std::vector<h1::P3> exits;     // absorbed exits only

  double ball_mass(const h1::P3& x0, double r) const;  // fraction of exits in B(x0, r)
};

HarmonicMeasureEstimate harmonic_measure(const h1::P3& start, const GaugeBall& ball, int n_phi,
                                         int n_theta, long n_walks, const WalkConfig& cfg);

struct McValue {
  double mean = 0;
  double std_error = 0;
  long n = 0;
  long censored = 0;
};

/// u(start) = integral of f d omega^start by walk averaging.
McValue harmonic_extension_mc(const h1::P3& start, const std::function<double(const h1::P3&)>& f,
                              const GaugeBall& ball, long n_walks, const WalkConfig& cfg);

}  // namespace heis
