#include "heis/walk.hpp"

#include <cmath>

#include "heis/detail/sphere.hpp"
#include "heis/parallel.hpp"
#include "heis/radial.hpp"

namespace heis {

using h1::P3;

namespace {

/// Radial projection of a unit-ball point with gauge radius near 1.
P3 project_exit_unit(const P3& w) {
  double s = h1::gauge(w);
  double zm = h1::zmod(w);
  if (s <= 0.0 || zm < 1e-9) return {0.0, 0.0, w.t >= 0.0 ? 1.0 : -1.0};
  if (s >= 1.0) {
    P3 v = h1::dil(1.0 / s, w);
    return v;
  }
  double phase = (w.t / (zm * zm)) * std::log(s);
  double c = std::cos(phase), sn = std::sin(phase);
  return {(w.x * c - w.y * sn) / s, (w.x * sn + w.y * c) / s, w.t / (s * s)};
}

}  // namespace

ExitResult simulate_exit(const P3& start, const GaugeBall& ball, const WalkConfig& cfg,
                         uint64_t stream) {
  // walk in unit-ball coordinates; dilation rescales time by R^2, which
  // leaves the exit law unchanged
  P3 w = ball.local_unit(start);
  const double band = cfg.band_width() / ball.radius();
  const double step = std::sqrt(2.0 * cfg.dt) / ball.radius();
  const double thresh = std::pow(1.0 - band, 4);  // compare gauge^4, no roots per step
  Rng rng(cfg.seed, stream);
  ExitResult res;
  while (h1::gauge4(w) < thresh) {
    if (res.steps >= cfg.max_steps) {
      res.censored = true;
      res.exit = ball.world_from_unit(project_exit_unit(w));
      return res;
    }
    double dx = step * rng.normal();
    double dy = step * rng.normal();
    w.t += 2.0 * w.y * dx - 2.0 * w.x * dy;
    w.x += dx;
    w.y += dy;
    ++res.steps;
  }
  res.exit = ball.world_from_unit(project_exit_unit(w));
  return res;
}

ExitResult simulate_exit_generic(const P3& start, const Domain& domain, const WalkConfig& cfg,
                                 uint64_t stream) {
  P3 w = start;
  const double band = cfg.band_width();
  const double step = std::sqrt(2.0 * cfg.dt);
  Rng rng(cfg.seed, stream);
  ExitResult res;
  auto project = [&](const P3& p) {
    const auto& cloud = domain.boundary_cloud();
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      double d = h1::dist(p, cloud[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return cloud[best];
  };
  while (true) {
    if (!domain.contains(w) || domain.boundary_distance(w) < band) {
      res.exit = project(w);
      return res;
    }
    if (res.steps >= cfg.max_steps) {
      res.censored = true;
      res.exit = project(w);
      return res;
    }
    double dx = step * rng.normal();
    double dy = step * rng.normal();
    w.t += 2.0 * w.y * dx - 2.0 * w.x * dy;
    w.x += dx;
    w.y += dy;
    ++res.steps;
  }
}

double HarmonicMeasureEstimate::ball_mass(const P3& x0, double r) const {
  if (exits.empty()) return 0.0;
  long c = 0;
  for (const auto& q : exits)
    if (h1::dist(q, x0) <= r) ++c;
  return double(c) / double(exits.size());
}

HarmonicMeasureEstimate harmonic_measure(const P3& start, const GaugeBall& ball, int n_phi,
                                         int n_theta, long n_walks, const WalkConfig& cfg) {
  HarmonicMeasureEstimate est;
  est.n_phi = n_phi;
  est.n_theta = n_theta;
  est.n_walks = n_walks;
  est.hits.assign(std::size_t(n_phi) * n_theta, 0);

  std::vector<P3> exits((std::size_t)n_walks);
  std::vector<uint8_t> censored((std::size_t)n_walks, 0);
  std::vector<long> steps((std::size_t)n_walks, 0);
  parallel_for((std::size_t)n_walks, cfg.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ExitResult r = simulate_exit(start, ball, cfg, i);
      exits[i] = r.exit;
      censored[i] = r.censored;
      steps[i] = r.steps;
    }
  });

  double step_acc = 0;
  for (std::size_t i = 0; i < exits.size(); ++i) {
    step_acc += double(steps[i]);
    if (censored[i]) {
      ++est.censored;
      continue;
    }
    P3 w = ball.local_unit(exits[i]);
    double phi = std::asin(std::clamp(w.t, -1.0, 1.0));
    double theta = std::atan2(w.y, w.x);
    if (theta < 0) theta += 2.0 * M_PI;
    int ip = std::min(n_phi - 1, int((phi + M_PI / 2) / M_PI * n_phi));
    int it = std::min(n_theta - 1, int(theta / (2.0 * M_PI) * n_theta));
    ++est.hits[std::size_t(ip) * n_theta + it];
    est.exits.push_back(exits[i]);
  }
  est.mean_steps = step_acc / double(n_walks);
  long absorbed = n_walks - est.censored;
  est.estimate.resize(est.hits.size());
  est.std_error.resize(est.hits.size());
  for (std::size_t c = 0; c < est.hits.size(); ++c) {
    double p = absorbed > 0 ? double(est.hits[c]) / absorbed : 0.0;
    est.estimate[c] = p;
    est.std_error[c] = absorbed > 0 ? std::sqrt(p * (1 - p) / absorbed) : 0.0;
  }
  return est;
}

McValue harmonic_extension_mc(const P3& start, const std::function<double(const P3&)>& f,
                              const GaugeBall& ball, long n_walks, const WalkConfig& cfg) {
  std::vector<double> vals((std::size_t)n_walks, 0.0);
  std::vector<uint8_t> censored((std::size_t)n_walks, 0);
  parallel_for((std::size_t)n_walks, cfg.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ExitResult r = simulate_exit(start, ball, cfg, i);
      censored[i] = r.censored;
      vals[i] = r.censored ? 0.0 : f(r.exit);
    }
  });
  McValue out;
  long n_ok = 0;
  for (auto c : censored)
    if (!c) ++n_ok;
  out.censored = n_walks - n_ok;
  out.n = n_ok;
  if (n_ok == 0) return out;
  // censored walks excluded from the mean (deterministic block reduction)
  std::vector<double> kept;
  kept.reserve(n_ok);
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (!censored[i]) kept.push_back(vals[i]);
  double mean = block_sum(kept) / double(n_ok);
  std::vector<double> sq(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) sq[i] = (kept[i] - mean) * (kept[i] - mean);
  double var = n_ok > 1 ? block_sum(sq) / double(n_ok - 1) : 0.0;
  out.mean = mean;
  out.std_error = std::sqrt(var / double(n_ok));
  return out;
}

}  // namespace heis
