#include "heis/bmo.hpp"

#include <cmath>

namespace heis {

using h1::P3;

double bmo_norm(const std::function<double(const P3&)>& f, const GaugeBall& domain,
                const HarmonicMeasureEstimate& omega_z, const BmoLadderSpec& spec, uint64_t seed,
                int* skipped) {
  Rng rng(seed, 0xb40);
  int skip = 0;
  double sup = 0.0;
  for (int b = 0; b < spec.n_base_points; ++b) {
    P3 x0;
    do {
      x0 = domain.sample_boundary(rng);
    } while (h1::zmod(domain.local_unit(x0)) < spec.delta);
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
      double r = std::pow(2.0, -k) * domain.radius();
      // mean over exits inside the surface ball
      double acc = 0.0;
      long cnt = 0;
      for (const auto& q : omega_z.exits)
        if (h1::dist(q, x0) <= r) {
          acc += f(q);
          ++cnt;
        }
      if (cnt < 8) {
        ++skip;
        continue;
      }
      double mean = acc / cnt;
      double osc = 0.0;
      for (const auto& q : omega_z.exits)
        if (h1::dist(q, x0) <= r) osc += std::abs(f(q) - mean);
      sup = std::max(sup, osc / cnt);
    }
  }
  if (skipped) *skipped = skip;
  return sup;
}

CheckReport bmo_basepoint_invariance(const std::function<double(const P3&)>& f,
                                     const GaugeBall& domain, const P3& z, const P3& z0,
                                     long n_walks, const WalkConfig& cfg,
                                     const BmoLadderSpec& spec) {
  CheckReport rep;
  rep.name = "bmo_basepoint_invariance";
  rep.seed = cfg.seed;

  WalkConfig c2 = cfg;
  c2.seed = cfg.seed + 1;
  auto om_z = harmonic_measure(z, domain, 8, 16, n_walks, cfg);
  auto om_z0 = harmonic_measure(z0, domain, 8, 16, n_walks, c2);
  int sk1 = 0, sk2 = 0;
  double n1 = bmo_norm(f, domain, om_z, spec, cfg.seed, &sk1);
  double n2 = bmo_norm(f, domain, om_z0, spec, cfg.seed, &sk2);
  double ratio = (n2 > 0) ? n1 / n2 : 0.0;
  rep.params = {{"z", {z.x, z.y, z.t}}, {"z0", {z0.x, z0.y, z0.t}}, {"n_walks", n_walks}};
  rep.summary = {{"norm_z", n1},  {"norm_z0", n2},     {"ratio", ratio},
                 {"skipped_z", sk1}, {"skipped_z0", sk2}};
  rep.pass = n1 > 0 && n2 > 0 && std::isfinite(ratio) && ratio > 0.05 && ratio < 20.0;
  return rep;
}

std::function<double(const P3&)> log_distance_exemplar(const P3& omega0, double mollify) {
  P3 w = omega0;
  double eps = mollify;
  return [w, eps](const P3& q) { return std::log(std::max(h1::dist(q, w), eps)); };
}

}  // namespace heis
