#include "heis/measure.hpp"

#include <cmath>

#include "heis/consts.hpp"
#include "heis/parallel.hpp"
#include "heis/radial.hpp"

namespace heis {

using h1::P3;

double MeasureRep::ball_mass(const GaugeBall& domain, const P3& x0, double r, Rng& rng,
                             double* std_error) const {
  if (std_error) *std_error = 0.0;
  if (!is_density()) {
    double acc = 0.0;
    for (const auto& [p, m] : atoms)
      if (h1::dist(p, x0) <= r && domain.contains(p)) acc += m;
    return acc;
  }
  // uniform Lebesgue proposals in B(x0, r): w uniform in the unit ball,
  // p = x0 . delta_r(w); translation and dilation preserve uniformity
  double vol = kUnitBallVolume * std::pow(r, kQ);
  std::vector<double> vals(mc_budget, 0.0);
  long i = 0;
  while (i < mc_budget) {
    P3 w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (h1::gauge(w) >= 1.0) continue;
    P3 p = h1::mul(x0, h1::dil(r, w));
    vals[i++] = domain.contains(p) ? density(p) : 0.0;
  }
  double mean = block_sum(vals) / double(mc_budget);
  if (std_error) {
    std::vector<double> sq(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) sq[k] = (vals[k] - mean) * (vals[k] - mean);
    double var = mc_budget > 1 ? block_sum(sq) / double(mc_budget - 1) : 0.0;
    *std_error = vol * std::sqrt(var / double(mc_budget));
  }
  return vol * mean;
}

double MeasureRep::total_mass(const GaugeBall& domain, Rng& rng) const {
  if (!is_density()) {
    double acc = 0.0;
    for (const auto& [p, m] : atoms)
      if (domain.contains(p)) acc += m;
    return acc;
  }
  return ball_mass(domain, h1::from_hpoint(domain.center()), domain.radius(), rng);
}

MeasureRep MeasureRep::lebesgue(double scale) {
  MeasureRep mu;
  mu.density = [scale](const P3&) { return scale; };
  return mu;
}

MeasureRep MeasureRep::dyadic_radial_atoms(const HPoint& omega, int k0, int k1) {
  MeasureRep mu;
  for (int k = k0; k <= k1; ++k) {
    double s = 1.0 - std::pow(2.0, -k);
    HPoint p = radial_curve(omega, s);
    mu.atoms.emplace_back(h1::from_hpoint(p), std::pow(2.0, -2 * k));
  }
  return mu;
}

MeasureRep MeasureRep::boundary_atom(const HPoint& omega, double depth, double mass) {
  MeasureRep mu;
  HPoint p = radial_curve(omega, 1.0 - depth);
  mu.atoms.emplace_back(h1::from_hpoint(p), mass);
  return mu;
}

}  // namespace heis
