#include "heis/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "heis/consts.hpp"
#include "heis/parallel.hpp"

namespace heis {

using h1::P3;

std::vector<double> CarlesonReport::level_slopes() const {
  // group rungs by base point (ladder is ordered base-major, k ascending)
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    const auto& a = ladder[i];
    const auto& b = ladder[i + 1];
    bool same_base = a.x0.x == b.x0.x && a.x0.y == b.x0.y && a.x0.t == b.x0.t;
    if (!same_base || a.ratio <= 0 || b.ratio <= 0) continue;
    slopes.push_back(std::log2(b.ratio / a.ratio));
  }
  return slopes;
}

CheckReport CarlesonReport::to_check_report(const std::string& name) const {
  CheckReport rep;
  rep.name = name;
  rep.seed = seed;
  rep.params = {{"alpha", alpha}, {"s", s}};
  for (const auto& rung : ladder)
    rep.records.push_back({{"x0", {rung.x0.x, rung.x0.y, rung.x0.t}},
                           {"r", rung.r},
                           {"mass", rung.mass},
                           {"ratio", rung.ratio}});
  rep.summary = {{"sup_ratio", sup_ratio}};
  return rep;
}

CarlesonReport carleson_constant(const MeasureRep& mu, const GaugeBall& domain, double alpha,
                                 double s, const CarlesonLadderSpec& spec, uint64_t seed) {
  CarlesonReport out;
  out.alpha = alpha;
  out.s = s;
  out.seed = seed;

  std::vector<P3> bases = spec.fixed_base_points;
  if (bases.empty()) {
    Rng rng(seed, 0xb);
    while (int(bases.size()) < spec.n_base_points) {
      P3 q = domain.sample_boundary(rng);
      if (h1::zmod(domain.local_unit(q)) < spec.delta) continue;
      bases.push_back(q);
    }
    // the sup over boundary points must also probe where an atomic measure
    // concentrates: add projections of the heaviest atoms
    if (!mu.is_density()) {
      auto atoms = mu.atoms;
      std::sort(atoms.begin(), atoms.end(),
                [](const auto& a, const auto& b) { return a.second > b.second; });
      for (std::size_t i = 0; i < std::min<std::size_t>(3, atoms.size()); ++i)
        bases.push_back(domain.project_to_boundary(atoms[i].first));
    }
  }

  uint64_t stream = 1;
  for (const auto& x0 : bases) {
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
      double r = std::pow(2.0, -k) * domain.radius();
      Rng rng(seed, stream++);
      double se = 0.0;
      double mass = mu.ball_mass(domain, x0, r, rng, &se);
      if (mu.is_density() && mass > 0 && se > 0.05 * mass)
        throw BudgetError("carleson_constant: MC budget short of 5% relative error");
      CarlesonRung rung{x0, r, mass, mass / std::pow(r, alpha * s)};
      out.sup_ratio = std::max(out.sup_ratio, rung.ratio);
      out.ladder.push_back(rung);
    }
  }
  return out;
}

ScalarField make_boundary_distance_field(std::shared_ptr<const Grid> grid, int workers) {
  ScalarField f(grid);
  const Grid& g = *grid;
  parallel_for(g.raster_size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t id = b; id < e; ++id) {
      if (g.cls(id) == NodeClass::exterior) continue;
      int i = int(id % g.nx());
      int j = int((id / g.nx()) % g.ny());
      int k = int(id / (std::size_t(g.nx()) * g.ny()));
      f.at(id) = g.domain().boundary_distance(g.point(i, j, k));
    }
  });
  return f;
}

namespace {

double boundary_dist(const GaugeBall& domain, const ScalarField* cache, const P3& y) {
  if (cache) {
    double lb = domain.radius() - h1::dist(y, h1::from_hpoint(domain.center()));
    double v = cache->value(y);
    return std::max(v, lb);  // interpolation may undershoot the gauge bound
  }
  return domain.boundary_distance(y);
}

P3 sample_gauge_ball(Rng& rng, const P3& c, double r) {
  P3 w;
  do {
    w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  } while (h1::gauge(w) >= 1.0);
  return h1::mul(c, h1::dil(r, w));
}

}  // namespace

namespace {

void require_boundary_vertex(const ConeSpec& spec, const GaugeBall& domain) {
  if (domain.boundary_distance(spec.vertex) > 1e-5 * domain.radius())
    throw PreconditionError("cone vertex must lie on the domain boundary");
}

}  // namespace

ConeFunctionalResult nontangential_max(const FieldEval& u, const ConeSpec& spec,
                                       const GaugeBall& domain, const ConeSampleOptions& opt) {
  require_boundary_vertex(spec, domain);
  ConeFunctionalResult res;
  res.vertex = spec.vertex;
  res.alpha = spec.alpha;
  res.truncation = spec.truncation;

  P3 v = h1::from_hpoint(spec.vertex);
  double top = (1.0 + spec.alpha) * domain.diameter();
  if (spec.truncation) top = std::min(top, *spec.truncation);

  double sup = 0.0;
  long kept = 0;
  for (int k = 0; k < opt.shells; ++k) {
    double rk = top * std::pow(2.0, -k);
    if (rk < opt.min_scale) break;
    Rng rng(opt.seed, 0x5eed + k);
    for (int i = 0; i < opt.per_shell; ++i) {
      P3 y = sample_gauge_ball(rng, v, rk);
      double dv = h1::dist(y, v);
      if (dv < rk * 0.5 || dv >= rk) continue;
      if (!domain.contains(y)) continue;
      if (spec.truncation && dv >= *spec.truncation) continue;
      double db = boundary_dist(domain, opt.distance_field, y);
      if (dv >= (1.0 + spec.alpha) * db) continue;
      double val;
      try {
        val = std::abs(u(y));
      } catch (const ResolutionError&) {
        continue;
      }
      ++kept;
      sup = std::max(sup, val);
    }
  }
  if (kept == 0) throw ResolutionError("nontangential_max: empty cone sample");
  res.value = sup;
  res.samples = kept;
  return res;
}

ConeFunctionalResult square_function(const ScalarField& u, const ConeSpec& spec,
                                     const GaugeBall& domain, const SquareFunctionOptions& opt) {
  require_boundary_vertex(spec, domain);
  double cut = opt.depth_cut > 0 ? opt.depth_cut : 4.0 * u.grid().h();
  FieldEval grad2 = [&u](const P3& y) { return u.hgrad_norm2(y); };

  SquareFunctionOptions o2 = opt;
  ConeFunctionalResult res;
  res.vertex = spec.vertex;
  res.alpha = spec.alpha;
  res.truncation = spec.truncation;

  P3 v = h1::from_hpoint(spec.vertex);
  double var_acc = 0.0;
  double total = 0.0;
  long kept = 0;

  for (int k = 0;; ++k) {
    double depth_hi = domain.radius() * std::pow(2.0, -k);
    double depth_lo = depth_hi / 2.0;
    if (depth_hi <= cut) break;
    double rk = (1.0 + spec.alpha) * depth_hi;
    if (spec.truncation) rk = std::min(rk, *spec.truncation);
    double vol = kUnitBallVolume * std::pow(rk, kQ);
    Rng rng(o2.seed, 0x50 + k);
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < o2.per_shell; ++i) {
      P3 y = sample_gauge_ball(rng, v, rk);
      double val = 0.0;
      double dv = h1::dist(y, v);
      if (domain.contains(y) && !(spec.truncation && dv >= *spec.truncation)) {
        double db = boundary_dist(domain, o2.distance_field, y);
        if (db >= depth_lo && db < depth_hi && db >= cut && dv < (1.0 + spec.alpha) * db) {
          double g2;
          try {
            g2 = grad2(y);
            val = g2 / (db * db);  // d^{2-Q}, Q = 4
            ++kept;
          } catch (const ResolutionError&) {
            val = 0.0;
          }
        }
      }
      acc += val;
      acc2 += val * val;
    }
    double mean = acc / o2.per_shell;
    double var = std::max(0.0, acc2 / o2.per_shell - mean * mean) / o2.per_shell;
    total += vol * mean;
    var_acc += vol * vol * var;
  }

  res.samples = kept;
  res.value = std::sqrt(std::max(0.0, total));
  // delta method for the square root
  double se_sq = std::sqrt(var_acc);
  res.std_error = res.value > 0 ? 0.5 * se_sq / res.value : std::sqrt(se_sq);
  return res;
}

double cone_weighted_integral_mc(const FieldEval& grad2, const ConeSpec& spec,
                                 const GaugeBall& domain, double depth_cut, int per_shell,
                                 uint64_t seed) {
  // direct volume MC over the cone's enclosing ball, no shell stratification;
  // the independent route for cross-checking square_function
  P3 v = h1::from_hpoint(spec.vertex);
  double top = (1.0 + spec.alpha) * domain.diameter();
  if (spec.truncation) top = std::min(top, *spec.truncation);
  double vol = kUnitBallVolume * std::pow(top, kQ);
  Rng rng(seed, 0xc0);
  long n = per_shell * 24L;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    P3 y = sample_gauge_ball(rng, v, top);
    if (!domain.contains(y)) continue;
    double dv = h1::dist(y, v);
    if (spec.truncation && dv >= *spec.truncation) continue;
    double db = domain.boundary_distance(y);
    if (db < depth_cut) continue;
    if (dv >= (1.0 + spec.alpha) * db) continue;
    acc += grad2(y) / (db * db);
  }
  return vol * acc / double(n);
}

}  // namespace heis
