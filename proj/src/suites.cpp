#include "heis/suites.hpp"

#include <cmath>

#include "heis/conformal.hpp"
#include "heis/grid.hpp"
#include "heis/point.hpp"
#include "heis/radial.hpp"
#include "heis/rng.hpp"
#include "heis/solver.hpp"

namespace heis {

namespace {

HPoint rand_point(Rng& rng, double scale) {
  return HPoint::h1(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                    rng.uniform(-scale, scale));
}

}  // namespace

CheckReport identity_suite(uint64_t seed, long n_samples, double tolerance) {
  CheckReport rep;
  rep.name = "identity_suite";
  rep.seed = seed;
  rep.params = {{"n_samples", n_samples}, {"tolerance", tolerance}};

  Rng rng(seed, 0x1d);
  double w_assoc = 0, w_inv = 0, w_sym = 0, w_tri = 0, w_li = 0, w_hom = 0;
  double w_iinv = 0, w_inorm = 0, w_tdist = 0, w_tnorm = 0;
  long tmap_tested = 0;

  for (long i = 0; i < n_samples; ++i) {
    HPoint a = rand_point(rng, 10), b = rand_point(rng, 10), c = rand_point(rng, 10);
    // group axioms (absolute, coordinates bounded by 10)
    HPoint lhs = mul(mul(a, b), c), rhs = mul(a, mul(b, c));
    for (int k = 0; k < 3; ++k) w_assoc = std::max(w_assoc, std::abs(lhs[k] - rhs[k]));
    HPoint e = mul(a, inverse(a));
    for (int k = 0; k < 3; ++k) w_inv = std::max(w_inv, std::abs(e[k]));
    // metric axioms
    double ab = dist(a, b);
    w_sym = std::max(w_sym, std::abs(ab - dist(b, a)));
    w_tri = std::max(w_tri, ab - dist(a, c) - dist(c, b));
    // left invariance (relative)
    if (ab > 1e-3) {
      HPoint g = rand_point(rng, 10);
      w_li = std::max(w_li, std::abs(dist(mul(g, a), mul(g, b)) - ab) / ab);
    }
    // dilation homogeneity (relative)
    double ga = gauge_norm(a);
    if (ga > 1e-3) {
      double rho = rng.uniform(0.1, 3.0);
      w_hom = std::max(w_hom, std::abs(gauge_norm(dilate(rho, a)) - rho * ga) / (rho * ga));
    }
    // inversion involution and norm product (componentwise / relative)
    if (ga > 1e-2) {
      HPoint ii = koranyi_inversion(koranyi_inversion(a));
      for (int k = 0; k < 3; ++k)
        w_iinv = std::max(w_iinv, std::abs(ii[k] - a[k]) / std::max(1.0, std::abs(a[k])));
      w_inorm = std::max(w_inorm, std::abs(gauge_norm(koranyi_inversion(a)) * ga - 1.0));
    }
    // T-map identities on admissible draws
    HPoint x = rand_point(rng, 0.6);
    HPoint aa = rand_point(rng, 3.0);
    HPoint y = rand_point(rng, 0.9), y2 = rand_point(rng, 0.9);
    if (gauge_norm(aa) > 1.1 && dist(aa, x) > 0.3 && dist(aa, y) > 0.2 && dist(aa, y2) > 0.2) {
      ++tmap_tested;
      TMapParams prm(x, aa, 0.2 + 1.3 * rng.uniform());
      double tn = t_map_norm(prm, y);
      if (tn > 1e-9)
        w_tnorm = std::max(w_tnorm, std::abs(gauge_norm(t_map(prm, y)) - tn) / tn);
      double td = t_map_pair_distance(prm, y, y2);
      if (td > 1e-9)
        w_tdist = std::max(w_tdist, std::abs(dist(t_map(prm, y), t_map(prm, y2)) - td) / td);
    }
  }

  auto add = [&](const char* name, double v, double tol) {
    rep.records.push_back({{"identity", name}, {"max_violation", v}, {"tolerance", tol}});
    if (v > tol) rep.pass = false;
  };
  add("associativity", w_assoc, 1e-12);
  add("inverse", w_inv, 1e-12);
  add("metric_symmetry", w_sym, 1e-12);
  add("triangle_inequality", w_tri, 1e-12);
  add("left_invariance", w_li, tolerance);
  add("dilation_homogeneity", w_hom, tolerance);
  add("inversion_involution", w_iinv, tolerance);
  add("inversion_norm_product", w_inorm, tolerance);
  add("tmap_norm_identity", w_tnorm, tolerance);
  add("tmap_distance_identity", w_tdist, tolerance);

  double overall = std::max({w_li, w_hom, w_iinv, w_inorm, w_tnorm, w_tdist});
  rep.summary = {{"max_relative_violation", overall}, {"tmap_configs", tmap_tested}};
  return rep;
}

CheckReport jacobian_suite(uint64_t seed, long n_samples, double tolerance) {
  CheckReport rep;
  rep.name = "jacobian_suite";
  rep.seed = seed;
  rep.params = {{"n_samples", n_samples}, {"tolerance", tolerance}};

  Rng rng(seed, 0x7a);
  double worst = 0;
  long tested = 0;
  while (tested < n_samples) {
    HPoint x = rand_point(rng, 0.5);
    HPoint a = rand_point(rng, 3.0);
    if (gauge_norm(a) < 1.1 || dist(a, x) < 0.3) continue;
    HPoint y = rand_point(rng, 0.9);
    if (dist(a, y) < 0.1) continue;
    TMapParams prm(x, a, 0.3 + rng.uniform());
    double jf = t_map_jacobian(prm, y);
    double fd = t_map_jacobian_fd(prm, y, 1e-4);
    worst = std::max(worst, std::abs(fd - jf) / jf);
    ++tested;
  }
  rep.pass = worst <= tolerance;
  rep.summary = {{"max_relative_error", worst}, {"samples", tested}};
  return rep;
}

CheckReport radial_suite(uint64_t seed, long n_samples) {
  CheckReport rep;
  rep.name = "radial_suite";
  rep.seed = seed;
  rep.params = {{"n_samples", n_samples}};

  Rng rng(seed, 0x4a);
  double w_norm = 0, res_h = 0, res_h2 = 0, w_round = 0;
  for (long i = 0; i < n_samples; ++i) {
    double phi = rng.uniform(-1.2, 1.2);
    double theta = rng.uniform(0, 2 * M_PI);
    double rho = std::sqrt(std::cos(phi));
    HPoint w = HPoint::h1(rho * std::cos(theta), rho * std::sin(theta), std::sin(phi));
    double s = rng.uniform(0.3, 0.97);
    w_norm = std::max(w_norm, std::abs(gauge_norm(radial_curve(w, s)) - s));
    res_h = std::max(res_h, radial_horizontality_residual(w, s, 1e-3));
    res_h2 = std::max(res_h2, radial_horizontality_residual(w, s, 5e-4));

    HPoint x = radial_curve(w, s);
    HPoint back = radial_curve(boundary_projection(x), gauge_norm(x));
    for (int k = 0; k < 3; ++k) w_round = std::max(w_round, std::abs(back[k] - x[k]));
  }
  double ratio = res_h / res_h2;
  bool ok_norm = w_norm <= 1e-12;
  bool ok_ratio = ratio >= 3.5 && ratio <= 4.5;
  bool ok_round = w_round <= 1e-9;
  rep.pass = ok_norm && ok_ratio && ok_round;
  rep.summary = {{"max_norm_defect", w_norm},
                 {"richardson_ratio", ratio},
                 {"max_roundtrip_defect", w_round}};
  return rep;
}

CheckReport discretization_suite(double h_coarse, int workers) {
  CheckReport rep;
  rep.name = "discretization_suite";
  rep.params = {{"h_coarse", h_coarse}};
  (void)workers;

  auto resid = [&](double h) {
    auto ball = std::make_shared<const GaugeBall>(HPoint::identity(1), 1.0, 3000);
    auto grid =
        std::make_shared<const Grid>(ball, h1::P3{-1, -1, -1}, h1::P3{1, 1, 1}, h);
    SubLaplacian op(grid);
    const Grid& g = *grid;
    std::vector<double> v(g.raster_size(), 0.0);
    for (int k = 0; k < g.nt(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          h1::P3 p = g.point(i, j, k);
          double gg = h1::gauge(p);
          v[g.id(i, j, k)] = gg > 1e-9 ? 1.0 / (gg * gg) : 0.0;
        }
    double worst = 0;
    for (int k = 2; k < g.nt() - 2; ++k)
      for (int j = 2; j < g.ny() - 2; ++j)
        for (int i = 2; i < g.nx() - 2; ++i) {
          if (g.cls(i, j, k) != NodeClass::interior) continue;
          if (h1::gauge(g.point(i, j, k)) < 0.35) continue;
          worst = std::max(worst, std::abs(op.apply_interior(v, i, j, k)));
        }
    return worst;
  };
  double r1 = resid(h_coarse), r2 = resid(h_coarse / 2.0);
  double ratio = r1 / r2;
  rep.pass = ratio >= 3.5 && ratio <= 4.5;
  rep.summary = {{"residual_coarse", r1}, {"residual_fine", r2}, {"richardson_ratio", ratio}};
  return rep;
}

}  // namespace heis
