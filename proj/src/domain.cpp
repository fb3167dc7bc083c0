#include "heis/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heis/detail/opt.hpp"
#include "heis/detail/sphere.hpp"
#include "heis/parallel.hpp"
#include "heis/radial.hpp"

namespace heis {

using h1::P3;

// ---------------------------------------------------------------------------
// GaugeBall

GaugeBall::GaugeBall(HPoint center, double radius, int cloud_size)
    : center_hp_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0)) throw std::domain_error("GaugeBall: radius must be positive");
  center_ = h1::from_hpoint(center_hp_);
  cloud_.reserve(cloud_size);
  cloud_phi_.reserve(cloud_size);
  cloud_theta_.reserve(cloud_size);
  // Fibonacci lattice, quasi-uniform in the (phi, theta) parametrization.
  const double golden = 0.6180339887498949;
  for (int i = 0; i < cloud_size; ++i) {
    double u = (i + 0.5) / cloud_size;
    double phi = M_PI * u - M_PI / 2.0;
    double theta = 2.0 * M_PI * std::fmod(golden * i, 1.0);
    cloud_phi_.push_back(phi);
    cloud_theta_.push_back(theta);
    cloud_.push_back(boundary_point(phi, theta));
  }
  // Count-normalized weights; reference scale 0.3 R.
  const double r0 = 0.3 * radius_;
  count_weights_.resize(cloud_.size());
  for (std::size_t i = 0; i < cloud_.size(); ++i) {
    int cnt = 0;
    for (std::size_t j = 0; j < cloud_.size(); ++j)
      if (h1::dist(cloud_[j], cloud_[i]) <= r0) ++cnt;
    count_weights_[i] = r0 * r0 * r0 / cnt;
  }
}

bool GaugeBall::contains(const P3& p) const { return h1::dist(p, center_) < radius_; }

P3 GaugeBall::local_unit(const P3& p) const {
  return h1::dil(1.0 / radius_, h1::mul(h1::inv(center_), p));
}

P3 GaugeBall::world_from_unit(const P3& w) const { return h1::mul(center_, h1::dil(radius_, w)); }

P3 GaugeBall::boundary_point(double phi, double theta) const {
  return world_from_unit(detail::sphere_point(phi, theta));
}

double GaugeBall::boundary_distance_unit(const P3& w, double* phi_min, double* theta_min) const {
  double s = h1::gauge(w);
  // phi is clamped: beyond the poles the parametrization would leave the
  // sphere along the t-axis and fake smaller distances
  auto f = [&](double phi, double theta) {
    return h1::dist(w, detail::sphere_point(std::clamp(phi, -M_PI / 2.0, M_PI / 2.0), theta));
  };

  double best = std::numeric_limits<double>::infinity();
  double best_phi = 0, best_theta = 0;
  auto polish = [&](double phi0, double theta0, double step) {
    auto m = detail::nelder_mead_2d(f, phi0, theta0, step, 70);
    auto m2 = detail::nelder_mead_2d(f, m.u, m.v, 0.002, 40);
    if (m2.value < m.value) m = m2;
    if (m.value < best) {
      best = m.value;
      best_phi = std::clamp(m.u, -M_PI / 2.0, M_PI / 2.0);
      best_theta = m.v;
    }
  };

  // Coarse parametric scan. The twist term makes the distance landscape
  // multimodal in theta, so analytic starts alone are not reliable.
  const int kNPhi = 12, kNTheta = 16;
  double b1 = std::numeric_limits<double>::infinity(), b2 = b1;
  double p1 = 0, t1 = 0, p2 = 0, t2 = 0;
  for (int i = 0; i < kNPhi; ++i) {
    double phi = -M_PI / 2.0 + M_PI * (i + 0.5) / kNPhi;
    for (int j = 0; j < kNTheta; ++j) {
      double theta = 2.0 * M_PI * j / kNTheta;
      double d = f(phi, theta);
      if (d < b1) {
        b2 = b1, p2 = p1, t2 = t1;
        b1 = d, p1 = phi, t1 = theta;
      } else if (d < b2) {
        b2 = d, p2 = phi, t2 = theta;
      }
    }
  }
  polish(p1, t1, M_PI / (2 * kNPhi));
  if (std::isfinite(b2)) polish(p2, t2, M_PI / (2 * kNPhi));

  double zm = h1::zmod(w);
  if (s > 1e-14 && zm > 1e-8 * std::max(1.0, s)) {
    double phi, theta;
    P3 ws = (s < 1.0) ? w : h1::dil(0.999999 / s, w);
    detail::radial_projection_params(ws, &phi, &theta);
    polish(phi, theta, 0.05);
  }
  polish(w.t >= 0.0 ? M_PI / 2.0 - 0.03 : -M_PI / 2.0 + 0.03, std::atan2(w.y, w.x), 0.1);

  if (phi_min) *phi_min = best_phi;
  if (theta_min) *theta_min = best_theta;
  // The gauge triangle inequality gives d >= |1 - s|; NM only overshoots.
  return std::max(best, std::abs(1.0 - s));
}

P3 GaugeBall::nearest_boundary_point(const P3& p) const {
  double phi, theta;
  boundary_distance_unit(local_unit(p), &phi, &theta);
  return boundary_point(phi, theta);
}

double GaugeBall::boundary_distance(const P3& p) const {
  return radius_ * boundary_distance_unit(local_unit(p));
}

P3 GaugeBall::sample_boundary(Rng& rng) const {
  double phi = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
  double theta = rng.uniform(0.0, 2.0 * M_PI);
  return boundary_point(phi, theta);
}

P3 GaugeBall::project_to_boundary(const P3& p) const {
  P3 w = local_unit(p);
  double s = h1::gauge(w);
  double zm = h1::zmod(w);
  if (s <= 0.0 || zm < 1e-9 * std::max(1.0, s)) {
    return world_from_unit({0.0, 0.0, w.t >= 0.0 ? 1.0 : -1.0});
  }
  if (s >= 1.0) return world_from_unit(h1::dil(1.0 / s, w));
  HPoint omega = boundary_projection(h1::to_hpoint(w));
  return world_from_unit(h1::from_hpoint(omega));
}

std::vector<HPoint> GaugeBall::characteristic_set() const {
  double r2 = radius_ * radius_;
  return {mul(center_hp_, HPoint::h1(0, 0, r2)), mul(center_hp_, HPoint::h1(0, 0, -r2))};
}

CorkscrewResult GaugeBall::corkscrew_point(const HPoint& x0, double r, double delta) const {
  P3 w = local_unit(h1::from_hpoint(x0));
  double s = h1::gauge(w);
  if (std::abs(s - 1.0) > 1e-9)
    throw PreconditionError("corkscrew_point: x0 must lie on the boundary");
  double zm = h1::zmod(w);
  if (zm < delta)
    throw CharacteristicError("corkscrew_point: boundary point too close to the poles");
  double rhat = r / radius_;
  if (!(rhat > 0.0) || rhat > 1.0) throw PreconditionError("corkscrew_point: bad scale r");
  double sc = 1.0 - rhat * zm;
  HPoint omega = h1::to_hpoint(h1::dil(1.0 / s, w));
  P3 a = h1::from_hpoint(radial_curve(omega, sc));
  P3 world = world_from_unit(a);
  CorkscrewResult res;
  res.point = h1::to_hpoint(world);
  res.r = r;
  res.achieved_distance_to_vertex = h1::dist(world, h1::from_hpoint(x0));
  res.achieved_distance_to_boundary = boundary_distance(world);
  res.m_effective =
      r / std::min(res.achieved_distance_to_vertex, res.achieved_distance_to_boundary);
  return res;
}

P3 GaugeBall::sample_interior(Rng& rng) const {
  for (int k = 0; k < 4096; ++k) {
    P3 w{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (h1::gauge(w) < 1.0) return world_from_unit(w);
  }
  throw SamplingError("sample_interior: rejection budget exhausted");
}

namespace {

/// Area element and outward normal of the world boundary surface
/// P(phi,theta) = c . delta_R(S(phi,theta)). Left translation acts as the
/// affine shear A = [[1,0,0],[0,1,0],[2c_y,-2c_x,1]] (determinant 1), so the
/// mapped cross product is A^{-T} w.
struct SurfParams {
  double cx, cy, R;
};

struct SurfElem {
  double area;     // |P_phi x P_theta|
  double nx, ny, nt;  // unit normal
};

SurfElem surf_elem(const SurfParams& sp, double phi, double theta) {
  double c = std::cos(phi), s = std::sin(phi);
  double rho2 = std::max(0.0, c);
  double rho = std::sqrt(std::sqrt(rho2));
  rho *= rho;  // cos^{1/2}
  double R = sp.R;
  // cross product of the dilated tangents (before translation):
  // w = (-R^3 rho cos(phi) cos(theta), -R^3 rho cos(phi) sin(theta), -R^2 sin(phi)/2)
  double wx = -R * R * R * rho * c * std::cos(theta);
  double wy = -R * R * R * rho * c * std::sin(theta);
  double wt = -R * R * 0.5 * s;
  // shear: A^{-T} w = (wx - 2 c_y wt, wy + 2 c_x wt, wt)
  double ax = wx - 2.0 * sp.cy * wt;
  double ay = wy + 2.0 * sp.cx * wt;
  double at = wt;
  double n = std::sqrt(ax * ax + ay * ay + at * at);
  if (n == 0.0) return {0.0, 0.0, 0.0, 1.0};
  return {n, ax / n, ay / n, at / n};
}

double proxy_density(const SurfElem& e, const P3& q) {
  double hx = e.nx + 2.0 * q.y * e.nt;
  double hy = e.ny - 2.0 * q.x * e.nt;
  return std::sqrt(hx * hx + hy * hy);
}

}  // namespace

double GaugeBall::surface_integral(SurfaceKind kind, const std::function<double(const P3&)>& f,
                                   std::optional<std::pair<P3, double>> patch) const {
  SurfParams sp{center_.x, center_.y, radius_};

  double phi_lo = -M_PI / 2.0, phi_hi = M_PI / 2.0, th_lo = 0.0, th_hi = 2.0 * M_PI;
  int nphi = 260, ntheta = 260, sub = 1;
  bool have_patch = patch.has_value();
  P3 px{};
  double pr = 0.0;
  if (have_patch) {
    px = patch->first;
    pr = patch->second;
    P3 wq = local_unit(px);
    double zm = h1::zmod(wq), sq = h1::gauge(wq);
    double phi0, theta0;
    if (zm > 1e-9) {
      detail::radial_projection_params(h1::dil(std::min(1.0, 0.999999 / sq), wq), &phi0, &theta0);
    } else {
      phi0 = wq.t >= 0 ? M_PI / 2 : -M_PI / 2;
      theta0 = 0.0;
    }
    double rhat = pr / radius_;
    double cphi = std::max(0.05, std::cos(phi0));
    double rho0 = std::sqrt(std::max(0.05, cphi));
    double wphi = std::min(M_PI / 2.0, 6.0 * rhat / cphi + 3.0 * rhat * rhat);
    double wtheta = std::min(M_PI, 6.0 * rhat / rho0);
    phi_lo = std::max(-M_PI / 2.0, phi0 - wphi);
    phi_hi = std::min(M_PI / 2.0, phi0 + wphi);
    th_lo = theta0 - wtheta;
    th_hi = theta0 + wtheta;
    nphi = 160;
    ntheta = 160;
    sub = 10;
  }

  auto in_patch = [&](const P3& q) { return !have_patch || h1::dist(q, px) <= pr; };

  double dphi = (phi_hi - phi_lo) / nphi;
  double dtheta = (th_hi - th_lo) / ntheta;
  double total = 0.0;
  for (int i = 0; i < nphi; ++i) {
    double p0 = phi_lo + i * dphi;
    for (int j = 0; j < ntheta; ++j) {
      double t0 = th_lo + j * dtheta;
      int ss = 1;
      if (have_patch) {
        int inc = 0;
        inc += in_patch(boundary_point(p0, t0));
        inc += in_patch(boundary_point(p0, t0 + dtheta));
        inc += in_patch(boundary_point(p0 + dphi, t0));
        inc += in_patch(boundary_point(p0 + dphi, t0 + dtheta));
        inc += in_patch(boundary_point(p0 + dphi / 2, t0 + dtheta / 2));
        if (inc == 0) continue;
        ss = (inc == 5) ? 1 : sub;
      }
      double ddp = dphi / ss, ddt = dtheta / ss;
      for (int a = 0; a < ss; ++a)
        for (int b = 0; b < ss; ++b) {
          double phi = p0 + (a + 0.5) * ddp, theta = t0 + (b + 0.5) * ddt;
          P3 q = boundary_point(phi, theta);
          if (have_patch && !in_patch(q)) continue;
          SurfElem e = surf_elem(sp, phi, theta);
          double w = e.area;
          if (kind == SurfaceKind::metric_regular_proxy) w *= proxy_density(e, q);
          total += f(q) * w * ddp * ddt;
        }
    }
  }
  return total;
}

double GaugeBall::surface_ball_measure(SurfaceKind kind, const P3& x0, double r) const {
  return surface_integral(kind, [](const P3&) { return 1.0; }, std::make_pair(x0, r));
}

double GaugeBall::counting_proxy_measure(const P3& x0, double r) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < cloud_.size(); ++i)
    if (h1::dist(cloud_[i], x0) <= r) acc += count_weights_[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Box

Box::Box(P3 lo, P3 hi, int cloud_per_face) : lo_(lo), hi_(hi) {
  double los[3] = {lo_.x, lo_.y, lo_.t}, his[3] = {hi_.x, hi_.y, hi_.t};
  for (int ax = 0; ax < 3; ++ax) {
    int a0 = (ax + 1) % 3, a1 = (ax + 2) % 3;
    faces_.push_back({ax, los[ax], los[a0], his[a0], los[a1], his[a1]});
    faces_.push_back({ax, his[ax], los[a0], his[a0], los[a1], his[a1]});
  }
  Rng rng(12345);
  for (const auto& fc : faces_)
    for (int i = 0; i < cloud_per_face; ++i) {
      double u = rng.uniform(fc.lo0, fc.hi0), v = rng.uniform(fc.lo1, fc.hi1);
      double c[3];
      c[fc.axis] = fc.level;
      c[(fc.axis + 1) % 3] = u;
      c[(fc.axis + 2) % 3] = v;
      cloud_.push_back({c[0], c[1], c[2]});
    }
}

Box::Box(P3 lo, P3 hi, P3 slab_lo, P3 slab_hi, int cloud_per_face) : Box(lo, hi, cloud_per_face) {
  slab_ = true;
  slo_ = slab_lo;
  shi_ = slab_hi;
  double los[3] = {slo_.x, slo_.y, slo_.t}, his[3] = {shi_.x, shi_.y, shi_.t};
  double blos[3] = {lo_.x, lo_.y, lo_.t}, bhis[3] = {hi_.x, hi_.y, hi_.t};
  Rng rng(54321);
  for (int ax = 0; ax < 3; ++ax) {
    int a0 = (ax + 1) % 3, a1 = (ax + 2) % 3;
    for (double level : {los[ax], his[ax]}) {
      // slab faces outside the box are not part of the domain boundary;
      // the rest are clipped to it
      if (level <= blos[ax] || level >= bhis[ax]) continue;
      Face fc{ax,
              level,
              std::max(los[a0], blos[a0]),
              std::min(his[a0], bhis[a0]),
              std::max(los[a1], blos[a1]),
              std::min(his[a1], bhis[a1])};
      if (fc.lo0 >= fc.hi0 || fc.lo1 >= fc.hi1) continue;
      faces_.push_back(fc);
      for (int i = 0; i < cloud_per_face; ++i) {
        double u = rng.uniform(fc.lo0, fc.hi0), v = rng.uniform(fc.lo1, fc.hi1);
        double c[3];
        c[fc.axis] = fc.level;
        c[(fc.axis + 1) % 3] = u;
        c[(fc.axis + 2) % 3] = v;
        cloud_.push_back({c[0], c[1], c[2]});
      }
    }
  }
}

bool Box::contains(const P3& p) const {
  bool in = p.x > lo_.x && p.x < hi_.x && p.y > lo_.y && p.y < hi_.y && p.t > lo_.t && p.t < hi_.t;
  if (!in) return false;
  if (slab_ && p.x >= slo_.x && p.x <= shi_.x && p.y >= slo_.y && p.y <= shi_.y && p.t >= slo_.t &&
      p.t <= shi_.t)
    return false;
  return true;
}

double Box::face_distance(const Face& fc, const P3& p) const {
  double coords[3] = {p.x, p.y, p.t};
  int a0 = (fc.axis + 1) % 3, a1 = (fc.axis + 2) % 3;
  auto at = [&](double u, double v) {
    double c[3];
    c[fc.axis] = fc.level;
    c[a0] = u;
    c[a1] = v;
    return P3{c[0], c[1], c[2]};
  };
  auto f = [&](double u, double v) {
    double uu = std::clamp(u, fc.lo0, fc.hi0), vv = std::clamp(v, fc.lo1, fc.hi1);
    return h1::dist(p, at(uu, vv));
  };
  double u0 = std::clamp(coords[a0], fc.lo0, fc.hi0);
  double v0 = std::clamp(coords[a1], fc.lo1, fc.hi1);
  auto m = detail::nelder_mead_2d(f, u0, v0, 0.02 * (fc.hi0 - fc.lo0 + fc.hi1 - fc.lo1), 60);
  return m.value;
}

double Box::boundary_distance(const P3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& fc : faces_) best = std::min(best, face_distance(fc, p));
  return best;
}

P3 Box::sample_boundary(Rng& rng) const {
  const auto& fc = faces_[rng.uniform_index(faces_.size())];
  double u = rng.uniform(fc.lo0, fc.hi0), v = rng.uniform(fc.lo1, fc.hi1);
  double c[3];
  c[fc.axis] = fc.level;
  c[(fc.axis + 1) % 3] = u;
  c[(fc.axis + 2) % 3] = v;
  return {c[0], c[1], c[2]};
}

double Box::diameter() const { return h1::dist(lo_, hi_); }

// ---------------------------------------------------------------------------

bool cone_contains(const ConeSpec& spec, const Domain& domain, const P3& y,
                   double boundary_dist_hint) {
  if (!domain.contains(y)) return false;
  P3 v = h1::from_hpoint(spec.vertex);
  double dv = h1::dist(y, v);
  if (spec.truncation && dv >= *spec.truncation) return false;
  double db = boundary_dist_hint >= 0.0 ? boundary_dist_hint : domain.boundary_distance(y);
  return dv < (1.0 + spec.alpha) * db;
}

bool cone_contains(const ConeSpec& spec, const Domain& domain, const HPoint& y) {
  return cone_contains(spec, domain, h1::from_hpoint(y), -1.0);
}

// ---------------------------------------------------------------------------
// NTA probe

namespace {

struct CorkscrewSearch {
  double m_eff = std::numeric_limits<double>::infinity();
  bool found = false;
};

CorkscrewSearch search_corkscrew(const Domain& domain, const P3& x0, double r, bool interior,
                                 Rng& rng, int candidates) {
  CorkscrewSearch out;
  for (int k = 0; k < candidates; ++k) {
    P3 w;
    do {
      w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    } while (h1::gauge(w) >= 1.0);
    P3 p = h1::mul(x0, h1::dil(r, w));
    if (domain.contains(p) != interior) continue;
    double dv = h1::dist(p, x0);
    if (dv > r || dv <= 0.0) continue;
    double db = domain.boundary_distance(p);
    if (db <= 0.0) continue;
    double m = std::max(r / db, r / dv);
    if (m < out.m_eff) {
      out.m_eff = m;
      out.found = true;
    }
  }
  return out;
}

}  // namespace

CheckReport nta_probe(const Domain& domain, double m_hypothesis, double r0, int n_samples,
                      uint64_t seed, int workers) {
  CheckReport rep;
  rep.name = "nta_probe";
  rep.seed = seed;
  rep.params = {{"domain", domain.name()},
                {"M_hypothesis", m_hypothesis},
                {"r0", r0},
                {"n_samples", n_samples}};
  if (n_samples == 0) {
    rep.summary = {{"interior_pass", true}, {"exterior_pass", true}, {"samples", 0}};
    return rep;
  }

  const int kScales = 4;
  std::vector<Json> recs(n_samples);
  std::vector<double> worst_int(n_samples, 0.0), worst_ext(n_samples, 0.0);
  parallel_for(n_samples, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      Rng rng(seed, i);
      P3 x0 = domain.sample_boundary(rng);
      double wi = 0.0, we = 0.0;
      Json ladder = Json::array();
      for (int k = 0; k < kScales; ++k) {
        double r = r0 / double(1 << k);
        auto ci = search_corkscrew(domain, x0, r, true, rng, 160);
        auto ce = search_corkscrew(domain, x0, r, false, rng, 160);
        double mi = ci.found ? ci.m_eff : std::numeric_limits<double>::infinity();
        double me = ce.found ? ce.m_eff : std::numeric_limits<double>::infinity();
        wi = std::max(wi, mi);
        we = std::max(we, me);
        ladder.push_back({{"r", r},
                          {"M_int", ci.found ? Json(mi) : Json("inf")},
                          {"M_ext", ce.found ? Json(me) : Json("inf")}});
      }
      worst_int[i] = wi;
      worst_ext[i] = we;
      recs[i] = {{"x0", {x0.x, x0.y, x0.t}}, {"ladder", ladder}};
    }
  });
  rep.records = std::move(recs);
  double mi = *std::max_element(worst_int.begin(), worst_int.end());
  double me = *std::max_element(worst_ext.begin(), worst_ext.end());
  bool pi = mi <= m_hypothesis, pe = me <= m_hypothesis;
  rep.pass = pi && pe;
  rep.summary = {{"interior_M_effective", std::isinf(mi) ? Json("inf") : Json(mi)},
                 {"exterior_M_effective", std::isinf(me) ? Json("inf") : Json(me)},
                 {"interior_pass", pi},
                 {"exterior_pass", pe},
                 {"samples", n_samples}};
  rep.note("Harnack chain condition not probed (out of scope)");
  return rep;
}

}  // namespace heis
