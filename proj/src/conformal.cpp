#include "heis/conformal.hpp"

#include <cmath>

#include "heis/detail/opt.hpp"
#include "heis/detail/sphere.hpp"

namespace heis {

using h1::P3;

P3 koranyi_inversion(const P3& y) {
  double z2 = h1::zmod2(y);
  double n4 = z2 * z2 + y.t * y.t;
  if (n4 == 0.0) throw PoleError("koranyi_inversion: pole at the identity");
  // z (|z|^2 + i t) = (x + iy)(|z|^2 + i t)
  double re = y.x * z2 - y.y * y.t;
  double im = y.y * z2 + y.x * y.t;
  return {-re / n4, -im / n4, -y.t / n4};
}

HPoint koranyi_inversion(const HPoint& y) {
  int n = y.n();
  double z2 = 0.0;
  for (int i = 0; i < n; ++i) z2 += y.x(i) * y.x(i) + y.y(i) * y.y(i);
  double n4 = z2 * z2 + y.t() * y.t();
  if (n4 == 0.0) throw PoleError("koranyi_inversion: pole at the identity");
  std::vector<double> c(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    c[2 * i] = -(y.x(i) * z2 - y.y(i) * y.t()) / n4;
    c[2 * i + 1] = -(y.y(i) * z2 + y.x(i) * y.t()) / n4;
  }
  c[2 * n] = -y.t() / n4;
  return HPoint(std::move(c));
}

TMapParams::TMapParams(HPoint x_, HPoint a_, double rho_, bool allow_hn_)
    : x(std::move(x_)), a(std::move(a_)), rho(rho_), allow_hn(allow_hn_) {
  require_same_group(x, a);
  if (!(rho > 0.0)) throw std::domain_error("TMapParams: rho must be positive");
  if (dist(x, a) == 0.0) throw std::invalid_argument("TMapParams: a must differ from x");
  if (x.n() != 1 && !allow_hn)
    throw DimensionError("TMapParams: n >= 2 requires the allow_hn capability flag");
}

P3 t_map(const TMapParams& prm, const P3& y) {
  P3 x = h1::from_hpoint(prm.x), a = h1::from_hpoint(prm.a);
  P3 ay = h1::mul(h1::inv(a), y);
  if (h1::gauge(ay) == 0.0) throw PoleError("t_map: evaluation at the pole a");
  P3 cx = koranyi_inversion(h1::mul(h1::inv(a), x));
  return h1::dil(prm.rho, h1::mul(h1::inv(cx), koranyi_inversion(ay)));
}

HPoint t_map(const TMapParams& prm, const HPoint& y) {
  require_same_group(prm.x, y);
  if (y.n() == 1) return h1::to_hpoint(t_map(prm, h1::from_hpoint(y)));
  HPoint ay = mul(inverse(prm.a), y);
  if (gauge_norm(ay) == 0.0) throw PoleError("t_map: evaluation at the pole a");
  HPoint cx = koranyi_inversion(mul(inverse(prm.a), prm.x));
  return dilate(prm.rho, mul(inverse(cx), koranyi_inversion(ay)));
}

static void require_h1_closed_form(const TMapParams& prm, const char* what) {
  if (prm.x.n() != 1)
    throw DimensionError(std::string(what) + ": closed form known only for n = 1");
}

double t_map_norm(const TMapParams& prm, const HPoint& y) {
  require_h1_closed_form(prm, "t_map_norm");
  double day = dist(prm.a, y);
  if (day == 0.0) throw PoleError("t_map_norm: evaluation at the pole a");
  return prm.rho * dist(prm.x, y) / (day * dist(prm.a, prm.x));
}

double t_map_pair_distance(const TMapParams& prm, const HPoint& y, const HPoint& y2) {
  require_h1_closed_form(prm, "t_map_pair_distance");
  double day = dist(prm.a, y), day2 = dist(prm.a, y2);
  if (day == 0.0 || day2 == 0.0) throw PoleError("t_map_pair_distance: evaluation at the pole a");
  return prm.rho * dist(y, y2) / (day * day2);
}

double t_map_jacobian(const TMapParams& prm, const HPoint& y) {
  require_h1_closed_form(prm, "t_map_jacobian");
  double day = dist(prm.a, y);
  if (day == 0.0) throw PoleError("t_map_jacobian: evaluation at the pole a");
  return std::pow(prm.rho, 4) / std::pow(day, 8);
}

double t_map_jacobian_fd(const TMapParams& prm, const HPoint& y, double h) {
  require_h1_closed_form(prm, "t_map_jacobian_fd");
  P3 y0 = h1::from_hpoint(y);
  double J[3][3];
  for (int j = 0; j < 3; ++j) {
    P3 yp = y0, ym = y0;
    (j == 0 ? yp.x : j == 1 ? yp.y : yp.t) += h;
    (j == 0 ? ym.x : j == 1 ? ym.y : ym.t) -= h;
    P3 tp = t_map(prm, yp), tm = t_map(prm, ym);
    J[0][j] = (tp.x - tm.x) / (2 * h);
    J[1][j] = (tp.y - tm.y) / (2 * h);
    J[2][j] = (tp.t - tm.t) / (2 * h);
  }
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

// ---------------------------------------------------------------------------

ImageBoundary::ImageBoundary(const TMapParams& prm, const GaugeBall& ball, int cloud_size)
    : prm_(prm), ball_(&ball) {
  points_.reserve(cloud_size);
  phis_.reserve(cloud_size);
  thetas_.reserve(cloud_size);
  const double golden = 0.6180339887498949;
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (int i = 0; i < cloud_size; ++i) {
    double u = (i + 0.5) / cloud_size;
    double phi = M_PI * u - M_PI / 2.0;
    double theta = 2.0 * M_PI * std::fmod(golden * i, 1.0);
    P3 q = t_map(prm_, ball.boundary_point(phi, theta));
    points_.push_back(q);
    phis_.push_back(phi);
    thetas_.push_back(theta);
    double g = h1::gauge(q);
    mn = std::min(mn, g);
    mx = std::max(mx, g);
  }
  m_ = mn;
  M_ = mx;
}

double ImageBoundary::distance(const P3& q) const {
  // coarse scan on a stride, then full pass near the winner, then NM polish
  std::size_t best = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); i += 7) {
    double d = h1::dist(q, points_[i]);
    if (d < bestd) {
      bestd = d;
      best = i;
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double d = h1::dist(q, points_[i]);
    if (d < bestd) {
      bestd = d;
      best = i;
    }
  }
  auto f = [&](double phi, double theta) {
    double pc = std::clamp(phi, -M_PI / 2.0, M_PI / 2.0);
    return h1::dist(q, t_map(prm_, ball_->boundary_point(pc, theta)));
  };
  auto m = detail::nelder_mead_2d(f, phis_[best], thetas_[best], 0.03, 60);
  return std::min(bestd, m.value);
}

// ---------------------------------------------------------------------------

AdmissibleConfig sample_admissible_config(Rng& rng, const GaugeBall& ball,
                                          const AdmissibleSampleOptions& opt) {
  const double R = ball.radius();
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    P3 x;
    if (opt.localize) {
      // corkscrew-style pinning near a boundary point at the given scale
      auto cs = ball.corkscrew_point(opt.localize->first, opt.localize->second);
      x = h1::from_hpoint(cs.point);
    } else {
      P3 w;
      do {
        w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      } while (h1::gauge(w) >= 1.0);
      x = h1::mul(h1::from_hpoint(ball.center()), h1::dil(opt.x_radius * R, w));
    }
    double dx = ball.boundary_distance(x);
    if (dx <= 1e-6 * R) continue;

    // a sits just across the boundary, at gauge depth ~ d(x, dB) beyond it,
    // along a non-characteristic direction; localizing sweeps pin that
    // direction near the target boundary point so rho ~ d(a, x) can hold
    double phi, theta;
    if (opt.localize) {
      P3 womega = ball.local_unit(h1::from_hpoint(opt.localize->first));
      double phi0, theta0;
      detail::radial_projection_params(h1::dil(0.999999, womega), &phi0, &theta0);
      double spread = 2.0 * opt.localize->second / ball.radius();
      phi = std::clamp(phi0 + rng.uniform(-spread, spread), -1.45, 1.45);
      theta = theta0 + rng.uniform(-spread, spread);
    } else {
      phi = rng.uniform(-1.25, 1.25);  // keep |z| of the direction positive
      theta = rng.uniform(0.0, 2.0 * M_PI);
    }
    P3 unit = detail::sphere_point(phi, theta);
    double push = 1.0 + dx / R;
    P3 a = ball.world_from_unit(h1::dil(push, unit));
    double da = ball.boundary_distance(a);
    if (da <= 1e-6 * R) continue;

    double rho = opt.c_min * std::min(dx, da);
    double dax = h1::dist(a, x);
    double ratio = rho / dax;
    if (ratio < opt.ratio_lo || ratio > opt.ratio_hi) continue;

    AdmissibleConfig cfg{
        TMapParams(h1::to_hpoint(x), h1::to_hpoint(a), rho), opt.c_min, opt.ratio_lo,
        opt.ratio_hi, dx, da, dax};
    return cfg;
  }
  throw SamplingError("sample_admissible_config: rejection budget exhausted");
}

double comparability_ratio(const TMapParams& prm, const HPoint& y, const GaugeBall& ball,
                           const ImageBoundary& image, const HPoint& omega, double r,
                           double c_near, double c_far) {
  P3 a = h1::from_hpoint(prm.a), w = h1::from_hpoint(omega), yp = h1::from_hpoint(y);
  double daw = h1::dist(a, w);
  if (daw > c_near * r)
    throw PreconditionError("comparability_ratio: need d(a, omega) <= c r");
  double dab = ball.boundary_distance(a);
  if (dab < c_far * r || c_far <= 1.0)
    throw PreconditionError("comparability_ratio: need d(a, B) >= C r with C > 1");
  if (h1::dist(yp, w) > r || !ball.contains(yp))
    throw PreconditionError("comparability_ratio: y must lie in B(omega, r) ∩ B");

  double lhs = image.distance(t_map(prm, yp)) / ball.boundary_distance(yp);
  double day = h1::dist(yp, a);
  double rhs = prm.rho / (day * day);
  return lhs / rhs;
}

}  // namespace heis
