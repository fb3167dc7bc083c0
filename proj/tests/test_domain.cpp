#include <doctest.h>

#include <cmath>

#include "heis/consts.hpp"
#include "heis/domain.hpp"
#include "heis/rng.hpp"

using namespace heis;
using h1::P3;

TEST_CASE("unit ball membership and boundary distance basics") {
  GaugeBall ball;
  CHECK(ball.contains(HPoint::identity(1)));
  CHECK(!ball.contains(HPoint::h1(1.2, 0, 0)));
  CHECK(ball.boundary_distance(HPoint::identity(1)) == doctest::Approx(1.0).epsilon(1e-9));

  // on-boundary points report ~0
  Rng rng(2);
  for (int i = 0; i < 40; ++i) {
    P3 q = ball.sample_boundary(rng);
    CHECK(ball.boundary_distance(q) <= 1e-6);
  }
}

TEST_CASE("boundary distance respects the gauge lower bound") {
  GaugeBall ball;
  Rng rng(3);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    P3 p = ball.sample_interior(rng);
    double d = ball.boundary_distance(p);
    double lower = 1.0 - h1::gauge(p);
    worst = std::max(worst, lower - d);
    // never exceeds the distance to any sampled boundary point: spot check
    if (i % 500 == 0) {
      P3 q = ball.sample_boundary(rng);
      CHECK(d <= h1::dist(p, q) + 1e-12);
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("boundary distance matches brute force over the cloud") {
  GaugeBall ball;
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    P3 p = ball.sample_interior(rng);
    double d = ball.boundary_distance(p);
    double brute = 1e300;
    for (const auto& q : ball.boundary_cloud()) brute = std::min(brute, h1::dist(p, q));
    CHECK(d <= brute + 0.01);
    CHECK(d >= brute - 0.15);  // cloud gauge resolution is anisotropic near the poles
  }
}

TEST_CASE("characteristic set of gauge balls") {
  GaugeBall unit;
  auto cs = unit.characteristic_set();
  CHECK(dist(cs[0], HPoint::h1(0, 0, 1)) <= 1e-15);
  CHECK(dist(cs[1], HPoint::h1(0, 0, -1)) <= 1e-15);

  GaugeBall big(HPoint::identity(1), 2.0, 500);
  cs = big.characteristic_set();
  CHECK(dist(cs[0], HPoint::h1(0, 0, 4)) <= 1e-15);

  HPoint c = HPoint::h1(0.3, -0.2, 0.1);
  GaugeBall moved(c, 1.0, 500);
  cs = moved.characteristic_set();
  CHECK(dist(cs[0], mul(c, HPoint::h1(0, 0, 1))) <= 1e-15);
}

TEST_CASE("corkscrew points on the unit ball") {
  GaugeBall ball;
  HPoint x0 = HPoint::h1(1, 0, 0);
  auto res = ball.corkscrew_point(x0, 0.1);
  CHECK(res.point[0] == doctest::Approx(0.9));
  CHECK(res.achieved_distance_to_vertex == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(res.achieved_distance_to_vertex <= res.r + 1e-12);
  CHECK(res.achieved_distance_to_boundary > 0.0);

  // scale ladder: single effective M
  Rng rng(8);
  double m_eff = 0;
  for (int k = 2; k <= 7; ++k) {
    double r = std::pow(2.0, -k);
    for (int i = 0; i < 8; ++i) {
      double phi = rng.uniform(-1.1, 1.1);
      double theta = rng.uniform(0, 2 * M_PI);
      P3 q = ball.boundary_point(phi, theta);
      HPoint x(h1::to_hpoint(q));
      if (x.zmod() < 0.1) continue;
      auto c = ball.corkscrew_point(x, r);
      CHECK(c.achieved_distance_to_vertex <= r + 1e-12);
      m_eff = std::max(m_eff, c.m_effective);
    }
  }
  CHECK(m_eff < 12.0);  // finite effective constant across the ladder

  CHECK_THROWS_AS(ball.corkscrew_point(HPoint::h1(0, 0, 1), 0.1), CharacteristicError);
}

TEST_CASE("cone membership: corkscrew inside, monotone in aperture") {
  GaugeBall ball;
  HPoint x0 = HPoint::h1(1, 0, 0);
  auto cs = ball.corkscrew_point(x0, 0.05);
  double m = cs.m_effective;
  ConeSpec narrow{x0, std::max(0.5, m - 1.0), {}};
  CHECK(cone_contains(narrow, ball, cs.point));

  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    P3 y = ball.sample_interior(rng);
    ConeSpec c1{x0, 0.5, {}}, c2{x0, 1.5, {}};
    bool in1 = cone_contains(c1, ball, h1::to_hpoint(y));
    bool in2 = cone_contains(c2, ball, h1::to_hpoint(y));
    if (in1) CHECK(in2);  // monotone in alpha
    // truncation is antitone
    ConeSpec c3{x0, 1.5, 0.2};
    if (cone_contains(c3, ball, h1::to_hpoint(y))) CHECK(in2);
  }
  // boundary points are excluded (strict inequality)
  ConeSpec c{x0, 1.0, {}};
  CHECK(!cone_contains(c, ball, HPoint::h1(1, 0, 0)));
}

TEST_CASE("surface area of the unit gauge sphere vs MC oracle") {
  GaugeBall ball;
  double quad = ball.surface_integral(SurfaceKind::euclidean_h2, [](const P3&) { return 1.0; });

  // independent oracle: MC over the parametrization with finite-difference
  // tangents (no analytic area element shared with the quadrature)
  Rng rng(17);
  double acc = 0;
  int n = 200000;
  double dh = 1e-5;
  for (int i = 0; i < n; ++i) {
    double phi = rng.uniform(-M_PI / 2, M_PI / 2);
    double theta = rng.uniform(0, 2 * M_PI);
    P3 pp = ball.boundary_point(phi + dh, theta), pm = ball.boundary_point(phi - dh, theta);
    P3 tp = ball.boundary_point(phi, theta + dh), tm = ball.boundary_point(phi, theta - dh);
    double ux = (pp.x - pm.x) / (2 * dh), uy = (pp.y - pm.y) / (2 * dh), ut = (pp.t - pm.t) / (2 * dh);
    double vx = (tp.x - tm.x) / (2 * dh), vy = (tp.y - tm.y) / (2 * dh), vt = (tp.t - tm.t) / (2 * dh);
    double cx = uy * vt - ut * vy, cy = ut * vx - ux * vt, ct = ux * vy - uy * vx;
    acc += std::sqrt(cx * cx + cy * cy + ct * ct);
  }
  double mc = acc / n * M_PI * 2 * M_PI;
  CHECK(std::abs(quad - mc) / mc <= 0.005);

  CHECK(ball.surface_integral(SurfaceKind::euclidean_h2, [](const P3&) { return 0.0; }) == 0.0);
}

TEST_CASE("3-regularity of the metric proxy measure") {
  GaugeBall ball;
  P3 x0{1, 0, 0};
  // log-log slope across the dyadic ladder
  double prev = 0;
  std::vector<double> slopes;
  for (int k = 2; k <= 6; ++k) {
    double r = std::pow(2.0, -k);
    double s = ball.surface_ball_measure(SurfaceKind::metric_regular_proxy, x0, r);
    CHECK(s > 0.0);
    if (prev > 0) slopes.push_back(std::log2(prev / s));
    prev = s;
  }
  for (double sl : slopes) CHECK(sl == doctest::Approx(3.0).epsilon(0.2 / 3.0));

  // counting proxy agrees with the density proxy at moderate radii
  double a = ball.surface_ball_measure(SurfaceKind::metric_regular_proxy, x0, 0.25);
  double c = ball.counting_proxy_measure(x0, 0.25);
  double a2 = ball.surface_ball_measure(SurfaceKind::metric_regular_proxy, x0, 0.5);
  double c2 = ball.counting_proxy_measure(x0, 0.5);
  CHECK((a2 / a) == doctest::Approx(c2 / c).epsilon(0.35));
}

TEST_CASE("euclidean surface measure of gauge patches also scales ~ r^3 off the poles") {
  GaugeBall ball;
  P3 x0{1, 0, 0};
  double m1 = ball.surface_ball_measure(SurfaceKind::euclidean_h2, x0, 0.25);
  double m2 = ball.surface_ball_measure(SurfaceKind::euclidean_h2, x0, 0.125);
  CHECK(std::log2(m1 / m2) == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("nta probe passes on the unit ball") {
  GaugeBall ball(HPoint::identity(1), 1.0, 2500);
  auto rep = nta_probe(ball, 60.0, 0.25, 12, 99, 2);
  CHECK(rep.pass);
  CHECK(rep.summary["interior_pass"].get<bool>());
  CHECK(rep.summary["exterior_pass"].get<bool>());

  auto empty = nta_probe(ball, 10.0, 0.25, 0, 99);
  CHECK(empty.pass);
}

TEST_CASE("nta probe detects the slit-box corkscrew failure") {
  // removing a thick slab leaves a 0.01-wide blind strip against the x = 1
  // wall; near the slab end face every reachable domain point lies in the
  // strip, so the interior corkscrew fails at scales far above the width.
  // chambers above and below the slab are unreachable within gauge r: the
  // t-offset 0.5 costs sqrt(0.5) in the gauge
  Box slit({-1, -1, -1}, {1, 1, 1}, {-0.9, -1.1, -0.5}, {0.99, 1.1, 0.5}, 400);
  auto rep = nta_probe(slit, 25.0, 0.2, 40, 7, 2);
  CHECK(!rep.summary["interior_pass"].get<bool>());
  // the complement (slab plus outside) stays corkscrew-accessible
  CHECK(rep.summary["exterior_pass"].get<bool>());
}

TEST_CASE("lebesgue volume constant of the unit ball") {
  GaugeBall ball;
  Rng rng(71);
  int in = 0, n = 400000;
  for (int i = 0; i < n; ++i) {
    P3 w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (h1::gauge(w) < 1.0) ++in;
  }
  double vol = 8.0 * in / n;
  CHECK(vol == doctest::Approx(kUnitBallVolume).epsilon(0.01));
  CHECK(ball.lebesgue_volume() == doctest::Approx(kUnitBallVolume));
}
