#include <doctest.h>

#include <cmath>

#include "heis/calculus.hpp"
#include "heis/point.hpp"
#include "heis/radial.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

HPoint random_point(Rng& rng, double scale, int n = 1) {
  std::vector<double> c(2 * n + 1);
  for (auto& v : c) v = rng.uniform(-scale, scale);
  return HPoint(std::move(c));
}

}  // namespace

TEST_CASE("group law worked example and axioms") {
  // (1,0,0)(0,1,0) = (1,1,-2): 2 Im(1 * conj(i)) = -2
  HPoint p = HPoint::h1(1, 0, 0), q = HPoint::h1(0, 1, 0);
  HPoint pq = mul(p, q);
  CHECK(pq[0] == doctest::Approx(1.0));
  CHECK(pq[1] == doctest::Approx(1.0));
  CHECK(pq[2] == doctest::Approx(-2.0));

  HPoint e = HPoint::identity(1);
  CHECK(dist(mul(e, p), p) == 0.0);

  Rng rng(101);
  double worst_assoc = 0, worst_inv = 0;
  for (int i = 0; i < 100000; ++i) {
    HPoint a = random_point(rng, 10), b = random_point(rng, 10), c = random_point(rng, 10);
    HPoint lhs = mul(mul(a, b), c), rhs = mul(a, mul(b, c));
    for (int k = 0; k < 3; ++k) worst_assoc = std::max(worst_assoc, std::abs(lhs[k] - rhs[k]));
    HPoint ii = mul(a, inverse(a));
    for (int k = 0; k < 3; ++k) worst_inv = std::max(worst_inv, std::abs(ii[k]));
  }
  CHECK(worst_assoc <= 1e-12);
  CHECK(worst_inv <= 1e-12);
}

TEST_CASE("inverse is negation and involution") {
  HPoint p = HPoint::h1(1, 2, 3);
  HPoint ip = inverse(p);
  CHECK(ip[0] == -1.0);
  CHECK(ip[1] == -2.0);
  CHECK(ip[2] == -3.0);
  CHECK(inverse(inverse(p)) == p);
  CHECK(inverse(HPoint::identity(1)) == HPoint::identity(1));
}

TEST_CASE("dimension mismatch is rejected") {
  HPoint p = HPoint::h1(1, 0, 0);
  HPoint q = HPoint::identity(2);
  CHECK_THROWS_AS(mul(p, q), DimensionError);
  CHECK_THROWS_AS(dist(p, q), DimensionError);
}

TEST_CASE("gauge norm and dilation homogeneity") {
  CHECK(gauge_norm(HPoint::h1(0, 0, 4)) == doctest::Approx(2.0));
  CHECK(gauge_norm(HPoint::h1(1, 0, 0)) == doctest::Approx(1.0));
  CHECK(gauge_norm(HPoint::identity(1)) == 0.0);

  HPoint d = dilate(2.0, HPoint::h1(1, 0, 1));
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[2] == doctest::Approx(4.0));
  CHECK_THROWS_AS(dilate(0.0, d), std::domain_error);
  CHECK_THROWS_AS(dilate(-1.0, d), std::domain_error);

  Rng rng(7);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    HPoint p = random_point(rng, 5);
    double rho = rng.uniform(0.1, 3.0);
    double g = gauge_norm(p);
    if (g < 1e-9) continue;
    worst = std::max(worst, std::abs(gauge_norm(dilate(rho, p)) - rho * g) / (rho * g));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("distance: metric axioms, left invariance") {
  CHECK(dist(HPoint::identity(1), HPoint::h1(0, 0, 4)) == doctest::Approx(2.0));

  Rng rng(11);
  double worst_tri = 0, worst_sym = 0, worst_li = 0;
  for (int i = 0; i < 100000; ++i) {
    HPoint a = random_point(rng, 10), b = random_point(rng, 10), c = random_point(rng, 10);
    double ab = dist(a, b), ba = dist(b, a), ac = dist(a, c), cb = dist(c, b);
    worst_sym = std::max(worst_sym, std::abs(ab - ba));
    worst_tri = std::max(worst_tri, ab - ac - cb);
    CHECK(dist(a, a) == 0.0);
    if (i < 10000) {
      HPoint g = random_point(rng, 10);
      worst_li = std::max(worst_li, std::abs(dist(mul(g, a), mul(g, b)) - ab));
    }
  }
  CHECK(worst_sym <= 1e-12);
  CHECK(worst_tri <= 1e-12);
  CHECK(worst_li <= 1e-10);
}

TEST_CASE("horizontal frame rows") {
  auto rows = frame(HPoint::identity(1));
  CHECK(rows[0] == std::vector<double>{1, 0, 0});
  CHECK(rows[1] == std::vector<double>{0, 1, 0});
  rows = frame(HPoint::h1(1, 2, 0));
  CHECK(rows[0] == std::vector<double>{1, 0, 4});
  CHECK(rows[1] == std::vector<double>{0, 1, -2});
}

TEST_CASE("commutator of X and Y along flows") {
  // group commutator of the flows: exp(hX) exp(hY) exp(-hX) exp(-hY) = (0,0,-4h^2),
  // so the difference quotient of f = t is exactly -4
  auto comm_quotient = [](const HPoint& p, const ScalarFn& f, double h) {
    HPoint q = p;
    q = mul(q, HPoint::h1(h, 0, 0));
    q = mul(q, HPoint::h1(0, h, 0));
    q = mul(q, HPoint::h1(-h, 0, 0));
    q = mul(q, HPoint::h1(0, -h, 0));
    return (f(q) - f(p)) / (h * h);
  };
  ScalarFn ft = [](const HPoint& p) { return p.t(); };
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    HPoint p = random_point(rng, 2);
    CHECK(comm_quotient(p, ft, 1e-3) == doctest::Approx(-4.0).epsilon(1e-6));
  }
  // Nested central differences along the flows; exact on f = t, O(h^2) on a
  // function with genuine third derivatives, which carries the order check.
  auto commutator_fd = [](const HPoint& p, const ScalarFn& f, double h) {
    auto flow = [](const HPoint& q, double dx, double dy) { return mul(q, HPoint::h1(dx, dy, 0)); };
    auto dY = [&](const HPoint& q) { return (f(flow(q, 0, h)) - f(flow(q, 0, -h))) / (2 * h); };
    auto dX = [&](const HPoint& q) { return (f(flow(q, h, 0)) - f(flow(q, -h, 0))) / (2 * h); };
    double xy = (dY(flow(p, h, 0)) - dY(flow(p, -h, 0))) / (2 * h);
    double yx = (dX(flow(p, 0, h)) - dX(flow(p, 0, -h))) / (2 * h);
    return xy - yx;
  };
  for (int i = 0; i < 50; ++i) {
    HPoint p = random_point(rng, 2);
    CHECK(commutator_fd(p, ft, 1e-3) == doctest::Approx(-4.0).epsilon(1e-9));
  }
  ScalarFn fc = [](const HPoint& p) {
    return p.t() * (1.0 + p.x(0) * p.x(0)) + std::sin(p.y(0)) * std::cos(p.t());
  };
  ScalarFn fc_t = [](const HPoint& p) {
    return (1.0 + p.x(0) * p.x(0)) - std::sin(p.y(0)) * std::sin(p.t());
  };
  double r1 = 0, r2 = 0;
  for (int i = 0; i < 200; ++i) {
    HPoint p = random_point(rng, 1.5);
    double target = -4.0 * fc_t(p);  // [X,Y] f = -4 df/dt
    r1 = std::max(r1, std::abs(commutator_fd(p, fc, 2e-3) - target));
    r2 = std::max(r2, std::abs(commutator_fd(p, fc, 1e-3) - target));
  }
  double ratio = r1 / r2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("horizontal gradient by frame differences") {
  ScalarFn fx = [](const HPoint& p) { return p.x(0); };
  HVector g = horizontal_gradient(fx, HPoint::h1(0.3, -0.2, 0.5));
  CHECK(g.a[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(g.b[0] == doctest::Approx(0.0).epsilon(1e-8));

  ScalarFn ft = [](const HPoint& p) { return p.t(); };
  g = horizontal_gradient(ft, HPoint::h1(1, 2, 0));
  CHECK(g.a[0] == doctest::Approx(4.0).epsilon(1e-8));   // X t = 2y
  CHECK(g.b[0] == doctest::Approx(-2.0).epsilon(1e-8));  // Y t = -2x
  CHECK(g.hnorm() == doctest::Approx(std::sqrt(20.0)).epsilon(1e-8));

  ScalarFn fc = [](const HPoint&) { return 3.5; };
  g = horizontal_gradient(fc, HPoint::h1(1, 2, 0));
  CHECK(g.hnorm() <= 1e-10);
}

TEST_CASE("sub-Laplacian pointwise values") {
  ScalarFn fx = [](const HPoint& p) { return p.x(0); };
  CHECK(std::abs(sub_laplacian_apply(fx, HPoint::h1(0.4, 0.1, -0.3))) <= 1e-6);

  ScalarFn fr = [](const HPoint& p) { return p.x(0) * p.x(0) + p.y(0) * p.y(0); };
  CHECK(sub_laplacian_apply(fr, HPoint::h1(0.4, 0.1, -0.3)) == doctest::Approx(4.0).epsilon(1e-6));

  // Folland-type fundamental solution is harmonic off the pole (Q = 4)
  ScalarFn gamma = [](const HPoint& p) { return 1.0 / (gauge_norm(p) * gauge_norm(p)); };
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    HPoint p = random_point(rng, 1.0);
    double g = gauge_norm(p);
    if (g < 0.4) continue;
    CHECK(std::abs(sub_laplacian_apply(gamma, p, 1e-4)) <= 1e-4);
  }
}

TEST_CASE("radial curves: endpoint, norm, horizontality order") {
  HPoint omega = HPoint::h1(1, 0, 0);
  HPoint g = radial_curve(omega, 0.5);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK(g[2] == doctest::Approx(0.0));
  CHECK(dist(radial_curve(omega, 1.0), omega) <= 1e-15);

  Rng rng(23);
  double worst_norm = 0;
  double res_h = 0, res_h2 = 0;
  for (int i = 0; i < 1000; ++i) {
    double phi = rng.uniform(-1.2, 1.2);
    double theta = rng.uniform(0, 2 * M_PI);
    double rho = std::sqrt(std::cos(phi));
    HPoint w = HPoint::h1(rho * std::cos(theta), rho * std::sin(theta), std::sin(phi));
    double s = rng.uniform(0.3, 0.97);
    worst_norm = std::max(worst_norm, std::abs(gauge_norm(radial_curve(w, s)) - s));
    res_h = std::max(res_h, radial_horizontality_residual(w, s, 1e-3));
    res_h2 = std::max(res_h2, radial_horizontality_residual(w, s, 5e-4));
  }
  CHECK(worst_norm <= 1e-12);
  double ratio = res_h / res_h2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);

  CHECK_THROWS_AS(RadialCurveParams(HPoint::h1(0, 0, 1), 0.5), CharacteristicError);
  CHECK_THROWS_AS(RadialCurveParams(HPoint::h1(0.5, 0, 0), 0.5), PreconditionError);
}

TEST_CASE("boundary projection inverts the radial curve") {
  HPoint w = boundary_projection(HPoint::h1(0.5, 0, 0));
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(std::abs(w[1]) <= 1e-15);
  CHECK(std::abs(w[2]) <= 1e-15);

  Rng rng(31);
  double worst = 0;
  int tested = 0;
  for (int i = 0; i < 5000 && tested < 1000; ++i) {
    HPoint x = random_point(rng, 0.6);
    double s = gauge_norm(x);
    if (s < 0.05 || s > 0.95 || x.zmod() < 0.02) continue;
    ++tested;
    HPoint omega = boundary_projection(x);
    CHECK(std::abs(gauge_norm(omega) - 1.0) <= 1e-12);
    HPoint back = radial_curve(omega, s);
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(back[k] - x[k]));
  }
  CHECK(tested >= 1000);
  CHECK(worst <= 1e-9);

  CHECK_THROWS_AS(boundary_projection(HPoint::h1(0, 0, 0.25)), CharacteristicError);
}

TEST_CASE("group operations work for n = 2") {
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    HPoint a = random_point(rng, 3, 2), b = random_point(rng, 3, 2);
    CHECK(dist(mul(a, b), mul(a, b)) == 0.0);
    HPoint e = mul(a, inverse(a));
    CHECK(gauge_norm(e) <= 1e-12);
    double rho = rng.uniform(0.5, 2.0);
    CHECK(gauge_norm(dilate(rho, a)) ==
          doctest::Approx(rho * gauge_norm(a)).epsilon(1e-12));
  }
}
