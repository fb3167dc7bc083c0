#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <sstream>

#include "heis/bmo.hpp"
#include "heis/checks.hpp"
#include "heis/functionals.hpp"
#include "heis/measure.hpp"
#include "heis/suites.hpp"

using namespace heis;
using h1::P3;

TEST_CASE("measure ball masses: zero, lebesgue scaling, atoms") {
  GaugeBall ball;
  Rng rng(3);

  MeasureRep zero;
  zero.density = [](const P3&) { return 0.0; };
  CHECK(zero.ball_mass(ball, {1, 0, 0}, 0.25, rng) == 0.0);

  // Lebesgue mass of a ball well inside the domain is the exact volume
  MeasureRep leb = MeasureRep::lebesgue();
  double got = leb.ball_mass(ball, {0, 0, 0}, 0.4, rng);
  double want = kUnitBallVolume * std::pow(0.4, 4);
  CHECK(got == doctest::Approx(want).epsilon(0.02));

  MeasureRep atoms = MeasureRep::dyadic_radial_atoms(HPoint::h1(1, 0, 0), 3, 10);
  double total = atoms.total_mass(ball, rng);
  double expect = 0;
  for (int k = 3; k <= 10; ++k) expect += std::pow(2.0, -2 * k);
  CHECK(total == doctest::Approx(expect));
}

TEST_CASE("carleson ladder: lebesgue flat at the homogeneous exponent") {
  GaugeBall ball;
  CarlesonLadderSpec spec;
  spec.fixed_base_points = {P3{1, 0, 0}, ball.boundary_point(0.4, 2.2)};
  spec.k_min = 2;
  spec.k_max = 6;
  auto rep = carleson_constant(MeasureRep::lebesgue(), ball, 4.0 / 3.0, 3.0, spec, 11);
  double lo = 1e300, hi = 0;
  for (const auto& rung : rep.ladder) {
    lo = std::min(lo, rung.ratio);
    hi = std::max(hi, rung.ratio);
  }
  CHECK(lo > 0);
  CHECK(hi / lo <= 2.5);

  // against r^3 the sup is finite and attained at the largest radius
  auto rep3 = carleson_constant(MeasureRep::lebesgue(), ball, 1.0, 3.0, spec, 11);
  CHECK(rep3.sup_ratio > 0);
  CHECK(std::isfinite(rep3.sup_ratio));
}

TEST_CASE("carleson ladder: dyadic atoms have unit log2 slope") {
  GaugeBall ball;
  CarlesonLadderSpec spec;
  spec.fixed_base_points = {P3{1, 0, 0}};
  spec.k_min = 3;
  spec.k_max = 8;
  auto rep = carleson_constant(MeasureRep::dyadic_radial_atoms(HPoint::h1(1, 0, 0), 3, 10), ball,
                               1.0, 3.0, spec, 11);
  auto slopes = rep.level_slopes();
  CHECK(int(slopes.size()) >= 5);
  for (double s : slopes) CHECK(s == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("cone functionals reject interior vertices") {
  GaugeBall ball;
  ConeSpec bad{HPoint::h1(0.3, 0, 0), 1.0, {}};
  ConeSampleOptions opt;
  CHECK_THROWS_AS(nontangential_max([](const P3&) { return 1.0; }, bad, ball, opt),
                  PreconditionError);
}

TEST_CASE("nontangential max: constants, monotonicity in aperture") {
  GaugeBall ball;
  ConeSpec narrow{HPoint::h1(1, 0, 0), 0.7, {}};
  ConeSpec wide{HPoint::h1(1, 0, 0), 2.0, {}};
  ConeSampleOptions opt;
  opt.seed = 5;

  auto c = nontangential_max([](const P3&) { return -2.5; }, narrow, ball, opt);
  CHECK(c.value == 2.5);

  auto vx_n = nontangential_max([](const P3& q) { return q.x; }, narrow, ball, opt);
  auto vx_w = nontangential_max([](const P3& q) { return q.x; }, wide, ball, opt);
  CHECK(vx_n.value <= vx_w.value + 1e-12);  // same seed tree, wider cone
  CHECK(vx_n.value <= 1.0);
  CHECK(vx_n.value > 0.3);  // the cone sees points with x close to the vertex
}

TEST_CASE("square function: constants vanish, coordinate field cross-check") {
  GaugeBall ball;
  auto dom = std::make_shared<const GaugeBall>(ball);
  auto grid = std::make_shared<const Grid>(dom, P3{-1, -1, -1}, P3{1, 1, 1}, 1.0 / 16);
  SubLaplacian op(grid);
  SolveOptions sopt;
  sopt.workers = 2;

  ScalarField uc = op.solve_dirichlet([](const P3&, AnchorKind) { return 1.5; }, sopt);
  ConeSpec cone{HPoint::h1(1, 0, 0), 1.0, {}};
  SquareFunctionOptions so;
  so.seed = 5;
  auto sc = square_function(uc, cone, ball, so);
  CHECK(sc.value <= 1e-4);

  // u = x has |grad_H u| = 1: the square function equals the cone-weighted
  // volume integral of d^{-2}; cross-check against the direct MC route
  ScalarField ux = op.solve_dirichlet([](const P3& q, AnchorKind) { return q.x; }, sopt);
  so.per_shell = 800;
  auto sx = square_function(ux, cone, ball, so);
  double direct = cone_weighted_integral_mc([](const P3&) { return 1.0; }, cone, ball,
                                            4.0 * grid->h(), 800, 99);
  CHECK(sx.value * sx.value == doctest::Approx(direct).epsilon(0.15));
  CHECK(sx.value > 0);
}

TEST_CASE("square function and N_alpha grow with the aperture") {
  GaugeBall ball;
  auto dom = std::make_shared<const GaugeBall>(ball);
  auto grid = std::make_shared<const Grid>(dom, P3{-1, -1, -1}, P3{1, 1, 1}, 1.0 / 16);
  SubLaplacian op(grid);
  SolveOptions sopt;
  sopt.workers = 2;
  ScalarField u = op.solve_dirichlet([](const P3& q, AnchorKind) { return q.x; }, sopt);
  SquareFunctionOptions so;
  so.seed = 31;
  so.per_shell = 500;
  ConeSpec narrow{HPoint::h1(1, 0, 0), 0.5, {}};
  ConeSpec wide{HPoint::h1(1, 0, 0), 2.0, {}};
  auto sn = square_function(u, narrow, ball, so);
  auto sw = square_function(u, wide, ball, so);
  CHECK(sw.value > sn.value);

  // truncation is antitone for the square function
  ConeSpec trunc{HPoint::h1(1, 0, 0), 2.0, 0.3};
  auto st = square_function(u, trunc, ball, so);
  CHECK(st.value <= sw.value + 3.0 * (st.std_error + sw.std_error));
}

TEST_CASE("carleson report exports a CSV ladder") {
  GaugeBall ball;
  CarlesonLadderSpec spec;
  spec.fixed_base_points = {P3{1, 0, 0}};
  spec.k_min = 2;
  spec.k_max = 4;
  auto rep = carleson_constant(MeasureRep::dyadic_radial_atoms(HPoint::h1(1, 0, 0), 3, 8), ball,
                               1.0, 3.0, spec, 11)
                 .to_check_report("csv_probe");
  std::ostringstream csv;
  rep.write_csv(csv);
  std::string out = csv.str();
  CHECK(out.find("r,mass,ratio") != std::string::npos);
  CHECK(std::count(out.begin(), out.end(), '\n') == 4);  // header + 3 rungs
}

TEST_CASE("mobius integral: additivity in atoms and mass homogeneity") {
  GaugeBall ball;
  Rng rng(21);
  auto cfg = sample_admissible_config(rng, ball);
  ImageBoundary img(cfg.params, ball, 1200);

  MeasureRep a1 = MeasureRep::boundary_atom(HPoint::h1(1, 0, 0), 0.05, 0.7);
  MeasureRep a2 = MeasureRep::boundary_atom(HPoint::h1(0, 1, 0), 0.08, 0.4);
  MeasureRep sum;
  sum.atoms = a1.atoms;
  sum.atoms.insert(sum.atoms.end(), a2.atoms.begin(), a2.atoms.end());

  double v1 = mobius_integral(a1, cfg, ball, img, 5);
  double v2 = mobius_integral(a2, cfg, ball, img, 5);
  double vs = mobius_integral(sum, cfg, ball, img, 5);
  CHECK(vs == doctest::Approx(v1 + v2).epsilon(1e-9));

  MeasureRep scaled = a1;
  scaled.atoms[0].second *= 3.0;
  CHECK(mobius_integral(scaled, cfg, ball, img, 5) == doctest::Approx(3.0 * v1).epsilon(1e-9));

  // single atom at the map zero: the integrand is (m_empirical / d(x, dB))^3
  MeasureRep at_zero;
  at_zero.atoms.emplace_back(h1::from_hpoint(cfg.params.x), 1.0);
  double v0 = mobius_integral(at_zero, cfg, ball, img, 5);
  double dxb = ball.boundary_distance(h1::from_hpoint(cfg.params.x));
  double predicted = std::pow(img.min_norm() / dxb, 3);
  CHECK(v0 == doctest::Approx(predicted).epsilon(0.25));
}

TEST_CASE("comparability ratio stays within a reported band") {
  GaugeBall ball;
  Rng rng(31);
  HPoint omega = HPoint::h1(1, 0, 0);
  // property-(4) geometry: a moderately outside near omega, r below the
  // exterior clearance of a
  double r = 0.08;
  TMapParams prm(HPoint::h1(0.85, 0, 0), HPoint::h1(1.15, 0, 0), 0.07);
  CHECK(h1::dist({1.15, 0, 0}, {1, 0, 0}) <= 4.0 * r);
  CHECK(ball.boundary_distance(HPoint::h1(1.15, 0, 0)) >= 1.05 * r);
  ImageBoundary img(prm, ball, 2500);

  double worst_hi = 0, worst_lo = 1e300;
  int tested = 0;
  for (int i = 0; i < 200 && tested < 12; ++i) {
    P3 w;
    do {
      w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    } while (h1::gauge(w) >= 1.0);
    P3 y = h1::mul({1, 0, 0}, h1::dil(r, w));
    if (!ball.contains(y)) continue;
    double q = comparability_ratio(prm, h1::to_hpoint(y), ball, img, omega, r);
    worst_hi = std::max(worst_hi, q);
    worst_lo = std::min(worst_lo, q);
    ++tested;
  }
  CHECK(tested >= 12);
  CHECK(worst_lo > 0.02);
  CHECK(worst_hi < 50.0);

  // hypothesis violations are rejected
  CHECK_THROWS_AS(comparability_ratio(prm, HPoint::h1(0.2, 0, 0), ball, img, omega, 1e-6),
                  PreconditionError);
}

TEST_CASE("bmo: constants vanish, exemplar finite, base point invariance") {
  GaugeBall ball;
  WalkConfig wc;
  wc.dt = 4e-5;
  wc.seed = 17;
  wc.workers = 2;
  auto om = harmonic_measure({0, 0, 0}, ball, 6, 12, 6000, wc);
  BmoLadderSpec spec;
  int skipped = 0;
  double n0 = bmo_norm([](const P3&) { return 4.2; }, ball, om, spec, 3, &skipped);
  CHECK(n0 <= 1e-12);

  double nlog = bmo_norm(log_distance_exemplar({1, 0, 0}), ball, om, spec, 3, &skipped);
  CHECK(nlog > 0);
  CHECK(nlog < 5.0);

  // mollified indicator of the upper half-sphere: finite positive norm
  auto half = [](const P3& q) {
    double u = std::clamp((q.t + 0.05) / 0.1, 0.0, 1.0);
    return 3 * u * u - 2 * u * u * u;
  };
  double nhalf = bmo_norm(half, ball, om, spec, 3, &skipped);
  CHECK(nhalf > 0.0);
  CHECK(nhalf <= 0.5);  // oscillation of a [0,1]-valued function

  auto rep = bmo_basepoint_invariance(log_distance_exemplar({1, 0, 0}), ball, {0, 0, 0},
                                      {0.3, 0, 0}, 6000, wc, spec);
  CHECK(rep.pass);
}

TEST_CASE("identity suite wiring produces a full report") {
  auto rep = identity_suite(3, 2000);
  CHECK(rep.pass);
  CHECK(rep.records.size() == 10);
  std::ostringstream ss;
  rep.write_jsonl(ss);
  CHECK(ss.str().find("associativity") != std::string::npos);
}
