// Command-line orchestration: configuration, seeding, identity suites and
// theorem checks, JSON-lines reports and CSV ladders.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "heis/acceptance.hpp"
#include "heis/checks.hpp"
#include "heis/suites.hpp"

using namespace heis;

namespace {

struct Common {
  uint64_t seed = 0;
  int workers = 2;
  double grid_h = 1.0 / 32;
  long walks = 20000;
  std::string out;
  std::string csv;
  double radius = 1.0;
  std::vector<double> center = {0, 0, 0};
};

void add_common(CLI::App* cmd, Common& c, bool needs_seed = true) {
  cmd->configurable();  // reachable from the --config file as <command>.<key>
  auto* s = cmd->add_option("--seed", c.seed, "RNG seed (stochastic commands require it)");
  if (needs_seed) s->required();
  cmd->add_option("--workers", c.workers, "worker thread count");
  cmd->add_option("--grid-h", c.grid_h, "grid spacing");
  cmd->add_option("--walks", c.walks, "Monte Carlo walk budget");
  cmd->add_option("--out", c.out, "JSON-lines report path (default stdout)");
  cmd->add_option("--csv", c.csv, "CSV ladder export path");
  cmd->add_option("--radius", c.radius, "gauge ball radius");
  cmd->add_option("--center", c.center, "gauge ball center (x y t)")->expected(3);
}

GaugeBall make_ball(const Common& c) {
  return GaugeBall(HPoint::h1(c.center[0], c.center[1], c.center[2]), c.radius);
}

/// The theorem checkers ship with ladders calibrated to B(0, 1); other balls
/// are served by the library surface, not these commands.
int require_unit_ball(const Common& c) {
  if (c.radius != 1.0 || c.center[0] != 0 || c.center[1] != 0 || c.center[2] != 0) {
    std::cerr << "this command runs on the unit gauge ball at the origin\n";
    return 2;
  }
  return 0;
}

int emit(const std::vector<CheckReport>& reps, const Common& c) {
  bool all_pass = true;
  for (const auto& r : reps) all_pass = all_pass && r.pass;
  if (c.out.empty()) {
    for (const auto& r : reps) r.write_jsonl(std::cout);
  } else {
    std::ofstream os(c.out);
    if (!os) {
      std::cerr << "cannot open " << c.out << "\n";
      return 2;
    }
    for (const auto& r : reps) r.write_jsonl(os);
  }
  if (!c.csv.empty()) {
    std::ofstream os(c.csv);
    if (!os) {
      std::cerr << "cannot open " << c.csv << "\n";
      return 2;
    }
    for (const auto& r : reps) r.write_csv(os);
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heislab: numerical laboratory for potential theory on gauge balls of H^1"};
  app.set_config("--config", "", "flat key=value file; keys are <command>.<option>");
  app.require_subcommand(1);

  int exit_code = 0;
  auto run = [&exit_code](auto&& fn) {
    return [&exit_code, fn]() { exit_code = fn(); };
  };

  // identities
  {
    auto c = std::make_shared<Common>();
    auto n = std::make_shared<long>(10000);
    auto* cmd = app.add_subcommand("identities", "exact identity suite");
    add_common(cmd, *c);
    cmd->add_option("--samples", *n, "sample count");
    cmd->callback(run([c, n]() {
      return emit({identity_suite(c->seed, *n), jacobian_suite(c->seed, std::max(1L, *n / 10)),
                   radial_suite(c->seed, std::max(1L, *n / 10))},
                  *c);
    }));
  }
  // conformal diagnostics
  {
    auto c = std::make_shared<Common>();
    auto nc = std::make_shared<int>(20);
    auto* cmd = app.add_subcommand("conformal", "image-ball and comparability diagnostics");
    add_common(cmd, *c);
    cmd->add_option("--configs", *nc, "admissible configuration count");
    cmd->callback(run([c, nc]() {
      GaugeBall ball = make_ball(*c);
      CheckReport rep;
      rep.name = "conformal_diagnostics";
      rep.seed = c->seed;
      double worst_mm = 0, worst_iso = 0;
      Rng rng(c->seed);
      for (int i = 0; i < *nc; ++i) {
        auto cfg = sample_admissible_config(rng, ball);
        ImageBoundary img(cfg.params, ball, 1500);
        worst_mm = std::max(worst_mm, img.max_norm() / img.min_norm());
        // conformality proxy: isotropy of the metric differential over
        // horizontal directions
        double iso = 0;
        for (int k = 0; k < 4; ++k) {
          HPoint y = HPoint::h1(rng.uniform(-.5, .5), rng.uniform(-.5, .5), rng.uniform(-.5, .5));
          if (dist(cfg.params.a, y) < 0.3) continue;
          double h = 1e-6, mn = 1e300, mx = 0;
          for (int d = 0; d < 8; ++d) {
            double th = 2 * M_PI * d / 8.0;
            HPoint step = HPoint::h1(h * std::cos(th), h * std::sin(th), 0);
            double v = dist(t_map(cfg.params, mul(y, step)), t_map(cfg.params, y)) / h;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
          }
          iso = std::max(iso, mx / mn - 1.0);
        }
        worst_iso = std::max(worst_iso, iso);
        rep.records.push_back({{"rho", cfg.params.rho},
                               {"m", img.min_norm()},
                               {"M", img.max_norm()},
                               {"isotropy_defect", iso}});
      }
      // boundary-distance distortion band in a near-pole configuration
      TMapParams prm(HPoint::h1(0.85, 0, 0), HPoint::h1(1.15, 0, 0), 0.07);
      ImageBoundary img4(prm, ball, 2000);
      double qlo = 1e300, qhi = 0;
      for (int i = 0; i < 40; ++i) {
        h1::P3 w;
        do {
          w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        } while (h1::gauge(w) >= 1.0);
        h1::P3 y = h1::mul({1, 0, 0}, h1::dil(0.08, w));
        if (!ball.contains(y)) continue;
        double q = comparability_ratio(prm, h1::to_hpoint(y), ball, img4,
                                       HPoint::h1(1, 0, 0), 0.08);
        qlo = std::min(qlo, q);
        qhi = std::max(qhi, q);
      }
      rep.summary = {{"max_M_over_m", worst_mm},
                     {"max_isotropy_defect", worst_iso},
                     {"comparability_band", {qlo, qhi}},
                     {"configs", *nc}};
      rep.pass = std::isfinite(worst_mm) && worst_mm > 0 && worst_iso < 1e-2 && qlo > 0;
      return emit({rep}, *c);
    }));
  }
  // domain probe
  {
    auto c = std::make_shared<Common>();
    auto m = std::make_shared<double>(60.0);
    auto n = std::make_shared<int>(12);
    auto slit = std::make_shared<bool>(false);
    auto cloud_csv = std::make_shared<std::string>("");
    auto* cmd = app.add_subcommand("domain-probe", "empirical corkscrew (NTA) probe");
    add_common(cmd, *c);
    cmd->add_option("--m-hypothesis", *m, "NTA constant to test against");
    cmd->add_option("--samples", *n, "boundary sample count");
    cmd->add_flag("--slit-box", *slit, "probe the slit-box counterexample instead");
    cmd->add_option("--cloud-csv", *cloud_csv, "write the boundary cloud as x,y,t rows");
    cmd->callback(run([c, m, n, slit, cloud_csv]() {
      auto dump_cloud = [&](const Domain& d) {
        if (cloud_csv->empty()) return true;
        std::ofstream os(*cloud_csv);
        if (!os) return false;
        os << "x,y,t\n";
        for (const auto& q : d.boundary_cloud())
          os << q.x << "," << q.y << "," << q.t << "\n";
        return true;
      };
      if (*slit) {
        // thick removed slab with a thin blind strip against the x = 1 wall
        Box box({-1, -1, -1}, {1, 1, 1}, {-0.9, -1.1, -0.5}, {0.99, 1.1, 0.5}, 400);
        if (!dump_cloud(box)) return 2;
        return emit({nta_probe(box, *m, 0.2, *n, c->seed, c->workers)}, *c);
      }
      GaugeBall ball = make_ball(*c);
      if (!dump_cloud(ball)) return 2;
      return emit({nta_probe(ball, *m, 0.25, *n, c->seed, c->workers)}, *c);
    }));
  }
  // solve
  {
    auto c = std::make_shared<Common>();
    auto data = std::make_shared<std::string>("x");
    auto dump = std::make_shared<std::string>("");
    auto* cmd = app.add_subcommand("solve", "Dirichlet solve with named boundary data");
    add_common(cmd, *c, /*needs_seed=*/false);
    cmd->add_option("--data", *data, "boundary data: x|y|t|bump|log");
    cmd->add_option("--dump", *dump, "binary field dump path");
    cmd->callback(run([c, data, dump]() {
      GaugeBall ball = make_ball(*c);
      auto dom = std::make_shared<const GaugeBall>(ball);
      double R = ball.radius();
      h1::P3 ctr = h1::from_hpoint(ball.center());
      auto grid = std::make_shared<const Grid>(dom, h1::P3{ctr.x - R, ctr.y - R, ctr.t - R * R},
                                               h1::P3{ctr.x + R, ctr.y + R, ctr.t + R * R},
                                               c->grid_h);
      SubLaplacian op(grid);
      std::function<double(const h1::P3&)> f;
      if (*data == "x") f = [](const h1::P3& q) { return q.x; };
      else if (*data == "y") f = [](const h1::P3& q) { return q.y; };
      else if (*data == "t") f = [](const h1::P3& q) { return q.t; };
      else if (*data == "bump") f = bump_data({1, 0, 0}, 0.125, 1.0);
      else if (*data == "log") f = log_distance_exemplar({1, 0, 0});
      else {
        std::cerr << "unknown --data " << *data << "\n";
        return 2;
      }
      SolveOptions sopt;
      sopt.workers = c->workers;
      SolveStats st;
      ScalarField u =
          op.solve_dirichlet([&](const h1::P3& q, AnchorKind) { return f(q); }, sopt, &st);
      if (!dump->empty()) u.save_binary(*dump);
      if (!c->csv.empty()) u.save_csv_slice(c->csv, grid->nt() / 2);
      CheckReport rep;
      rep.name = "dirichlet_solve";
      rep.seed = c->seed;
      rep.params = {{"grid_h", c->grid_h}, {"data", *data}};
      rep.summary = {{"iterations", st.iterations},
                     {"relative_residual", st.relative_residual},
                     {"max_principle_overshoot", st.max_principle_overshoot},
                     {"unknowns", op.unknowns()}};
      rep.pass = st.relative_residual <= 1e-9;
      Common c2 = *c;
      c2.csv.clear();  // already written as a slice
      return emit({rep}, c2);
    }));
  }
  // walk
  {
    auto c = std::make_shared<Common>();
    auto dt = std::make_shared<double>(1e-5);
    auto* cmd = app.add_subcommand("walk", "exit-time walker diagnostics");
    add_common(cmd, *c);
    cmd->add_option("--dt", *dt, "Euler-Maruyama step");
    cmd->callback(run([c, dt]() {
      GaugeBall ball = make_ball(*c);
      WalkConfig wc;
      wc.dt = *dt;
      wc.seed = c->seed;
      wc.workers = c->workers;
      auto m = harmonic_measure(h1::from_hpoint(ball.center()), ball, 6, 12, c->walks, wc);
      CheckReport rep;
      rep.name = "walk_diagnostics";
      rep.seed = c->seed;
      rep.params = {{"dt", *dt}, {"walks", c->walks}};
      // rotation invariance: theta columns are exchangeable from the center
      std::vector<double> col(12, 0.0);
      for (int ip = 0; ip < 6; ++ip)
        for (int it = 0; it < 12; ++it) col[it] += double(m.hits[ip * 12 + it]);
      double expect = double(m.n_walks - m.censored) / 12.0;
      double chi2 = 0;
      for (double h : col) chi2 += (h - expect) * (h - expect) / std::max(1.0, expect);
      rep.summary = {{"mean_exit_time", m.mean_steps * *dt},
                     {"censored", m.censored},
                     {"theta_chi2", chi2},
                     {"theta_dof", 11}};
      rep.pass = m.censored <= m.n_walks / 100;
      return emit({rep}, *c);
    }));
  }
  // measure (Dahlberg + local comparison + BMO base point invariance)
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("measure", "harmonic measure ratio checks");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      GaugeBall ball = make_ball(*c);
      MeasureProbeOptions o;
      o.grid_h = c->grid_h;
      o.n_walks = c->walks;
      o.workers = c->workers;
      WalkConfig wc;
      wc.dt = o.walk_dt;
      wc.seed = c->seed;
      wc.workers = c->workers;
      BmoLadderSpec bspec;
      auto bmo = bmo_basepoint_invariance(log_distance_exemplar({1, 0, 0}), ball, {0, 0, 0},
                                          {0.3, 0, 0}, std::min(c->walks, 20000L), wc, bspec);
      return emit({dahlberg_check(ball, c->seed, o), local_comparison_check(ball, c->seed, o),
                   bmo},
                  *c);
    }));
  }
  // carleson
  {
    auto c = std::make_shared<Common>();
    auto meas = std::make_shared<std::string>("lebesgue");
    auto alpha = std::make_shared<double>(1.0);
    auto sreg = std::make_shared<double>(3.0);
    auto* cmd = app.add_subcommand("carleson", "Carleson constant ladder");
    add_common(cmd, *c);
    cmd->add_option("--measure", *meas, "lebesgue|dyadic-atoms|boundary-atom");
    cmd->add_option("--alpha", *alpha, "Carleson exponent alpha");
    cmd->add_option("--s", *sreg, "boundary regularity exponent");
    cmd->callback(run([c, meas, alpha, sreg]() {
      GaugeBall ball = make_ball(*c);
      MeasureRep mu;
      if (*meas == "lebesgue") mu = MeasureRep::lebesgue();
      else if (*meas == "dyadic-atoms")
        mu = MeasureRep::dyadic_radial_atoms(HPoint::h1(1, 0, 0), 3, 10);
      else if (*meas == "boundary-atom")
        mu = MeasureRep::boundary_atom(HPoint::h1(1, 0, 0), 0.02);
      else {
        std::cerr << "unknown --measure " << *meas << "\n";
        return 2;
      }
      CarlesonLadderSpec spec;
      auto rep = carleson_constant(mu, ball, *alpha, *sreg, spec, c->seed);
      return emit({rep.to_check_report("carleson_constant")}, *c);
    }));
  }
  // theorem checks
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("thm11", "superlevel-set characterization check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      Thm11Options o;
      o.workers = c->workers;
      o.grid_h = c->grid_h;
      return emit({thm11_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto nc = std::make_shared<int>(100);
    auto meas = std::make_shared<std::string>("both");
    auto* cmd = app.add_subcommand("thm12", "Mobius-map characterization check");
    add_common(cmd, *c);
    cmd->add_option("--configs", *nc, "admissible configuration count");
    cmd->add_option("--measure", *meas, "both (the discrimination pair is built in)");
    cmd->callback(run([c, nc]() {
      if (int rc = require_unit_ball(*c)) return rc;
      Thm12Options o;
      o.workers = c->workers;
      o.n_configs = *nc;
      return emit({thm12_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("thm13", "square function L2 bound check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      Thm13Options o;
      o.workers = c->workers;
      o.grid_h = c->grid_h;
      o.n_walks = c->walks;
      return emit({thm13_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("thm14", "BMO Carleson estimate check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      Thm14Options o;
      o.workers = c->workers;
      o.global_h = c->grid_h;
      o.n_walks = c->walks;
      return emit({thm14_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("energy", "energy identity check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      EnergyOptions o;
      o.workers = c->workers;
      o.grid_h = c->grid_h;
      o.n_walks = c->walks;
      return emit({energy_identity_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("green-bound", "Green lower bound check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      GreenBoundOptions o;
      o.workers = c->workers;
      o.grid_h = c->grid_h;
      return emit({green_lower_bound_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  {
    auto c = std::make_shared<Common>();
    auto* cmd = app.add_subcommand("fatou", "radial Fatou limits check");
    add_common(cmd, *c);
    cmd->callback(run([c]() {
      if (int rc = require_unit_ball(*c)) return rc;
      FatouOptions o;
      o.workers = c->workers;
      o.grid_h = c->grid_h;
      return emit({fatou_check(make_ball(*c), c->seed, o)}, *c);
    }));
  }
  // all
  {
    auto c = std::make_shared<Common>();
    auto quick = std::make_shared<bool>(false);
    auto* cmd = app.add_subcommand("all", "run the acceptance matrix");
    add_common(cmd, *c);
    cmd->add_flag("--quick", *quick, "reduced budgets (smoke run, not the gate)");
    cmd->callback(run([c, quick]() {
      AcceptanceOptions o;
      o.seed = c->seed;
      o.workers = c->workers;
      o.quick = *quick;
      o.progress = &std::cerr;
      auto reps = run_acceptance(o);
      return emit(reps, *c);
    }));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
