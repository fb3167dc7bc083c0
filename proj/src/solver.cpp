#include "heis/solver.hpp"

#include <algorithm>
#include <cmath>

#include "heis/errors.hpp"
#include "heis/parallel.hpp"

namespace heis {

using h1::P3;

SubLaplacian::SubLaplacian(std::shared_ptr<const Grid> grid, bool boundary_blend)
    : grid_(std::move(grid)), blend_(boundary_blend) {
  const Grid& g = *grid_;
  map_.assign(g.raster_size(), -1);
  unmap_.reserve(g.n_interior() + g.n_boundary());
  for (std::size_t r = 0; r < g.raster_size(); ++r)
    if (g.cls(r) != NodeClass::exterior) {
      map_[r] = int(unmap_.size());
      unmap_.push_back(r);
    }
  n_unknowns_ = unmap_.size();

  row_ptr_.reserve(n_unknowns_ + 1);
  row_ptr_.push_back(0);
  const double h = g.h();

  auto decompose = [&](std::size_t rid, int* i, int* j, int* k) {
    *i = int(rid % g.nx());
    *j = int((rid / g.nx()) % g.ny());
    *k = int(rid / (std::size_t(g.nx()) * g.ny()));
  };

  std::vector<std::pair<int, double>> row;
  for (std::size_t u = 0; u < n_unknowns_; ++u) {
    std::size_t rid = unmap_[u];
    int i, j, k;
    decompose(rid, &i, &j, &k);
    row.clear();

    if (g.cls(rid) == NodeClass::interior) {
      P3 p = g.point(i, j, k);
      double ct = 4.0 * (p.x * p.x + p.y * p.y);
      double diag = -(4.0 + 2.0 * ct);
      auto add = [&](int di, int dj, int dk, double c) {
        row.emplace_back(map_[g.id(i + di, j + dj, k + dk)], c);
      };
      add(0, 0, 0, diag);
      add(1, 0, 0, 1.0);
      add(-1, 0, 0, 1.0);
      add(0, 1, 0, 1.0);
      add(0, -1, 0, 1.0);
      add(0, 0, 1, ct);
      add(0, 0, -1, ct);
      // 4 y dx dt -> y [u(+x,+t) - u(+x,-t) - u(-x,+t) + u(-x,-t)]
      add(1, 0, 1, p.y);
      add(1, 0, -1, -p.y);
      add(-1, 0, 1, -p.y);
      add(-1, 0, -1, p.y);
      // -4 x dy dt -> -x [u(+y,+t) - u(+y,-t) - u(-y,+t) + u(-y,-t)]
      add(0, 1, 1, -p.x);
      add(0, 1, -1, p.x);
      add(0, -1, 1, p.x);
      add(0, -1, -1, -p.x);
      // scale to unit diagonal
      for (auto& e : row) e.second /= diag;
      // interior rhs is zero
    } else {
      // boundary-adjacent node
      P3 pn = g.point(i, j, k);
      P3 anchor = g.anchor(rid);
      bool plain = true;
      if (blend_ && g.anchor_kind(rid) == AnchorKind::domain_boundary) {
        double dx = pn.x - anchor.x, dy = pn.y - anchor.y, dt = pn.t - anchor.t;
        double L = std::sqrt(dx * dx + dy * dy + dt * dt);
        if (L > 0.05 * h) {
          P3 pin{pn.x + dx / L * h, pn.y + dy / L * h, pn.t + dt / L * h};
          if (g.in_box(pin) && g.cell_valid(pin)) {
            double theta = L / (L + h);
            // u(n) - theta * TriLin(pin) = (1 - theta) * data(anchor)
            double fx = (pin.x - g.lo().x) / h, fy = (pin.y - g.lo().y) / h,
                   ft = (pin.t - g.lo().t) / h;
            int ci = std::min(int(fx), g.nx() - 2), cj = std::min(int(fy), g.ny() - 2),
                ck = std::min(int(ft), g.nt() - 2);
            double ax = fx - ci, ay = fy - cj, at = ft - ck;
            row.emplace_back(int(u), 1.0);
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                  double w = (a ? ax : 1 - ax) * (b ? ay : 1 - ay) * (c ? at : 1 - at);
                  if (w == 0.0) continue;
                  row.emplace_back(map_[g.id(ci + a, cj + b, ck + c)], -theta * w);
                }
            rhs_terms_.push_back({int(u), g.anchor_index_pub(rid), 1.0 - theta});
            plain = false;
          }
        }
      }
      if (plain) {
        row.emplace_back(int(u), 1.0);
        rhs_terms_.push_back({int(u), g.anchor_index_pub(rid), 1.0});
      }
      // merge duplicate columns (pin cell may include the node itself)
      std::sort(row.begin(), row.end());
      std::size_t w = 0;
      for (std::size_t r2 = 0; r2 < row.size(); ++r2) {
        if (w > 0 && row[w - 1].first == row[r2].first)
          row[w - 1].second += row[r2].second;
        else
          row[w++] = row[r2];
      }
      row.resize(w);
    }

    for (const auto& e : row) {
      col_.push_back(e.first);
      val_.push_back(e.second);
    }
    row_ptr_.push_back(int(col_.size()));
  }
}

double SubLaplacian::apply_interior(const std::vector<double>& nodal, int i, int j, int k) const {
  const Grid& g = *grid_;
  if (g.cls(i, j, k) != NodeClass::interior)
    throw PreconditionError("apply_interior: node is not interior");
  P3 p = g.point(i, j, k);
  double h2 = g.h() * g.h();
  double ct = 4.0 * (p.x * p.x + p.y * p.y);
  auto v = [&](int di, int dj, int dk) { return nodal[g.id(i + di, j + dj, k + dk)]; };
  double acc = -(4.0 + 2.0 * ct) * v(0, 0, 0);
  acc += v(1, 0, 0) + v(-1, 0, 0) + v(0, 1, 0) + v(0, -1, 0);
  acc += ct * (v(0, 0, 1) + v(0, 0, -1));
  acc += p.y * (v(1, 0, 1) - v(1, 0, -1) - v(-1, 0, 1) + v(-1, 0, -1));
  acc += -p.x * (v(0, 1, 1) - v(0, 1, -1) - v(0, -1, 1) + v(0, -1, -1));
  return acc / h2;
}

void SubLaplacian::matvec(const std::vector<double>& x, std::vector<double>& y, int workers) const {
  parallel_for(n_unknowns_, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      double acc = 0.0;
      for (int q = row_ptr_[r]; q < row_ptr_[r + 1]; ++q) acc += val_[q] * x[col_[q]];
      y[r] = acc;
    }
  });
}

namespace {

double dot_det(const std::vector<double>& a, const std::vector<double>& b, int workers) {
  const std::size_t B = 8192;
  std::size_t nblocks = (a.size() + B - 1) / B;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for(nblocks, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t blk = lo; blk < hi; ++blk) {
      double s = 0.0;
      std::size_t b0 = blk * B, b1 = std::min(a.size(), b0 + B);
      for (std::size_t i = b0; i < b1; ++i) s += a[i] * b[i];
      partial[blk] = s;
    }
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

ScalarField SubLaplacian::solve_dirichlet(const BoundaryData& data, const SolveOptions& opt,
                                          SolveStats* stats) const {
  const Grid& g = *grid_;
  const std::size_t n = n_unknowns_;

  // precompute anchor data values once
  std::vector<double> anchor_vals(g.anchor_count());
  double fmin = 1e300, fmax = -1e300;
  for (std::size_t a = 0; a < anchor_vals.size(); ++a) {
    anchor_vals[a] = data(g.anchor_at(a), g.anchor_kind_at(a));
    fmin = std::min(fmin, anchor_vals[a]);
    fmax = std::max(fmax, anchor_vals[a]);
  }

  std::vector<double> b(n, 0.0);
  for (const auto& t : rhs_terms_) b[t.row] += t.coeff * anchor_vals[t.anchor];

  double bnorm = std::sqrt(dot_det(b, b, opt.workers));
  std::vector<double> x(n, anchor_vals.empty() ? 0.0 : 0.5 * (fmin + fmax));

  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), tmp(n);
  std::vector<double> history;

  matvec(x, tmp, opt.workers);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
  rhat = r;
  double rho = 1, alpha = 1, omega = 1;
  double rnorm = std::sqrt(dot_det(r, r, opt.workers));
  double target = std::max(opt.tol * std::max(bnorm, 1e-300), 1e-300);

  long it = 0;
  int restarts = 0;
  while (rnorm > target && it < opt.max_iterations) {
    ++it;
    double rho1 = dot_det(rhat, r, opt.workers);
    if (std::abs(rho1) < 1e-300 * std::max(1.0, rnorm)) {
      // breakdown: restart with the current residual
      if (++restarts > 4) break;
      rhat = r;
      rho = alpha = omega = 1;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho1 = dot_det(rhat, r, opt.workers);
    }
    double beta = (rho1 / rho) * (alpha / omega);
    rho = rho1;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    matvec(p, v, opt.workers);
    double rv = dot_det(rhat, v, opt.workers);
    if (std::abs(rv) < 1e-300) {
      if (++restarts > 4) break;
      rhat = r;
      rho = alpha = omega = 1;
      continue;
    }
    alpha = rho1 / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    double snorm = std::sqrt(dot_det(s, s, opt.workers));
    if (snorm <= target) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
      rnorm = snorm;
      history.push_back(rnorm / std::max(bnorm, 1e-300));
      break;
    }
    matvec(s, t, opt.workers);
    double ts = dot_det(t, s, opt.workers), tt = dot_det(t, t, opt.workers);
    if (tt < 1e-300) break;
    omega = ts / tt;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    rnorm = std::sqrt(dot_det(r, r, opt.workers));
    history.push_back(rnorm / std::max(bnorm, 1e-300));
  }

  if (rnorm > target) {
    std::vector<double> tail(history.end() - std::min<std::size_t>(50, history.size()),
                             history.end());
    throw SolverError("solve_dirichlet: BiCGStab did not reach tolerance", tail);
  }

  ScalarField out(grid_);
  double umin = 1e300, umax = -1e300;
  for (std::size_t u = 0; u < n; ++u) {
    out.at(unmap_[u]) = x[u];
    umin = std::min(umin, x[u]);
    umax = std::max(umax, x[u]);
  }
  if (stats) {
    stats->iterations = it;
    stats->relative_residual = rnorm / std::max(bnorm, 1e-300);
    stats->max_principle_overshoot =
        std::max(0.0, std::max(umax - fmax, fmin - umin));
  }
  return out;
}

}  // namespace heis
