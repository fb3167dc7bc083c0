#include "heis/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace heis {

using h1::P3;

namespace {

// stencil neighbours of the expanded sub-Laplacian: axis pairs plus the
// (x,t) and (y,t) cross corners
constexpr int kStencil[14][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}, {0, 0, 1},
                                 {0, 0, -1}, {1, 0, 1},  {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
                                 {0, 1, 1},  {0, 1, -1}, {0, -1, 1}, {0, -1, -1}};

}  // namespace

Grid::Grid(std::shared_ptr<const GaugeBall> domain, P3 lo, P3 hi, double h)
    : domain_(std::move(domain)), lo_(lo), hi_(hi), h_(h) {
  if (!(h > 0)) throw std::invalid_argument("Grid: spacing must be positive");
  // node counts round up so the raster always covers the requested box
  nx_ = int(std::ceil((hi_.x - lo_.x) / h_ - 1e-12)) + 1;
  ny_ = int(std::ceil((hi_.y - lo_.y) / h_ - 1e-12)) + 1;
  nt_ = int(std::ceil((hi_.t - lo_.t) / h_ - 1e-12)) + 1;
  if (nx_ < 5 || ny_ < 5 || nt_ < 5) throw std::invalid_argument("Grid: box too small for h");
  hi_ = {lo_.x + (nx_ - 1) * h_, lo_.y + (ny_ - 1) * h_, lo_.t + (nt_ - 1) * h_};

  std::size_t n = raster_size();
  cls_.assign(n, NodeClass::exterior);
  anchor_index_.assign(n, 0);

  // inside = in the open domain and strictly inside the box hull
  std::vector<uint8_t> inside(n, 0);
  for (int k = 0; k < nt_; ++k)
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        if (!domain_->contains(point(i, j, k))) continue;
        inside[id(i, j, k)] = 1;
      }

  for (int k = 0; k < nt_; ++k)
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        std::size_t me = id(i, j, k);
        if (!inside[me]) continue;
        bool hull = (i == 0 || i == nx_ - 1 || j == 0 || j == ny_ - 1 || k == 0 || k == nt_ - 1);
        bool full = !hull;
        if (full) {
          for (const auto& d : kStencil) {
            if (!inside[id(i + d[0], j + d[1], k + d[2])]) {
              full = false;
              break;
            }
          }
        }
        if (full) {
          cls_[me] = NodeClass::interior;
          ++n_interior_;
        } else {
          cls_[me] = NodeClass::boundary;
          ++n_boundary_;
          P3 p = point(i, j, k);
          if (hull && domain_->boundary_distance(p) > 1.5 * h_) {
            anchors_.push_back(p);
            anchor_kinds_.push_back(AnchorKind::box_face);
          } else {
            anchors_.push_back(domain_->nearest_boundary_point(p));
            anchor_kinds_.push_back(AnchorKind::domain_boundary);
          }
          anchor_index_[me] = uint32_t(anchors_.size() - 1);
        }
      }
}

bool Grid::in_box(const P3& p) const {
  return p.x >= lo_.x && p.x <= hi_.x && p.y >= lo_.y && p.y <= hi_.y && p.t >= lo_.t &&
         p.t <= hi_.t;
}

bool Grid::cell_valid(const P3& p) const {
  if (!in_box(p)) return false;
  int i = int((p.x - lo_.x) / h_), j = int((p.y - lo_.y) / h_), k = int((p.t - lo_.t) / h_);
  i = std::min(i, nx_ - 2);
  j = std::min(j, ny_ - 2);
  k = std::min(k, nt_ - 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        if (cls_[id(i + a, j + b, k + c)] == NodeClass::exterior) return false;
  return true;
}

double ScalarField::value(const P3& p) const {
  const Grid& g = *grid_;
  if (!g.in_box(p)) throw ResolutionError("ScalarField: point outside the grid box");
  double fx = (p.x - g.lo_.x) / g.h_, fy = (p.y - g.lo_.y) / g.h_, ft = (p.t - g.lo_.t) / g.h_;
  int i = std::min(int(fx), g.nx_ - 2), j = std::min(int(fy), g.ny_ - 2),
      k = std::min(int(ft), g.nt_ - 2);
  double ax = fx - i, ay = fy - j, at = ft - k;

  double num = 0.0, den = 0.0;
  bool all_valid = true;
  double best_v = 0.0, best_w = -1.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        double w = (a ? ax : 1 - ax) * (b ? ay : 1 - ay) * (c ? at : 1 - at);
        std::size_t nid = g.id(i + a, j + b, k + c);
        if (g.cls_[nid] == NodeClass::exterior) {
          all_valid = false;
          continue;
        }
        num += w * values_[nid];
        den += w;
        if (w > best_w) {
          best_w = w;
          best_v = values_[nid];
        }
      }
  if (all_valid) return num;
  if (den > 1e-12) return num / den;  // renormalized partial cell
  if (best_w >= 0.0) return best_v;
  throw ResolutionError("ScalarField: all corners exterior");
}

void ScalarField::horizontal_gradient(const P3& p, double* xu, double* yu, double step) const {
  double h = step > 0 ? step : 0.75 * grid_->h();
  auto probe = [&](double dx, double dy, double dt_) {
    return P3{p.x + dx, p.y + dy, p.t + dt_};
  };
  // X = (1, 0, 2y), Y = (0, 1, -2x) frozen at p
  auto diff = [&](P3 dplus, P3 dminus, bool* ok) {
    bool vp = grid_->cell_valid(dplus), vm = grid_->cell_valid(dminus);
    *ok = true;
    if (vp && vm) return (value(dplus) - value(dminus)) / (2 * h);
    if (vp) return (value(dplus) - value(p)) / h;
    if (vm) return (value(p) - value(dminus)) / h;
    *ok = false;
    return 0.0;
  };
  bool ok = false;
  *xu = diff(probe(h, 0, 2 * p.y * h), probe(-h, 0, -2 * p.y * h), &ok);
  if (!ok) throw ResolutionError("horizontal_gradient: X probes leave the grid");
  *yu = diff(probe(0, h, -2 * p.x * h), probe(0, -h, 2 * p.x * h), &ok);
  if (!ok) throw ResolutionError("horizontal_gradient: Y probes leave the grid");
}

double ScalarField::hgrad_norm2(const P3& p, double step) const {
  double xu, yu;
  horizontal_gradient(p, &xu, &yu, step);
  return xu * xu + yu * yu;
}

void ScalarField::save_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_binary: cannot open " + path);
  const char magic[4] = {'H', 'S', 'L', 'F'};
  uint32_t version = 1;
  uint32_t dims[3] = {uint32_t(grid_->nx()), uint32_t(grid_->ny()), uint32_t(grid_->nt())};
  double h = grid_->h();
  double box[6] = {grid_->lo().x, grid_->lo().y, grid_->lo().t,
                   grid_->hi().x, grid_->hi().y, grid_->hi().t};
  os.write(magic, 4);
  os.write(reinterpret_cast<const char*>(&version), 4);
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  os.write(reinterpret_cast<const char*>(&h), 8);
  os.write(reinterpret_cast<const char*>(box), sizeof box);
  os.write(reinterpret_cast<const char*>(values_.data()), values_.size() * 8);
}

void ScalarField::save_csv_slice(const std::string& path, int k) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_csv_slice: cannot open " + path);
  os << "x,y,t,value\n";
  char buf[160];
  for (int j = 0; j < grid_->ny(); ++j)
    for (int i = 0; i < grid_->nx(); ++i) {
      P3 p = grid_->point(i, j, k);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, p.t,
                    values_[grid_->id(i, j, k)]);
      os << buf;
    }
}

}  // namespace heis
