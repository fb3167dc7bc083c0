#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heis/domain.hpp"
#include "heis/h1.hpp"
#include "heis/point.hpp"

namespace heis {

enum class NodeClass : uint8_t { exterior = 0, interior = 1, boundary = 2 };

/// Kind of Dirichlet anchor carried by a boundary-adjacent node.
enum class AnchorKind : uint8_t {
  domain_boundary,  // node adjacent to the domain boundary; anchor on it
  box_face          // node on the bounding-box hull inside the domain
};

/// Boundary data callback: value at the anchor point of a boundary node.
using BoundaryData = std::function<double(const h1::P3& anchor, AnchorKind kind)>;

/// Axis-aligned raster over a bounding box clipped to a domain (H^1 grids
/// are 3-D). Interior nodes have the full 14-point sub-Laplacian stencil
/// inside the region; nodes inside the region without it are
/// boundary-adjacent and carry Dirichlet data at their anchor.
class Grid {
 public:
  Grid(std::shared_ptr<const GaugeBall> domain, h1::P3 lo, h1::P3 hi, double h);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nt() const { return nt_; }
  double h() const { return h_; }
  const GaugeBall& domain() const { return *domain_; }
  std::shared_ptr<const GaugeBall> domain_ptr() const { return domain_; }
  h1::P3 lo() const { return lo_; }
  h1::P3 hi() const { return hi_; }

  std::size_t raster_size() const { return std::size_t(nx_) * ny_ * nt_; }
  std::size_t id(int i, int j, int k) const { return (std::size_t(k) * ny_ + j) * nx_ + i; }
  h1::P3 point(int i, int j, int k) const {
    return {lo_.x + i * h_, lo_.y + j * h_, lo_.t + k * h_};
  }
  NodeClass cls(std::size_t id) const { return cls_[id]; }
  NodeClass cls(int i, int j, int k) const { return cls_[id(i, j, k)]; }

  std::size_t n_interior() const { return n_interior_; }
  std::size_t n_boundary() const { return n_boundary_; }

  /// Anchor of a boundary node (projected domain-boundary point, or the node
  /// itself for box-face nodes).
  h1::P3 anchor(std::size_t id) const { return anchors_[anchor_index_[id]]; }
  AnchorKind anchor_kind(std::size_t id) const { return anchor_kinds_[anchor_index_[id]]; }
  uint32_t anchor_index_pub(std::size_t id) const { return anchor_index_[id]; }
  std::size_t anchor_count() const { return anchors_.size(); }
  h1::P3 anchor_at(std::size_t a) const { return anchors_[a]; }
  AnchorKind anchor_kind_at(std::size_t a) const { return anchor_kinds_[a]; }

  /// True if the cell containing p has no exterior corner (trilinear
  /// interpolation is fully supported there).
  bool cell_valid(const h1::P3& p) const;
  bool in_box(const h1::P3& p) const;

 private:
  friend class ScalarField;
  std::shared_ptr<const GaugeBall> domain_;
  h1::P3 lo_, hi_;
  double h_;
  int nx_, ny_, nt_;
  std::vector<NodeClass> cls_;
  std::vector<uint32_t> anchor_index_;
  std::vector<h1::P3> anchors_;
  std::vector<AnchorKind> anchor_kinds_;
  std::size_t n_interior_ = 0, n_boundary_ = 0;
};

/// Grid-sampled scalar function with trilinear interpolation and
/// frame-difference horizontal derivatives.
class ScalarField {
 public:
  explicit ScalarField(std::shared_ptr<const Grid> grid)
      : grid_(std::move(grid)), values_(grid_->raster_size(), 0.0) {}

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  double& at(std::size_t id) { return values_[id]; }
  double at(std::size_t id) const { return values_[id]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Trilinear interpolation; cells with exterior corners fall back to the
  /// nearest valid corner (first-order, flagged by evaluable()).
  double value(const h1::P3& p) const;
  bool evaluable(const h1::P3& p) const { return grid_->cell_valid(p); }

  /// Frame coefficients (X u, Y u) by central differences of the
  /// interpolant along the frozen frame directions; step defaults to 0.75 h.
  void horizontal_gradient(const h1::P3& p, double* xu, double* yu, double step = 0.0) const;
  double hgrad_norm2(const h1::P3& p, double step = 0.0) const;

  /// Binary dump: magic "HSLF", u32 version, u32 dims[3], f64 h,
  /// f64 bbox[6], then row-major (x fastest) f64 values, little-endian.
  void save_binary(const std::string& path) const;
  /// CSV slice at fixed t-index: columns x,y,t,value.
  void save_csv_slice(const std::string& path, int k) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

}  // namespace heis
