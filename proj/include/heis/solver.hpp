#pragma once

#include <memory>
#include <vector>

#include "heis/grid.hpp"

namespace heis {

struct SolveOptions {
  double tol = 1e-10;        // relative 2-norm residual target
  long max_iterations = 20000;
  int workers = 1;
  bool boundary_blend = true;  // second-order boundary rows (interpolated
                               // toward an interior anchor); plain Dirichlet
                               // projection otherwise
};

struct SolveStats {
  long iterations = 0;
  double relative_residual = 0;
  double max_principle_overshoot = 0;  // max(u) - max(f) vs min side, positive part
};

/// Assembled discrete sub-Laplacian on a grid: one row per non-exterior
/// node. Interior rows carry the centered 15-point stencil of
///   dxx + dyy + 4 y dx dt - 4 x dy dt + 4 (x^2+y^2) dtt,
/// boundary rows tie the node to its Dirichlet anchor. Rows are scaled to
/// unit diagonal.
class SubLaplacian {
 public:
  SubLaplacian(std::shared_ptr<const Grid> grid, bool boundary_blend = true);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }

  /// Raw stencil application at an interior node on arbitrary nodal data
  /// (unscaled operator value). For consistency-order checks.
  double apply_interior(const std::vector<double>& nodal, int i, int j, int k) const;

  /// Solve the Dirichlet problem (Delta_H u = 0, u = data on the boundary
  /// anchors) by BiCGStab on the unit-diagonal system.
  ScalarField solve_dirichlet(const BoundaryData& data, const SolveOptions& opt,
                              SolveStats* stats = nullptr) const;

  std::size_t unknowns() const { return map_.size() ? n_unknowns_ : 0; }

 private:
  void matvec(const std::vector<double>& x, std::vector<double>& y, int workers) const;

  std::shared_ptr<const Grid> grid_;
  bool blend_;
  // CSR over unknowns (non-exterior nodes)
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
  // rhs = sum over boundary-data coefficients: rhs_coeff_[row] * data(anchor(row-node))
  struct RhsTerm {
    int row;
    uint32_t anchor;  // index into grid anchors
    double coeff;
  };
  std::vector<RhsTerm> rhs_terms_;
  std::vector<int> map_;        // raster id -> unknown index (-1 exterior)
  std::vector<std::size_t> unmap_;  // unknown index -> raster id
  std::size_t n_unknowns_ = 0;
};

}  // namespace heis
