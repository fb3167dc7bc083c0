#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "heis/domain.hpp"
#include "heis/grid.hpp"
#include "heis/measure.hpp"
#include "heis/report.hpp"

namespace heis {

/// One rung of a Carleson ladder.
struct CarlesonRung {
  h1::P3 x0{};
  double r = 0;
  double mass = 0;
  double ratio = 0;  // mass / r^{alpha s}
};

/// Result of the Carleson-constant estimator: the dyadic ladder and the
/// observed sup ratio (the empirical gamma).
struct CarlesonReport {
  double alpha = 1, s = 3;
  uint64_t seed = 0;
  std::vector<CarlesonRung> ladder;
  double sup_ratio = 0;

  /// log2 of ratio increments per dyadic level, averaged over base points.
  std::vector<double> level_slopes() const;
  CheckReport to_check_report(const std::string& name) const;
};

struct CarlesonLadderSpec {
  int n_base_points = 6;
  double delta = 0.15;  // non-characteristic exclusion |z| >= delta
  int k_min = 2, k_max = 6;  // radii 2^-k
  std::vector<h1::P3> fixed_base_points;  // used instead of sampling if set
};

CarlesonReport carleson_constant(const MeasureRep& mu, const GaugeBall& domain, double alpha,
                                 double s, const CarlesonLadderSpec& spec, uint64_t seed);

/// Value of a cone functional with its sampling uncertainty.
struct ConeFunctionalResult {
  HPoint vertex;
  double alpha = 1;
  std::optional<double> truncation;
  double value = 0;
  double std_error = 0;
  long samples = 0;
};

using FieldEval = std::function<double(const h1::P3&)>;

/// Boundary distance sampled on grid nodes; trilinear between them. Shared
/// by the cone samplers so distance queries amortize across sweeps.
ScalarField make_boundary_distance_field(std::shared_ptr<const Grid> grid, int workers = 1);

struct ConeSampleOptions {
  int shells = 10;          // dyadic shells in distance to the vertex
  int per_shell = 120;      // proposals per shell
  double min_scale = 1e-3;  // deepest shell 2^-k >= min_scale
  uint64_t seed = 1;
  const ScalarField* distance_field = nullptr;  // optional cached distances
};

/// Supremum of |u| over a stratified sample of the cone: dyadic shells in
/// d(., vertex) toward the vertex (densified near the boundary).
/// Deterministic given the seed.
ConeFunctionalResult nontangential_max(const FieldEval& u, const ConeSpec& spec,
                                       const GaugeBall& domain, const ConeSampleOptions& opt);

struct SquareFunctionOptions {
  int per_shell = 300;
  double depth_cut = 0.0;  // skip shells with d(y, dOmega) < depth_cut
                           // (defaults to 4 h of the field's grid)
  uint64_t seed = 1;
  const ScalarField* distance_field = nullptr;
};

/// S_alpha u(vertex)^2 = integral over the cone of |grad_H u|^2
/// d(y,dOmega)^{2-Q} dy, stratified by dyadic boundary-distance shells,
/// uniform gauge-ball proposals per shell. Returns S (the square root).
ConeFunctionalResult square_function(const ScalarField& u, const ConeSpec& spec,
                                     const GaugeBall& domain, const SquareFunctionOptions& opt);

/// Same quadrature applied to |grad_H u|^2 given as a callback; the
/// independent route used to cross-check the field-backed version.
double cone_weighted_integral_mc(const FieldEval& grad2, const ConeSpec& spec,
                                 const GaugeBall& domain, double depth_cut, int per_shell,
                                 uint64_t seed);

}  // namespace heis
