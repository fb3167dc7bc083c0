#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heis/consts.hpp"
#include "heis/h1.hpp"
#include "heis/point.hpp"
#include "heis/report.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Non-tangential cone with vertex on the boundary, aperture alpha, and an
/// optional truncation height (gauge distance from the vertex).
struct ConeSpec {
  HPoint vertex;
  double alpha = 1.0;
  std::optional<double> truncation;
};

struct CorkscrewResult {
  HPoint point;
  double r = 0;
  double achieved_distance_to_vertex = 0;
  double achieved_distance_to_boundary = 0;
  double m_effective = 0;
};

enum class SurfaceKind { euclidean_h2, metric_regular_proxy };

/// Queryable region of H^1: membership, distance to the boundary, boundary
/// sampling. Instances are immutable after construction (boundary clouds
/// included) and safe to share across threads.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual bool contains(const h1::P3& p) const = 0;
  virtual double boundary_distance(const h1::P3& p) const = 0;
  /// Quasi-uniform (in parametrization) point cloud on the boundary.
  virtual const std::vector<h1::P3>& boundary_cloud() const = 0;
  /// Draw from the boundary, quasi-uniform in the parametrization.
  virtual h1::P3 sample_boundary(Rng& rng) const = 0;
  virtual double diameter() const = 0;
  virtual std::string name() const = 0;

  bool contains(const HPoint& p) const { return contains(h1::from_hpoint(p)); }
  double boundary_distance(const HPoint& p) const { return boundary_distance(h1::from_hpoint(p)); }
};

/// Gauge ball B(center, radius). The primary domain of the laboratory.
class GaugeBall : public Domain {
 public:
  GaugeBall(HPoint center, double radius, int cloud_size = 10000);
  GaugeBall() : GaugeBall(HPoint::h1(0, 0, 0), 1.0) {}

  using Domain::boundary_distance;
  using Domain::contains;

  bool contains(const h1::P3& p) const override;
  double boundary_distance(const h1::P3& p) const override;
  const std::vector<h1::P3>& boundary_cloud() const override { return cloud_; }
  h1::P3 sample_boundary(Rng& rng) const override;
  double diameter() const override { return 2.0 * radius_; }
  std::string name() const override { return "gauge_ball"; }

  const HPoint& center() const { return center_hp_; }
  double radius() const { return radius_; }
  double lebesgue_volume() const { return kUnitBallVolume * std::pow(radius_, kQ); }

  /// Unit-ball coordinates w = delta_{1/R}(c^{-1} p) and back.
  h1::P3 local_unit(const h1::P3& p) const;
  h1::P3 world_from_unit(const h1::P3& w) const;
  /// Boundary point from sphere parameters (world coordinates).
  h1::P3 boundary_point(double phi, double theta) const;

  /// Radial-curve projection to the boundary; falls back to the nearest pole
  /// for points too close to the t-axis.
  h1::P3 project_to_boundary(const h1::P3& p) const;

  /// Argmin of the boundary distance (same scan + polish as
  /// boundary_distance). Preferred Dirichlet anchor: it never moves farther
  /// than the distance itself.
  h1::P3 nearest_boundary_point(const h1::P3& p) const;

  /// The two characteristic poles center . (0, 0, +-R^2).
  std::vector<HPoint> characteristic_set() const;

  /// Interior corkscrew point at scale r for a non-characteristic boundary
  /// point, taken on the radial curve with 1 - s = (r/R) |z|.
  CorkscrewResult corkscrew_point(const HPoint& x0, double r, double delta = 0.1) const;

  /// Integral of f over the boundary (or over the surface ball
  /// patch = B(patch_center, patch_r) ∩ ∂Ω) against the chosen measure.
  double surface_integral(SurfaceKind kind, const std::function<double(const h1::P3&)>& f,
                          std::optional<std::pair<h1::P3, double>> patch = {}) const;

  double surface_ball_measure(SurfaceKind kind, const h1::P3& x0, double r) const;

  /// Uniform (Lebesgue) draw from the ball interior.
  h1::P3 sample_interior(Rng& rng) const;

  /// Count-based 3-regular proxy measure of a surface ball; valid down to
  /// radii resolved by the cloud, used to cross-check the density proxy.
  double counting_proxy_measure(const h1::P3& x0, double r) const;

 private:
  double boundary_distance_unit(const h1::P3& w, double* phi_min = nullptr,
                                double* theta_min = nullptr) const;

  HPoint center_hp_;
  h1::P3 center_;
  double radius_;
  std::vector<h1::P3> cloud_;
  std::vector<double> cloud_phi_, cloud_theta_;
  std::vector<double> count_weights_;
};

/// Axis-aligned box, optionally minus a removed slab (also a box). Used as a
/// second NTA example and as the corkscrew counterexample domain.
class Box : public Domain {
 public:
  Box(h1::P3 lo, h1::P3 hi, int cloud_per_face = 900);
  Box(h1::P3 lo, h1::P3 hi, h1::P3 slab_lo, h1::P3 slab_hi, int cloud_per_face = 900);

  using Domain::boundary_distance;
  using Domain::contains;

  bool contains(const h1::P3& p) const override;
  double boundary_distance(const h1::P3& p) const override;
  const std::vector<h1::P3>& boundary_cloud() const override { return cloud_; }
  h1::P3 sample_boundary(Rng& rng) const override;
  double diameter() const override;
  std::string name() const override { return slab_ ? "box_minus_slab" : "box"; }

 private:
  struct Face {
    int axis;        // 0,1,2 fixed coordinate
    double level;
    double lo0, hi0, lo1, hi1;  // ranges of the two free coordinates
  };
  double face_distance(const Face& f, const h1::P3& p) const;

  h1::P3 lo_, hi_;
  bool slab_ = false;
  h1::P3 slo_{}, shi_{};
  std::vector<Face> faces_;
  std::vector<h1::P3> cloud_;
};

/// y in the cone with the given vertex and aperture:
/// d(y, vertex) < (1 + alpha) d(y, boundary), plus the truncation cut.
bool cone_contains(const ConeSpec& spec, const Domain& domain, const HPoint& y);
bool cone_contains(const ConeSpec& spec, const Domain& domain, const h1::P3& y,
                   double boundary_dist_hint = -1.0);

/// Empirical interior/exterior corkscrew probe: samples boundary points and
/// scales, searches for corkscrew points, reports the worst effective M.
/// Harnack chains are not probed.
CheckReport nta_probe(const Domain& domain, double m_hypothesis, double r0, int n_samples,
                      uint64_t seed, int workers = 1);

}  // namespace heis
