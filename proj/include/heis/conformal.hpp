#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "heis/domain.hpp"
#include "heis/h1.hpp"
#include "heis/point.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Koranyi inversion in the unit gauge sphere,
/// I(y) = -(1/||y||^4) (y_z (|y_z|^2 + i y_t), y_t). Involution;
/// ||I(y)|| = 1/||y||. Defined on H^n \ {0} for every n.
HPoint koranyi_inversion(const HPoint& y);
h1::P3 koranyi_inversion(const h1::P3& y);

/// Parameters of the Mobius-type map T_{x,a,rho} on H^1:
/// T(y) = delta_rho([I(a^{-1} x)]^{-1} . [I(a^{-1} y)]). Zero at x, pole at a.
struct TMapParams {
  HPoint x;
  HPoint a;
  double rho = 1.0;
  /// Maps evaluate in any H^n, but the closed-form Jacobian and the
  /// distance/norm exponents are only known for n = 1; the flag guards the
  /// n >= 2 generalization whose exponents the construction does not fix.
  bool allow_hn = false;

  TMapParams(HPoint x_, HPoint a_, double rho_, bool allow_hn_ = false);
};

HPoint t_map(const TMapParams& prm, const HPoint& y);
h1::P3 t_map(const TMapParams& prm, const h1::P3& y);

/// Closed forms of the map's metric identities, n = 1:
/// ||T(y)||            = rho d(x,y) / (d(a,y) d(a,x))
/// d(T(y), T(y'))      = rho d(y,y') / (d(a,y) d(a,y'))
/// J_T(y)              = rho^4 / d(a,y)^8
double t_map_norm(const TMapParams& prm, const HPoint& y);
double t_map_pair_distance(const TMapParams& prm, const HPoint& y, const HPoint& y2);
double t_map_jacobian(const TMapParams& prm, const HPoint& y);

/// Central finite-difference determinant of the Euclidean coordinate map;
/// independent route to the Jacobian (Haar = Lebesgue).
double t_map_jacobian_fd(const TMapParams& prm, const HPoint& y, double h = 1e-4);

/// Image of the ball boundary under T as a point cloud plus local refinement,
/// for distance-to-image-boundary queries. T(B) is not a ball, so no closed
/// form exists.
class ImageBoundary {
 public:
  ImageBoundary(const TMapParams& prm, const GaugeBall& ball, int cloud_size = 4096);

  /// min over the image boundary of d(q, .), cloud seed + Nelder-Mead polish
  /// through the map.
  double distance(const h1::P3& q) const;

  double min_norm() const { return m_; }  // empirical m of  B(0,m) c T(B)
  double max_norm() const { return M_; }  // empirical M of  T(B) c B(0,M)

 private:
  TMapParams prm_;
  const GaugeBall* ball_;
  std::vector<h1::P3> points_;
  std::vector<double> phis_, thetas_;
  double m_ = 0, M_ = 0;
};

/// Admissible map configuration: x in B, a outside the closure,
/// rho = c_min * min{d(x,dB), d(a,dB)} with rho/d(a,x) kept inside
/// [ratio_lo, ratio_hi] by rejection.
struct AdmissibleConfig {
  TMapParams params;
  double c_min = 0.5;
  double ratio_lo = 0.125;
  double ratio_hi = 1.0;
  double dx_boundary = 0;  // d(x, dB)
  double da_boundary = 0;  // d(a, dB)
  double dax = 0;          // d(a, x)
};

struct AdmissibleSampleOptions {
  double c_min = 0.5;
  double ratio_lo = 0.125;
  double ratio_hi = 1.0;
  double x_radius = 0.9;     // x drawn uniformly in B(0, x_radius * R)
  int max_attempts = 4096;
  /// When set, x is pinned near the given boundary point at the given scale
  /// (corkscrew-style) instead of drawn uniformly; used by localizing sweeps.
  std::optional<std::pair<HPoint, double>> localize;
};

AdmissibleConfig sample_admissible_config(Rng& rng, const GaugeBall& ball,
                                          const AdmissibleSampleOptions& opt = {});

/// Boundary-distance distortion of the map against its closed-form scale:
/// [d(T(y), dT(B)) / d(y, dB)] / [rho / d(y,a)^2], for y in B(omega, r) ∩ B,
/// under the near-pole hypotheses d(a,omega) <= c r, d(a, B) >= C r (C > 1).
double comparability_ratio(const TMapParams& prm, const HPoint& y, const GaugeBall& ball,
                           const ImageBoundary& image, const HPoint& omega, double r,
                           double c_near = 4.0, double c_far = 1.05);

}  // namespace heis
