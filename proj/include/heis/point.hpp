#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "heis/errors.hpp"

namespace heis {

/// Point of the n-th Heisenberg group, stored as 2n+1 reals
/// (x_1, y_1, ..., x_n, y_n, t).
class HPoint {
 public:
  HPoint() : c_(3, 0.0) {}

  explicit HPoint(std::vector<double> coords) : c_(std::move(coords)) {
    if (c_.size() < 3 || c_.size() % 2 == 0)
      throw DimensionError("HPoint: coordinate count must be odd and >= 3");
    for (double v : c_)
      if (!std::isfinite(v)) throw std::invalid_argument("HPoint: non-finite coordinate");
  }

  static HPoint identity(int n) { return HPoint(std::vector<double>(2 * n + 1, 0.0)); }

  static HPoint h1(double x, double y, double t) { return HPoint({x, y, t}); }

  int n() const { return int((c_.size() - 1) / 2); }

  double x(int i) const { return c_[2 * i]; }
  double y(int i) const { return c_[2 * i + 1]; }
  double t() const { return c_.back(); }
  std::complex<double> z(int i) const { return {c_[2 * i], c_[2 * i + 1]}; }

  /// |z| = Euclidean norm of the horizontal part.
  double zmod() const {
    double s = 0.0;
    for (int i = 0; i < n(); ++i) s += c_[2 * i] * c_[2 * i] + c_[2 * i + 1] * c_[2 * i + 1];
    return std::sqrt(s);
  }

  const std::vector<double>& coords() const { return c_; }
  double operator[](std::size_t k) const { return c_[k]; }
  std::size_t size() const { return c_.size(); }

  bool operator==(const HPoint& o) const { return c_ == o.c_; }

 private:
  std::vector<double> c_;
};

inline void require_same_group(const HPoint& p, const HPoint& q) {
  if (p.n() != q.n()) throw DimensionError("points belong to different Heisenberg groups");
}

/// Group law: (z,t)(z',t') = (z+z', t+t'+2 Im <z, z'>).
inline HPoint mul(const HPoint& p, const HPoint& q) {
  require_same_group(p, q);
  int n = p.n();
  std::vector<double> c(2 * n + 1);
  double tw = 0.0;
  for (int i = 0; i < n; ++i) {
    c[2 * i] = p.x(i) + q.x(i);
    c[2 * i + 1] = p.y(i) + q.y(i);
    // Im(z_i * conj(z'_i))
    tw += p.y(i) * q.x(i) - p.x(i) * q.y(i);
  }
  c[2 * n] = p.t() + q.t() + 2.0 * tw;
  return HPoint(std::move(c));
}

inline HPoint inverse(const HPoint& p) {
  std::vector<double> c(p.coords());
  for (double& v : c) v = -v;
  return HPoint(std::move(c));
}

/// Heisenberg dilation (z,t) -> (rho z, rho^2 t).
inline HPoint dilate(double rho, const HPoint& p) {
  if (!(rho > 0.0)) throw std::domain_error("dilate: rho must be positive");
  int n = p.n();
  std::vector<double> c(p.coords());
  for (int i = 0; i < 2 * n; ++i) c[i] *= rho;
  c[2 * n] *= rho * rho;
  return HPoint(std::move(c));
}

/// Koranyi gauge (|z|^4 + t^2)^(1/4).
inline double gauge_norm(const HPoint& p) {
  double z2 = 0.0;
  for (int i = 0; i < p.n(); ++i) z2 += p.x(i) * p.x(i) + p.y(i) * p.y(i);
  return std::pow(z2 * z2 + p.t() * p.t(), 0.25);
}

/// Koranyi-Reimann (Cygan) distance d(p,q) = ||q^{-1} p||.
inline double dist(const HPoint& p, const HPoint& q) {
  require_same_group(p, q);
  return gauge_norm(mul(inverse(q), p));
}

/// Euclidean coordinate rows of the horizontal frame at p:
/// rows 2i are X_i = e_{x_i} + 2 y_i e_t, rows 2i+1 are Y_i = e_{y_i} - 2 x_i e_t.
inline std::vector<std::vector<double>> frame(const HPoint& p) {
  int n = p.n();
  std::vector<std::vector<double>> rows(2 * n, std::vector<double>(2 * n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    rows[2 * i][2 * i] = 1.0;
    rows[2 * i][2 * n] = 2.0 * p.y(i);
    rows[2 * i + 1][2 * i + 1] = 1.0;
    rows[2 * i + 1][2 * n] = -2.0 * p.x(i);
  }
  return rows;
}

/// Horizontal vector with frame coefficients a_i, b_i at a base point.
struct HVector {
  std::vector<double> a;
  std::vector<double> b;
  HPoint base;

  HVector() = default;
  HVector(std::vector<double> av, std::vector<double> bv, HPoint p)
      : a(std::move(av)), b(std::move(bv)), base(std::move(p)) {
    if (a.size() != b.size() || int(a.size()) != base.n())
      throw DimensionError("HVector: coefficient count must match base point");
  }

  double hnorm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] + b[i] * b[i];
    return std::sqrt(s);
  }
};

}  // namespace heis
