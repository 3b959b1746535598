#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ektlab/config.hpp"
#include "ektlab/errors.hpp"

namespace ekt {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using MetricTensor = Eigen::Matrix3d;  // components in (x, y, t) order

// The homogeneous family E(kappa, tau), kappa <= 0, tau >= 0, modeled on
// D(2/sqrt(-kappa)) x R with the fibered conformal metric. (0,0) is
// Euclidean R^3; kappa<0, tau=0 is H^2 x R; kappa<0, tau>0 the universal
// cover of PSL(2,R); kappa=0, tau>0 Heisenberg (experimental).
struct ModelParams {
  double kappa = 0.0;
  double tau = 0.0;

  double disc_radius() const;  // 2/sqrt(-kappa); +inf when kappa == 0
  bool hyperbolic_base() const { return kappa < 0.0; }
  bool heisenberg() const { return kappa == 0.0 && tau > 0.0; }
  void validate() const;  // kappa <= 0, tau >= 0
};

struct BasePoint {
  double x = 0.0;
  double y = 0.0;
  double r2() const { return x * x + y * y; }
};

struct AmbientPoint {
  BasePoint base;
  double t = 0.0;
};

inline Vec2 to_vec(const BasePoint& p) { return Vec2(p.x, p.y); }
inline Vec3 to_vec(const AmbientPoint& p) { return Vec3(p.base.x, p.base.y, p.t); }

// A base geodesic sampled uniformly in arc length. Endpoint-exact.
struct GeodesicSegment {
  BasePoint a, b;
  std::vector<BasePoint> polyline;
  double length = 0.0;
};

// --- metric ---------------------------------------------------------------

// nu_kappa(p) = 1 / (1 + kappa |p|^2 / 4); >= 1 for kappa <= 0.
double conformal_factor(const ModelParams& params, const BasePoint& p);

MetricTensor metric_at(const ModelParams& params, const BasePoint& p);

// Coframe E with g = E^T E: rows {nu dx, nu dy, tau nu (y dx - x dy) + dt}.
Mat3 metric_coframe(const ModelParams& params, const BasePoint& p);

// Area density of the vertical graph t = u at p per unit of Lebesgue
// measure dx dy: nu * sqrt(nu^2 + (tau nu y + u_x)^2 + (-tau nu x + u_y)^2).
// Reduces to sqrt(1 + |grad u|^2) in R^3.
double graph_area_element(const ModelParams& params, const BasePoint& p, const Vec2& grad_u);

// --- base geodesics -------------------------------------------------------

double base_distance(const ModelParams& params, const BasePoint& p, const BasePoint& q);

// samples = number of polyline points (>= 2).
GeodesicSegment geodesic_between(const ModelParams& params, const BasePoint& p,
                                 const BasePoint& q, int samples);

// Angle (in the conformal chart) of the geodesic tangent at `from` pointing
// toward `to`. Conformality makes this the metric angle as well.
double geodesic_initial_direction(const ModelParams& params, const BasePoint& from,
                                  const BasePoint& to);

// Chart where base geodesics are straight chords (Beltrami-Klein for
// kappa < 0, identity for kappa = 0). Used for convexity certificates.
Vec2 klein_coords(const ModelParams& params, const BasePoint& p);

// pi-rotation of the base about x0 (the base footprint of the fiber
// reflection) and reflection across the complete geodesic through a, b.
BasePoint base_rotate_pi(const ModelParams& params, const BasePoint& x0, const BasePoint& p);
BasePoint base_reflect_geodesic(const ModelParams& params, const BasePoint& a,
                                const BasePoint& b, const BasePoint& p);
double base_distance_to_geodesic(const ModelParams& params, const BasePoint& a,
                                 const BasePoint& b, const BasePoint& p);

// --- blow-up family -------------------------------------------------------

// Metric of the rescaled family on D(2 lambda), a model of
// E(-1/lambda^2, tau/lambda). lambda = 1 recovers metric_at(kappa=-1, tau).
MetricTensor rescaled_metric_at(double lambda, double tau, const BasePoint& p);
Mat3 rescaled_coframe_at(double lambda, double tau, const BasePoint& p);

AmbientPoint homothety(double lambda, const AmbientPoint& p);

// Returns (<dH v, dH w>_{ds_lambda^2} at H(p), lambda^2 <v, w>_{ds^2} at p),
// which must agree: consistency check of metric_at vs rescaled_metric_at.
std::pair<double, double> pullback_check(double lambda, double tau, const BasePoint& p,
                                         const Vec3& v, const Vec3& w);

// --- helpers shared with other modules ------------------------------------

void require_inside_disc(const ModelParams& params, const BasePoint& p);
std::complex<double> to_unit_disc(const ModelParams& params, const BasePoint& p);
BasePoint from_unit_disc(const ModelParams& params, const std::complex<double>& w);

}  // namespace ekt
