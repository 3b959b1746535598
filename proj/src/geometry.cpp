#include "ektlab/geometry.hpp"

#include <cmath>
#include <limits>

namespace ekt {

namespace {

using cplx = std::complex<double>;

// Moebius map of the unit disc taking w0 to the origin, and its inverse.
cplx mobius_to_origin(const cplx& w0, const cplx& z) { return (z - w0) / (1.0 - std::conj(w0) * z); }
cplx mobius_from_origin(const cplx& w0, const cplx& z) { return (z + w0) / (1.0 + std::conj(w0) * z); }

}  // namespace

const Tolerances& tol() {
  static const Tolerances t{};
  return t;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::point_outside_disc: return "point-outside-disc";
    case Errc::coincident_points: return "coincident-points";
    case Errc::non_convex_domain: return "non-convex-domain";
    case Errc::adjacent_same_label: return "adjacent-same-label";
    case Errc::non_jordan_boundary: return "non-jordan-boundary";
    case Errc::polygon_not_admissible: return "polygon-not-admissible";
    case Errc::meshing_failure: return "meshing-failure";
    case Errc::degenerate_triangle: return "degenerate-triangle";
    case Errc::unsupported_axis: return "unsupported-axis";
    case Errc::no_seam_found: return "no-seam-found";
    case Errc::insufficient_stencil: return "insufficient-stencil";
    case Errc::ball_exceeds_mesh: return "ball-exceeds-mesh";
    case Errc::seam_point_outside_gamma: return "seam-point-outside-gamma";
    case Errc::compact_exceeds_disc: return "compact-exceeds-disc";
    case Errc::not_solvable_refused: return "not-solvable-refused";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown-error";
}

double ModelParams::disc_radius() const {
  if (kappa == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(-kappa);
}

void ModelParams::validate() const {
  if (!(kappa <= 0.0) || !std::isfinite(kappa))
    fail(Errc::invalid_argument, "kappa must be finite and <= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    fail(Errc::invalid_argument, "tau must be finite and >= 0");
}

void require_inside_disc(const ModelParams& params, const BasePoint& p) {
  if (params.kappa == 0.0) return;
  const double limit = (1.0 - tol().boundary_exclusion) * 4.0 / (-params.kappa);
  if (p.r2() > limit)
    fail(Errc::point_outside_disc,
         "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") with kappa = " +
             std::to_string(params.kappa));
}

double conformal_factor(const ModelParams& params, const BasePoint& p) {
  require_inside_disc(params, p);
  return 1.0 / (1.0 + params.kappa * p.r2() / 4.0);
}

MetricTensor metric_at(const ModelParams& params, const BasePoint& p) {
  const double nu = conformal_factor(params, p);
  const double tau = params.tau;
  MetricTensor g;
  const double nu2 = nu * nu;
  g(0, 0) = nu2 * (1.0 + tau * tau * p.y * p.y);
  g(1, 1) = nu2 * (1.0 + tau * tau * p.x * p.x);
  g(0, 1) = g(1, 0) = -tau * tau * nu2 * p.x * p.y;
  g(0, 2) = g(2, 0) = tau * nu * p.y;
  g(1, 2) = g(2, 1) = -tau * nu * p.x;
  g(2, 2) = 1.0;
  return g;
}

Mat3 metric_coframe(const ModelParams& params, const BasePoint& p) {
  const double nu = conformal_factor(params, p);
  Mat3 e = Mat3::Zero();
  e(0, 0) = nu;
  e(1, 1) = nu;
  e(2, 0) = params.tau * nu * p.y;
  e(2, 1) = -params.tau * nu * p.x;
  e(2, 2) = 1.0;
  return e;
}

double graph_area_element(const ModelParams& params, const BasePoint& p, const Vec2& grad_u) {
  const double nu = conformal_factor(params, p);
  const double a = params.tau * nu * p.y + grad_u.x();
  const double b = -params.tau * nu * p.x + grad_u.y();
  return nu * std::sqrt(nu * nu + a * a + b * b);
}

std::complex<double> to_unit_disc(const ModelParams& params, const BasePoint& p) {
  const double r0 = params.disc_radius();
  return cplx(p.x / r0, p.y / r0);
}

BasePoint from_unit_disc(const ModelParams& params, const std::complex<double>& w) {
  const double r0 = params.disc_radius();
  return BasePoint{w.real() * r0, w.imag() * r0};
}

double base_distance(const ModelParams& params, const BasePoint& p, const BasePoint& q) {
  require_inside_disc(params, p);
  require_inside_disc(params, q);
  if (params.kappa == 0.0) return std::hypot(p.x - q.x, p.y - q.y);
  const cplx wp = to_unit_disc(params, p);
  const cplx wq = to_unit_disc(params, q);
  const double m = std::abs(mobius_to_origin(wp, wq));
  return params.disc_radius() * std::atanh(m);
}

GeodesicSegment geodesic_between(const ModelParams& params, const BasePoint& p,
                                 const BasePoint& q, int samples) {
  require_inside_disc(params, p);
  require_inside_disc(params, q);
  if (samples < 2) fail(Errc::invalid_argument, "geodesic_between needs samples >= 2");
  const double scale = std::max({1.0, std::abs(p.x), std::abs(p.y), std::abs(q.x), std::abs(q.y)});
  if (std::hypot(p.x - q.x, p.y - q.y) < 1e-14 * scale)
    fail(Errc::coincident_points, "geodesic endpoints coincide");

  GeodesicSegment seg;
  seg.a = p;
  seg.b = q;
  seg.polyline.resize(samples);
  if (params.kappa == 0.0) {
    for (int j = 0; j < samples; ++j) {
      const double s = double(j) / double(samples - 1);
      seg.polyline[j] = BasePoint{p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)};
    }
    seg.length = std::hypot(p.x - q.x, p.y - q.y);
  } else {
    const cplx wp = to_unit_disc(params, p);
    const cplx wq = to_unit_disc(params, q);
    const cplx target = mobius_to_origin(wp, wq);
    const double m = std::abs(target);
    const cplx dir = target / m;
    const double d_hyp = 2.0 * std::atanh(m);  // unit-disc, curvature -1
    for (int j = 0; j < samples; ++j) {
      const double sigma = d_hyp * double(j) / double(samples - 1);
      const double rho = std::tanh(sigma / 2.0);
      seg.polyline[j] = from_unit_disc(params, mobius_from_origin(wp, rho * dir));
    }
    seg.length = params.disc_radius() * std::atanh(m);
  }
  seg.polyline.front() = p;
  seg.polyline.back() = q;
  return seg;
}

double geodesic_initial_direction(const ModelParams& params, const BasePoint& from,
                                  const BasePoint& to) {
  if (params.kappa == 0.0) return std::atan2(to.y - from.y, to.x - from.x);
  const cplx wf = to_unit_disc(params, from);
  const cplx wt = to_unit_disc(params, to);
  return std::arg(mobius_to_origin(wf, wt));
}

Vec2 klein_coords(const ModelParams& params, const BasePoint& p) {
  if (params.kappa == 0.0) return Vec2(p.x, p.y);
  const cplx w = to_unit_disc(params, p);
  const double denom = 1.0 + std::norm(w);
  return Vec2(2.0 * w.real() / denom, 2.0 * w.imag() / denom);
}

BasePoint base_rotate_pi(const ModelParams& params, const BasePoint& x0, const BasePoint& p) {
  if (params.kappa == 0.0) return BasePoint{2.0 * x0.x - p.x, 2.0 * x0.y - p.y};
  // fused form of conjugating the sign flip by the disc translation to x0
  const cplx w0 = to_unit_disc(params, x0);
  const cplx w = to_unit_disc(params, p);
  const double n0 = std::norm(w0);
  const cplx image = (2.0 * w0 - w * (1.0 + n0)) / (1.0 + n0 - 2.0 * std::conj(w0) * w);
  return from_unit_disc(params, image);
}

BasePoint base_reflect_geodesic(const ModelParams& params, const BasePoint& a,
                                const BasePoint& b, const BasePoint& p) {
  if (params.kappa == 0.0) {
    const Vec2 d = (to_vec(b) - to_vec(a)).normalized();
    const Vec2 v = to_vec(p) - to_vec(a);
    const Vec2 refl = 2.0 * d * d.dot(v) - v;
    return BasePoint{a.x + refl.x(), a.y + refl.y()};
  }
  // Conjugate by the Moebius map sending a to the origin: the geodesic
  // becomes the diameter at angle theta, reflection is the conjugation mirror.
  const cplx wa = to_unit_disc(params, a);
  const cplx wb = to_unit_disc(params, b);
  const cplx w = to_unit_disc(params, p);
  const cplx target = mobius_to_origin(wa, wb);
  const cplx dir = target / std::abs(target);
  const cplx mirrored = dir * dir * std::conj(mobius_to_origin(wa, w));
  return from_unit_disc(params, mobius_from_origin(wa, mirrored));
}

double base_distance_to_geodesic(const ModelParams& params, const BasePoint& a,
                                 const BasePoint& b, const BasePoint& p) {
  const BasePoint mirrored = base_reflect_geodesic(params, a, b, p);
  const double d = std::hypot(mirrored.x - p.x, mirrored.y - p.y);
  if (params.kappa == 0.0) return 0.5 * d;
  if (d < 1e-15) return 0.0;
  return 0.5 * base_distance(params, p, mirrored);
}

MetricTensor rescaled_metric_at(double lambda, double tau, const BasePoint& p) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  if (p.r2() >= (1.0 - tol().boundary_exclusion) * 4.0 * lambda * lambda)
    fail(Errc::point_outside_disc, "point outside rescaled disc D(2 lambda)");
  const ModelParams scaled{-1.0 / (lambda * lambda), tau / lambda};
  return metric_at(scaled, p);
}

Mat3 rescaled_coframe_at(double lambda, double tau, const BasePoint& p) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  if (p.r2() >= (1.0 - tol().boundary_exclusion) * 4.0 * lambda * lambda)
    fail(Errc::point_outside_disc, "point outside rescaled disc D(2 lambda)");
  const ModelParams scaled{-1.0 / (lambda * lambda), tau / lambda};
  return metric_coframe(scaled, p);
}

AmbientPoint homothety(double lambda, const AmbientPoint& p) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  return AmbientPoint{BasePoint{lambda * p.base.x, lambda * p.base.y}, lambda * p.t};
}

std::pair<double, double> pullback_check(double lambda, double tau, const BasePoint& p,
                                         const Vec3& v, const Vec3& w) {
  const ModelParams base{-1.0, tau};
  require_inside_disc(base, p);
  const MetricTensor g = metric_at(base, p);
  const BasePoint q{lambda * p.x, lambda * p.y};
  const MetricTensor gk = rescaled_metric_at(lambda, tau, q);
  const Vec3 dv = lambda * v;
  const Vec3 dw = lambda * w;
  const double lhs = dv.dot(gk * dw);
  const double rhs = lambda * lambda * v.dot(g * w);
  return {lhs, rhs};
}

}  // namespace ekt
