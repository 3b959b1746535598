#pragma once

#include "ektlab/reflection.hpp"
#include "ektlab/surface.hpp"

namespace ekt {

struct CurvatureField {
  std::vector<double> k;        // per vertex; 0 where unreliable
  std::vector<bool> reliable;   // interior vertex with a usable stencil
  int stencil_rings = 2;
};

// Per-vertex Gaussian curvature by osculating-quadric fitting in the
// metric-orthonormalized chart of each vertex. Boundary vertices are flagged
// unreliable. Throws insufficient-stencil when no vertex has a usable stencil.
CurvatureField gaussian_curvature(const SurfaceMesh& mesh);

struct IntrinsicBall {
  int source = -1;
  double radius = 0.0;
  std::vector<double> dist;    // smoothed Dijkstra distances
  std::vector<bool> inside;    // dist < radius
  double boundary_clearance = 0.0;  // distance to the nearest non-seam boundary vertex
};

// Dijkstra over metric edge lengths from `source`, one smoothing pass.
IntrinsicBall intrinsic_ball(const SurfaceMesh& mesh, int source, double radius);

struct FResult {
  std::vector<double> f;  // sqrt(|K|) * dist-to-ball-boundary, 0 outside
  int argmax = -1;
  double fmax = 0.0;
  bool degenerate = false;  // f vanished identically (flat field)
};

// f(x) = sqrt(|K(x)|) d(x, boundary of B); vanishes on the discrete ball
// boundary by construction. Throws ball-exceeds-mesh when the ball runs into
// the outer (non-seam) mesh boundary.
FResult f_function(const CurvatureField& field, const SurfaceMesh& mesh,
                   const IntrinsicBall& ball);

struct CurvatureScan {
  AmbientPoint seam_point;
  double radius = 0.0;
  std::vector<int> levels;
  std::vector<double> sup_abs_k;   // per level, over the intrinsic ball
  std::vector<double> clearances;  // per level, intrinsic distance to the outer boundary
  bool passed = false;
  bool insufficient_levels = false;  // fewer than 4 levels: trivially bounded
};

// Boundedness proxy over the truncation levels: sup |K_n| over the intrinsic
// ball around the seam point on each doubled surface; PASS when the last
// value stays within growth-factor 1.1 of the running maximum.
CurvatureScan curvature_scan(const std::vector<int>& levels,
                             const std::vector<const ExtendedSurface*>& surfaces,
                             const AmbientPoint& seam_point, double radius);

struct BlowupFrame {
  double lambda = 1.0;
  SurfaceMesh mesh;        // image under the homothety, metric of E(-1/l^2, tau/l)
  CurvatureField field;    // curvature divided by lambda^2
  double rho_tilde = 0.0;  // lambda * rho / 2
};

// Homothety rescaling of a kappa = -1 surface with the curvature scaling law
// K~ = K / lambda^2 applied exactly.
BlowupFrame blowup_rescale(const SurfaceMesh& mesh, const CurvatureField& field, double lambda,
                           double rho = 0.0);

// Deviation of the rescaled-family coframe from the identity over a polar
// grid of the radius-R ball: max(mu-1, (tau/lambda) mu r) at r = R.
double euclidean_limit_deviation(double lambda, double tau, double radius,
                                 int radial_samples = 8, int angular_samples = 16);

// rho~ = f(p_k) / 2 per level
std::vector<double> grow_radius_check(const std::vector<double>& f_argmax_values);

}  // namespace ekt
