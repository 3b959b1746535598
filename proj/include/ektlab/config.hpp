#pragma once

namespace ekt {

// All fixed numerical constants used by the library live here so that runs
// are reproducible and reports can cite one configuration record.
struct Tolerances {
  // metric / algebraic identities
  double det_identity_rel = 1e-12;    // det(g) vs nu^4
  double pullback_rel = 1e-10;        // homothety pullback identity
  double geodesic_length_rel = 1e-8;  // polyline length vs closed form

  // domain handling
  double boundary_exclusion = 1e-9;   // reject r^2 > (1-this)*4/(-kappa)
  double junction_match = 1e-10;      // arc endpoints must agree to this
  double convexity_slack = 1e-12;     // Klein-model cross product slack

  // condition (2) bookkeeping
  double inequality_marginal = 1e-9;  // |2a - gamma| band flagged marginal
  double balance_rel = 1e-9;          // alpha(G) == beta(G) tolerance

  // reflection
  double fixed_point_abs = 1e-14;     // axis points fixed to this
  double isometry_distortion = 1e-8;  // finite-difference isometry check
  double fd_step = 1e-6;              // central difference step

  // analysis
  double scan_growth = 1.1;           // boundedness proxy: last <= 1.1 * max
  double curvature_scale_rel = 1e-10; // K~ * lambda^2 == K

  // meshing
  double min_angle_deg = 20.0;
  double interior_clearance = 0.7;    // interior seeds keep this * h off the boundary
};

const Tolerances& tol();

}  // namespace ekt
