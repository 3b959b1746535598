#pragma once

#include <cstdint>

#include "ektlab/surface.hpp"

namespace ekt {

// Reflection about a vertical fiber {x0} x R, or about a horizontal geodesic
// (the complete base geodesic through two points, at height t = level;
// product spaces only).
struct ReflectionAxis {
  enum class Kind { vertical_fiber, horizontal_geodesic };
  Kind kind = Kind::vertical_fiber;
  BasePoint fiber_point;
  BasePoint geodesic_a, geodesic_b;
  double level = 0.0;

  static ReflectionAxis vertical(const BasePoint& x0) {
    ReflectionAxis a;
    a.kind = Kind::vertical_fiber;
    a.fiber_point = x0;
    return a;
  }
  static ReflectionAxis horizontal(const BasePoint& a, const BasePoint& b, double level) {
    ReflectionAxis ax;
    ax.kind = Kind::horizontal_geodesic;
    ax.geodesic_a = a;
    ax.geodesic_b = b;
    ax.level = level;
    return ax;
  }
};

// Throws unsupported-axis for tau > 0 off-origin fibers and for horizontal
// axes outside product spaces (tau = 0).
void validate_axis(const ModelParams& params, const ReflectionAxis& axis);

AmbientPoint reflect_point(const ModelParams& params, const ReflectionAxis& axis,
                           const AmbientPoint& p);

// Max relative distortion of metric inner products under the differential of
// reflect_point (central differences), over seeded samples. Isometries stay
// below ~1e-8.
double isometry_check(const ModelParams& params, const ReflectionAxis& axis, int sample_count,
                      std::uint64_t seed = 20240);

struct ExtendedSurface {
  SurfaceMesh mesh;                              // welded double
  ReflectionAxis axis;
  std::vector<int> seam_vertices;                // welded (shared) vertices
  std::vector<std::pair<int, int>> correspondence;  // half-1 vertex -> mirror
  int half1_vertices = 0;
  std::size_t half1_triangles = 0;

  bool in_half1(int tri_index) const { return tri_index < int(half1_triangles); }
};

// S = Sigma u gamma u I(Sigma): reflects the lifted solution, welds the
// discrete seam (boundary vertices within h^2 of the axis, snapped onto it)
// and flips the winding of the mirror half so the orientation continues
// through the seam.
ExtendedSurface extend_by_reflection(const ModelParams& params, const GraphMesh& solution,
                                     const ReflectionAxis& axis);

struct SeamReport {
  double c0_gap = 0.0;             // max seam mismatch (0 after welding)
  double normal_kink_max = 0.0;    // max angle between one-sided ring normals
  double curvature_jump_max = 0.0; // max one-sided quadric-K difference
  int seam_count = 0;
};

SeamReport seam_smoothness_report(const ModelParams& params, const ExtendedSurface& ext);

}  // namespace ekt
