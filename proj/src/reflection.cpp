#include "ektlab/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ekt {

namespace {

bool near_origin(const BasePoint& p) { return std::hypot(p.x, p.y) <= 1e-12; }

double axis_base_distance(const ModelParams& params, const ReflectionAxis& axis,
                          const BasePoint& p) {
  if (axis.kind == ReflectionAxis::Kind::vertical_fiber)
    return std::hypot(p.x - axis.fiber_point.x, p.y - axis.fiber_point.y);
  return base_distance_to_geodesic(params, axis.geodesic_a, axis.geodesic_b, p);
}

}  // namespace

void validate_axis(const ModelParams& params, const ReflectionAxis& axis) {
  params.validate();
  if (axis.kind == ReflectionAxis::Kind::vertical_fiber) {
    if (params.kappa < 0.0) require_inside_disc(params, axis.fiber_point);
    if (params.tau > 0.0 && !near_origin(axis.fiber_point))
      fail(Errc::unsupported_axis,
           "vertical fibers away from the origin need tau = 0 in this model");
  } else {
    if (params.tau > 0.0)
      fail(Errc::unsupported_axis, "horizontal reflections are implemented for tau = 0 only");
    if (params.kappa < 0.0) {
      require_inside_disc(params, axis.geodesic_a);
      require_inside_disc(params, axis.geodesic_b);
    }
    const double gap = std::hypot(axis.geodesic_a.x - axis.geodesic_b.x,
                                  axis.geodesic_a.y - axis.geodesic_b.y);
    if (gap < 1e-12) fail(Errc::coincident_points, "horizontal axis needs two distinct points");
  }
}

AmbientPoint reflect_point(const ModelParams& params, const ReflectionAxis& axis,
                           const AmbientPoint& p) {
  validate_axis(params, axis);
  if (axis.kind == ReflectionAxis::Kind::vertical_fiber) {
    // pi-rotation about the fiber: the metric is invariant under the
    // simultaneous sign flip of the base chart centered at x0
    return AmbientPoint{base_rotate_pi(params, axis.fiber_point, p.base), p.t};
  }
  return AmbientPoint{base_reflect_geodesic(params, axis.geodesic_a, axis.geodesic_b, p.base),
                      2.0 * axis.level - p.t};
}

double isometry_check(const ModelParams& params, const ReflectionAxis& axis, int sample_count,
                      std::uint64_t seed) {
  validate_axis(params, axis);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double radius = params.kappa < 0.0 ? 0.85 * params.disc_radius() : 2.5;

  const double eps = tol().fd_step;
  double worst = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    BasePoint b{radius * unit(rng), radius * unit(rng)};
    while (params.kappa < 0.0 && b.r2() >= radius * radius)
      b = {radius * unit(rng), radius * unit(rng)};
    const AmbientPoint p{b, 2.0 * unit(rng)};

    Mat3 diff;
    for (int j = 0; j < 3; ++j) {
      Vec3 step = Vec3::Zero();
      step[j] = eps;
      const Vec3 fwd = to_vec(reflect_point(
          params, axis, AmbientPoint{{p.base.x + step.x(), p.base.y + step.y()}, p.t + step.z()}));
      const Vec3 bwd = to_vec(reflect_point(
          params, axis, AmbientPoint{{p.base.x - step.x(), p.base.y - step.y()}, p.t - step.z()}));
      diff.col(j) = (fwd - bwd) / (2.0 * eps);
    }

    const AmbientPoint q = reflect_point(params, axis, p);
    const MetricTensor g_p = metric_at(params, p.base);
    const MetricTensor g_q = metric_at(params, q.base);
    for (int pair = 0; pair < 3; ++pair) {
      const Vec3 v(unit(rng), unit(rng), unit(rng));
      const Vec3 w(unit(rng), unit(rng), unit(rng));
      const double before = v.dot(g_p * w);
      const double after = (diff * v).dot(g_q * (diff * w));
      const double scale = std::max({1.0, std::abs(before), std::abs(after)});
      worst = std::max(worst, std::abs(after - before) / scale);
    }
  }
  return worst;
}

ExtendedSurface extend_by_reflection(const ModelParams& params, const GraphMesh& solution,
                                     const ReflectionAxis& axis) {
  validate_axis(params, axis);
  SurfaceMesh half = lift_graph(solution);

  const double snap = std::max(solution.h * solution.h, 1e-12);
  std::vector<int> seam;
  for (std::size_t i = 0; i < half.vertex_count(); ++i) {
    if (!half.boundary[i]) continue;
    if (axis_base_distance(params, axis, half.vertices[i].base) > snap) continue;
    if (axis.kind == ReflectionAxis::Kind::horizontal_geodesic &&
        std::abs(half.vertices[i].t - axis.level) > snap)
      continue;
    seam.push_back(int(i));
  }
  if (seam.empty())
    fail(Errc::no_seam_found, "no boundary vertices within h^2 of the reflection axis");

  // snap seam vertices onto the axis so they are fixed to machine precision
  for (int v : seam) {
    if (axis.kind == ReflectionAxis::Kind::vertical_fiber) {
      half.vertices[v].base = axis.fiber_point;
    } else {
      const BasePoint mirrored =
          base_reflect_geodesic(params, axis.geodesic_a, axis.geodesic_b, half.vertices[v].base);
      half.vertices[v].base = BasePoint{0.5 * (half.vertices[v].base.x + mirrored.x),
                                        0.5 * (half.vertices[v].base.y + mirrored.y)};
      half.vertices[v].t = axis.level;
    }
  }

  ExtendedSurface ext;
  ext.axis = axis;
  ext.half1_vertices = int(half.vertex_count());
  ext.half1_triangles = half.triangles.size();
  ext.mesh.params = params;
  ext.mesh.h = solution.h;
  ext.mesh.vertices = half.vertices;
  ext.mesh.triangles = half.triangles;

  std::vector<char> is_seam(half.vertex_count(), 0);
  for (int v : seam) is_seam[v] = 1;

  std::vector<int> mirror(half.vertex_count(), -1);
  for (std::size_t i = 0; i < half.vertex_count(); ++i) {
    if (is_seam[i]) {
      mirror[i] = int(i);  // welded
      continue;
    }
    mirror[i] = int(ext.mesh.vertices.size());
    ext.mesh.vertices.push_back(reflect_point(params, axis, half.vertices[i]));
  }
  for (const auto& t : half.triangles)
    ext.mesh.triangles.push_back({mirror[t[0]], mirror[t[2]], mirror[t[1]]});  // flipped winding

  for (std::size_t i = 0; i < half.vertex_count(); ++i)
    ext.correspondence.push_back({int(i), mirror[i]});
  ext.seam_vertices = seam;
  ext.mesh.seam = seam;

  if (!recompute_boundary_flags(ext.mesh))
    fail(Errc::no_seam_found, "welded surface has non-manifold edges");
  return ext;
}

SeamReport seam_smoothness_report(const ModelParams& params, const ExtendedSurface& ext) {
  SeamReport report;
  report.seam_count = int(ext.seam_vertices.size());
  const SurfaceMesh& mesh = ext.mesh;
  const auto incidence = vertex_triangle_incidence(mesh);

  for (int v : ext.seam_vertices) {
    // welding leaves a single shared vertex; the residual gap is the
    // distance to its own reflection
    const AmbientPoint imaged = reflect_point(params, ext.axis, mesh.vertices[v]);
    report.c0_gap = std::max(report.c0_gap, (to_vec(imaged) - to_vec(mesh.vertices[v])).norm());

    const auto side1 = [&](int ti) { return ext.in_half1(ti); };
    const auto side2 = [&](int ti) { return !ext.in_half1(ti); };
    const auto n1 = ring_normal(mesh, v, incidence[v], side1);
    const auto n2 = ring_normal(mesh, v, incidence[v], side2);
    if (n1 && n2) {
      const double cosv = std::clamp(n1->dot(*n2), -1.0, 1.0);
      report.normal_kink_max = std::max(report.normal_kink_max, std::acos(cosv));
    }
    const auto k1 = quadric_curvature(mesh, v, incidence, side1);
    const auto k2 = quadric_curvature(mesh, v, incidence, side2);
    if (k1 && k2)
      report.curvature_jump_max = std::max(report.curvature_jump_max, std::abs(*k1 - *k2));
  }
  return report;
}

}  // namespace ekt
