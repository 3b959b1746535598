#pragma once

#include <functional>
#include <optional>

#include "ektlab/mesh.hpp"

namespace ekt {

// Triangle mesh in ambient model coordinates (x, y, t). Graph solutions are
// lifted into this form; reflected/welded surfaces live here directly.
struct SurfaceMesh {
  ModelParams params;
  double h = 0.0;
  std::vector<AmbientPoint> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary;  // endpoint of a degree-1 edge
  std::vector<int> seam;       // welded seam vertices (sorted), empty for lifts

  std::size_t vertex_count() const { return vertices.size(); }
};

SurfaceMesh lift_graph(const GraphMesh& mesh);

// boundary flags from edge degrees; returns false if some edge has more
// than two incident triangles (non-manifold)
bool recompute_boundary_flags(SurfaceMesh& mesh);

// interior edges appear once in each direction
bool orientation_consistent(const SurfaceMesh& mesh);

std::vector<std::vector<int>> vertex_triangle_incidence(const SurfaceMesh& mesh);

// Orthonormalizing chart at vertex v: x -> coframe(v) * (x - v). First-order
// correction of the ambient metric for stencil work.
Vec3 chart_coords(const SurfaceMesh& mesh, int v, const AmbientPoint& p);

// Area-weighted normal of the selected incident triangles, computed in the
// chart at v. `tri_filter` restricts the ring (one-sided normals on welded
// surfaces); pass nullptr for all.
std::optional<Vec3> ring_normal(const SurfaceMesh& mesh, int v, const std::vector<int>& incident,
                                const std::function<bool(int)>& tri_filter);

// Osculating-quadric Gaussian curvature at v from a <= 2-ring stencil in the
// chart, Gaussian-weighted so that wildly distant stencil points (steep
// truncation walls) do not dominate the fit. Returns nullopt when the
// stencil is too small or the normal is degenerate.
std::optional<double> quadric_curvature(const SurfaceMesh& mesh, int v,
                                        const std::vector<std::vector<int>>& incidence,
                                        const std::function<bool(int)>& tri_filter);

// metric edge length via the midpoint metric
double edge_length(const SurfaceMesh& mesh, int a, int b);

}  // namespace ekt
