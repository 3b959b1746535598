#pragma once

#include <array>
#include <vector>

#include "ektlab/boundary.hpp"

namespace ekt {

// Where a boundary mesh vertex came from: arc index and its arc-length
// parameter. Junction vertices additionally know the incoming arc.
struct BoundaryVertexInfo {
  int arc = -1;
  double s = 0.0;
  bool junction = false;
  int prev_arc = -1;  // arc ending at this junction (junction vertices only)
};

struct GraphMesh {
  ModelParams params;
  double h = 0.0;
  std::vector<BasePoint> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<bool> boundary;                 // per vertex
  std::vector<BoundaryVertexInfo> binfo;      // per vertex; valid when boundary
  std::vector<double> heights;                // u per vertex

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  double min_angle_deg() const;
  // every edge in <= 2 triangles, boundary edges = degree-1 edges
  bool conforming() const;
};

// Quality triangulation of the validated convex domain: boundary vertices
// on the arc polylines with junctions exact, hex-seeded interior, Delaunay
// connectivity, smoothing until min angle >= 20 degrees.
GraphMesh build_mesh(const DomainSpec& spec, double h);

// Discrete graph area: per-triangle area density at the centroid with the
// affine gradient, times the Euclidean triangle area (the centroid-rule
// quadrature of the M(kappa) area integral).
double discrete_area(const ModelParams& params, const GraphMesh& mesh);

}  // namespace ekt
