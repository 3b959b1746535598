#pragma once

#include <optional>
#include <string>

#include "ektlab/analysis.hpp"
#include "ektlab/solver.hpp"

namespace ekt {

struct SolverConfig {
  double h = 0.05;
  std::vector<int> schedule = {1, 2, 3, 4, 5};
  double tol = 1e-10;
  std::optional<ProbeRegion> probe;
};

struct AnalysisConfig {
  std::optional<ReflectionAxis> axis;
  std::optional<AmbientPoint> seam_point;
  double scan_radius = 0.2;
  double ball_radius = 0.3;
};

struct Problem {
  std::string name;
  DomainSpec spec;  // validated
  SolverConfig solver;
  AnalysisConfig analysis;
};

// Parses and validates a problem file; parse and validation failures carry
// the offending field in the message.
Problem load_problem(const std::string& path);

void write_mesh_json(const GraphMesh& mesh, const std::string& path,
                     std::optional<int> level = std::nullopt, const std::string& problem = "");
GraphMesh read_mesh_json(const std::string& path);

void write_surface_json(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_surface_json(const std::string& path);

// Wavefront OBJ of the lifted/extended surface; per-vertex curvature and
// flags go to the <path>.attrs.json sidecar when a field is given.
void write_obj(const SurfaceMesh& mesh, const std::string& path,
               const CurvatureField* field = nullptr);

std::string axis_to_json(const ReflectionAxis& axis);
ReflectionAxis axis_from_json(const std::string& text);

}  // namespace ekt
