#pragma once

#include "ektlab/mesh.hpp"

namespace ekt {

struct SolveOptions {
  double tol_residual = 1e-10;  // sup norm of the discrete first variation
  int max_iters = 200;
  double armijo_c = 1e-4;
  double min_step = 1e-12;
  enum class Init { zero, harmonic, warm } init = Init::harmonic;
};

struct SolveStats {
  bool converged = false;
  int iters = 0;
  double residual = 0.0;
  double energy = 0.0;
  std::vector<double> energy_history;    // non-increasing along accepted steps
  std::vector<double> residual_history;
};

// P1 Laplace extension of the boundary values (solver warm-up).
std::vector<double> harmonic_extension(const GraphMesh& mesh,
                                       const std::vector<double>& boundary_heights);

// Minimizes the discrete graph area over the interior heights with the given
// Dirichlet data (full-size vector; read at boundary indices). The functional
// is convex in the heights, so damped Newton with an Armijo line search
// converges globally; a gradient step backs up indefinite/failed factorizations.
// No-convergence is reported through the stats, with the best iterate kept.
SolveStats solve_plateau_graph(const ModelParams& params, GraphMesh& mesh,
                               const std::vector<double>& boundary_heights,
                               const SolveOptions& opts);

// Dirichlet data of the truncated problem: A arcs at +n, B arcs at -n, C arcs
// through regularize_data(., n); junction vertices average their two sides.
std::vector<double> assign_level_heights(const DomainSpec& spec, const GraphMesh& mesh, int n);

SolveStats solve_truncated_level(const DomainSpec& spec, GraphMesh& mesh, int n,
                                 const SolveOptions& opts);

struct ProbeRegion {
  BasePoint center;
  double radius = 0.0;
};

// Probe well inside the domain (distance to the boundary at least ~10% of
// the diameter for centered domains).
ProbeRegion default_probe(const DomainSpec& spec);

struct TruncationRun {
  std::vector<int> schedule;
  std::vector<std::vector<double>> level_heights;
  std::vector<SolveStats> level_stats;
  std::vector<double> level_area;
  std::vector<ProbeRegion> probes;
  // probe_sup_diffs[p][k] = sup over probe p of |u_{n_{k+1}} - u_{n_k}|.
  // Graphs with no C arcs are determined up to an additive constant only, so
  // their differences are taken after anchoring u at a reference vertex.
  std::vector<std::vector<double>> probe_sup_diffs;
  bool anchored = false;
  int anchor_vertex = -1;
  bool converged_on_probes = false;
  bool forced = false;
};

// Drives the truncation schedule with warm starts; refuses instances that
// fail the solvability criterion unless force is set.
TruncationRun run_jenkins_serrin(const DomainSpec& spec, GraphMesh& mesh,
                                 const std::vector<int>& schedule, const SolveOptions& opts,
                                 std::vector<ProbeRegion> probes = {}, bool force = false,
                                 double probe_tol = 1e-2);

// Solves level n from zero and from harmonic initialization and returns the
// interior sup-norm gap between the two results.
double uniqueness_probe(const DomainSpec& spec, const GraphMesh& mesh, int n,
                        const SolveOptions& opts);

// max(0, overshoot of the interior range beyond the boundary range)
double max_principle_violation(const GraphMesh& mesh);

double probe_sup_diff(const GraphMesh& mesh, const ProbeRegion& probe,
                      const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ekt
