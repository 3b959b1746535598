#include "ektlab/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace ekt {

namespace {

// Per-triangle quantities that do not change across Newton iterations.
struct TriCache {
  std::array<int, 3> v;
  double area = 0.0;        // Euclidean triangle area
  double nu = 0.0;          // conformal factor at the centroid
  Vec2 drift;               // tau * nu * (y_c, -x_c)
  std::array<Vec2, 3> gv;   // gradient coefficients: grad u = sum u_i gv[i]
};

struct Assembly {
  std::vector<TriCache> tris;
  std::vector<int> dof;     // vertex -> interior dof index, -1 for boundary
  std::vector<int> vert;    // dof -> vertex
};

Assembly build_assembly(const ModelParams& params, const GraphMesh& mesh) {
  Assembly as;
  as.dof.assign(mesh.vertex_count(), -1);
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (!mesh.boundary[i]) {
      as.dof[i] = int(as.vert.size());
      as.vert.push_back(int(i));
    }
  }
  as.tris.reserve(mesh.triangle_count());
  for (const auto& t : mesh.triangles) {
    TriCache tc;
    tc.v = t;
    const Vec2 p0 = to_vec(mesh.vertices[t[0]]);
    const Vec2 p1 = to_vec(mesh.vertices[t[1]]);
    const Vec2 p2 = to_vec(mesh.vertices[t[2]]);
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                       (p1.y() - p0.y()) * (p2.x() - p0.x());
    if (std::abs(det) < 1e-300) fail(Errc::degenerate_triangle, "zero-area triangle in solve");
    tc.area = 0.5 * std::abs(det);
    Eigen::Matrix2d d;
    d.col(0) = p1 - p0;
    d.col(1) = p2 - p0;
    const Eigen::Matrix2d dinv_t = d.inverse().transpose();
    tc.gv[1] = dinv_t.col(0);
    tc.gv[2] = dinv_t.col(1);
    tc.gv[0] = -tc.gv[1] - tc.gv[2];
    const BasePoint c{(p0.x() + p1.x() + p2.x()) / 3.0, (p0.y() + p1.y() + p2.y()) / 3.0};
    tc.nu = conformal_factor(params, c);
    tc.drift = params.tau * tc.nu * Vec2(c.y, -c.x);
    as.tris.push_back(tc);
  }
  return as;
}

double energy(const Assembly& as, const std::vector<double>& u) {
  double total = 0.0;
  for (const TriCache& tc : as.tris) {
    Vec2 grad = Vec2::Zero();
    for (int k = 0; k < 3; ++k) grad += u[tc.v[k]] * tc.gv[k];
    const Vec2 w = grad + tc.drift;
    total += tc.area * tc.nu * std::sqrt(tc.nu * tc.nu + w.squaredNorm());
  }
  return total;
}

// gradient of the energy on interior dofs; returns sup norm
double gradient(const Assembly& as, const std::vector<double>& u, Eigen::VectorXd& g) {
  g.setZero();
  for (const TriCache& tc : as.tris) {
    Vec2 grad = Vec2::Zero();
    for (int k = 0; k < 3; ++k) grad += u[tc.v[k]] * tc.gv[k];
    const Vec2 w = grad + tc.drift;
    const double root = std::sqrt(tc.nu * tc.nu + w.squaredNorm());
    const double scale = tc.area * tc.nu / root;
    for (int k = 0; k < 3; ++k) {
      const int dof = as.dof[tc.v[k]];
      if (dof >= 0) g[dof] += scale * w.dot(tc.gv[k]);
    }
  }
  return g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
}

void hessian_triplets(const Assembly& as, const std::vector<double>& u,
                      std::vector<Eigen::Triplet<double>>& trip) {
  trip.clear();
  for (const TriCache& tc : as.tris) {
    Vec2 grad = Vec2::Zero();
    for (int k = 0; k < 3; ++k) grad += u[tc.v[k]] * tc.gv[k];
    const Vec2 w = grad + tc.drift;
    const double q = tc.nu * tc.nu + w.squaredNorm();
    const double root = std::sqrt(q);
    const double scale = tc.area * tc.nu / root;
    for (int a = 0; a < 3; ++a) {
      const int da = as.dof[tc.v[a]];
      if (da < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int db = as.dof[tc.v[b]];
        if (db < 0) continue;
        const double hab =
            scale * (tc.gv[a].dot(tc.gv[b]) - w.dot(tc.gv[a]) * w.dot(tc.gv[b]) / q);
        trip.emplace_back(da, db, hab);
      }
    }
  }
}

}  // namespace

std::vector<double> harmonic_extension(const GraphMesh& mesh,
                                       const std::vector<double>& boundary_heights) {
  std::vector<int> dof(mesh.vertex_count(), -1);
  std::vector<int> vert;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.boundary[i]) {
      dof[i] = int(vert.size());
      vert.push_back(int(i));
    }
  const int n = int(vert.size());
  std::vector<double> out = boundary_heights;
  if (n == 0) return out;

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& t : mesh.triangles) {
    const Vec2 p0 = to_vec(mesh.vertices[t[0]]);
    const Vec2 p1 = to_vec(mesh.vertices[t[1]]);
    const Vec2 p2 = to_vec(mesh.vertices[t[2]]);
    Eigen::Matrix2d d;
    d.col(0) = p1 - p0;
    d.col(1) = p2 - p0;
    const double det = d.determinant();
    const double area = 0.5 * std::abs(det);
    const Eigen::Matrix2d dinv_t = d.inverse().transpose();
    std::array<Vec2, 3> gv;
    gv[1] = dinv_t.col(0);
    gv[2] = dinv_t.col(1);
    gv[0] = -gv[1] - gv[2];
    for (int a = 0; a < 3; ++a) {
      const int da = dof[t[a]];
      if (da < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const double k = area * gv[a].dot(gv[b]);
        const int db = dof[t[b]];
        if (db >= 0)
          trip.emplace_back(da, db, k);
        else
          rhs[da] -= k * boundary_heights[t[b]];
      }
    }
  }
  Eigen::SparseMatrix<double> laplace(n, n);
  laplace.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(laplace);
  const Eigen::VectorXd x = solver.solve(rhs);
  for (int i = 0; i < n; ++i) out[vert[i]] = x[i];
  return out;
}

SolveStats solve_plateau_graph(const ModelParams& params, GraphMesh& mesh,
                               const std::vector<double>& boundary_heights,
                               const SolveOptions& opts) {
  if (boundary_heights.size() != mesh.vertex_count())
    fail(Errc::invalid_argument, "boundary_heights must be a full-size vector");
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
    if (mesh.boundary[i] && !std::isfinite(boundary_heights[i]))
      fail(Errc::invalid_argument, "boundary heights must be finite");

  const Assembly as = build_assembly(params, mesh);
  const int n = int(as.vert.size());

  std::vector<double> u(mesh.vertex_count(), 0.0);
  switch (opts.init) {
    case SolveOptions::Init::zero:
      u = boundary_heights;
      for (int i = 0; i < n; ++i) u[as.vert[i]] = 0.0;
      break;
    case SolveOptions::Init::harmonic:
      u = harmonic_extension(mesh, boundary_heights);
      break;
    case SolveOptions::Init::warm:
      u = mesh.heights;
      for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
        if (mesh.boundary[i]) u[i] = boundary_heights[i];
      break;
  }

  SolveStats stats;
  if (n == 0) {
    mesh.heights = u;
    stats.converged = true;
    stats.energy = energy(as, u);
    return stats;
  }

  Eigen::VectorXd g(n);
  Eigen::SparseMatrix<double> h(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool pattern_ready = false;

  double e_cur = energy(as, u);
  stats.energy_history.push_back(e_cur);
  bool converged = false;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const double res = gradient(as, u, g);
    stats.residual_history.push_back(res);
    stats.residual = res;
    stats.iters = iter;
    if (res <= opts.tol_residual) {
      if (converged) break;  // one polish step after first hitting the target
      converged = true;
      if (res <= 1e-3 * opts.tol_residual) break;
    }

    hessian_triplets(as, u, trip);
    h.setFromTriplets(trip.begin(), trip.end());
    if (!pattern_ready) {
      ldlt.analyzePattern(h);
      pattern_ready = true;
    }
    ldlt.factorize(h);

    Eigen::VectorXd dir;
    bool newton_ok = ldlt.info() == Eigen::Success;
    if (newton_ok) {
      dir = ldlt.solve(-g);
      newton_ok = dir.allFinite() && g.dot(dir) < 0.0;
    }
    if (!newton_ok) dir = -g;  // gradient fallback

    const double slope = g.dot(dir);
    double step = 1.0;
    std::vector<double> trial = u;
    double e_trial = 0.0;
    bool accepted = false;
    while (step >= opts.min_step) {
      for (int i = 0; i < n; ++i) trial[as.vert[i]] = u[as.vert[i]] + step * dir[i];
      e_trial = energy(as, trial);
      if (e_trial <= e_cur + opts.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      // once the predicted decrease drops under the rounding floor of the
      // energy, Armijo cannot discriminate; fall back to residual descent
      if (std::abs(step * slope) < 1e-14 * std::max(1.0, std::abs(e_cur))) {
        Eigen::VectorXd g_trial(n);
        const double res_trial = gradient(as, trial, g_trial);
        if (res_trial < stats.residual) {
          accepted = true;
          e_trial = energy(as, trial);
        }
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled line search: keep the best iterate
    u = trial;
    e_cur = std::min(e_cur, e_trial);
    stats.energy_history.push_back(e_cur);
  }

  stats.converged = stats.residual <= opts.tol_residual || converged;
  stats.energy = e_cur;
  mesh.heights = u;
  return stats;
}

std::vector<double> assign_level_heights(const DomainSpec& spec, const GraphMesh& mesh, int n) {
  if (n < 1) fail(Errc::invalid_argument, "level n >= 1");
  // regularize every C arc once per level
  std::vector<BoundaryArc> regs(spec.arcs.size());
  for (std::size_t i = 0; i < spec.arcs.size(); ++i)
    if (spec.arcs[i].kind == ArcKind::C) regs[i] = regularize_data(spec.arcs[i], n);

  const auto arc_value = [&](int arc_id, double s) -> double {
    const BoundaryArc& arc = spec.arcs[arc_id];
    switch (arc.kind) {
      case ArcKind::A: return double(n);
      case ArcKind::B: return -double(n);
      case ArcKind::C: return regs[arc_id].data_at(s);
    }
    return 0.0;
  };

  std::vector<double> out(mesh.vertex_count(), 0.0);
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (!mesh.boundary[i]) continue;
    const BoundaryVertexInfo& info = mesh.binfo[i];
    if (info.junction) {
      const double incoming = arc_value(info.prev_arc, spec.arcs[info.prev_arc].length());
      const double outgoing = arc_value(info.arc, 0.0);
      out[i] = 0.5 * (incoming + outgoing);
    } else {
      out[i] = arc_value(info.arc, info.s);
    }
  }
  return out;
}

SolveStats solve_truncated_level(const DomainSpec& spec, GraphMesh& mesh, int n,
                                 const SolveOptions& opts) {
  return solve_plateau_graph(spec.params, mesh, assign_level_heights(spec, mesh, n), opts);
}

ProbeRegion default_probe(const DomainSpec& spec) {
  // the largest centroid disc at distance >= 10% of the diameter from the
  // boundary; thin domains fall back to half the centroid clearance
  const std::vector<BasePoint> junc = spec.junctions();
  BasePoint c{0.0, 0.0};
  for (const BasePoint& p : junc) {
    c.x += p.x / double(junc.size());
    c.y += p.y / double(junc.size());
  }
  double dist = 1e300;
  for (const BoundaryArc& arc : spec.arcs)
    for (const BasePoint& p : arc.polyline)
      dist = std::min(dist, std::hypot(p.x - c.x, p.y - c.y));
  const double radius = dist - 0.1 * spec.diameter();
  return ProbeRegion{c, radius >= 0.25 * dist ? radius : 0.5 * dist};
}

double probe_sup_diff(const GraphMesh& mesh, const ProbeRegion& probe,
                      const std::vector<double>& a, const std::vector<double>& b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    const BasePoint& p = mesh.vertices[i];
    if (std::hypot(p.x - probe.center.x, p.y - probe.center.y) > probe.radius) continue;
    sup = std::max(sup, std::abs(a[i] - b[i]));
  }
  return sup;
}

TruncationRun run_jenkins_serrin(const DomainSpec& spec, GraphMesh& mesh,
                                 const std::vector<int>& schedule, const SolveOptions& opts,
                                 std::vector<ProbeRegion> probes, bool force,
                                 double probe_tol) {
  if (schedule.empty()) fail(Errc::invalid_argument, "empty schedule");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    if (schedule[i] >= schedule[i + 1])
      fail(Errc::invalid_argument, "schedule must be strictly increasing");

  const SolvabilityVerdict verdict = check_jenkins_serrin(spec);
  if (!verdict.solvable && !force)
    fail(Errc::not_solvable_refused,
         "instance fails the solvability criterion (" +
             std::to_string(verdict.witnesses.size()) + " witness polygons); use force to run");

  TruncationRun run;
  run.forced = !verdict.solvable;
  if (probes.empty()) probes.push_back(default_probe(spec));
  for (const ProbeRegion& p : probes) {
    double dist = 1e300;
    for (const BoundaryArc& arc : spec.arcs)
      for (const BasePoint& q : arc.polyline)
        dist = std::min(dist, std::hypot(q.x - p.center.x, q.y - p.center.y));
    if (dist - p.radius < 2.0 * mesh.h)
      fail(Errc::invalid_argument, "probe region closer than 2h to the boundary");
  }
  run.probes = probes;

  // a domain with no A/B arcs and bounded data has a level-independent
  // truncation once n dominates the data: collapse the schedule
  std::vector<int> effective = schedule;
  if (!spec.has_c_arcs() || std::any_of(spec.arcs.begin(), spec.arcs.end(), [](const auto& a) {
        return a.kind != ArcKind::C;
      })) {
    // keep as given
  } else {
    double sup = 0.0;
    bool bounded = true;
    for (const BoundaryArc& arc : spec.arcs) {
      for (int j = 0; j <= 64; ++j) {
        const double v = arc.data_at(arc.length() * j / 64.0);
        if (std::isinf(v))
          bounded = false;
        else
          sup = std::max(sup, std::abs(v));
      }
    }
    if (bounded) effective = {std::max(schedule.back(), int(std::ceil(sup)) + 1)};
  }
  run.schedule = effective;

  SolveOptions level_opts = opts;
  for (std::size_t k = 0; k < effective.size(); ++k) {
    if (k > 0) level_opts.init = SolveOptions::Init::warm;
    const SolveStats stats = solve_truncated_level(spec, mesh, effective[k], level_opts);
    run.level_stats.push_back(stats);
    run.level_heights.push_back(mesh.heights);
    run.level_area.push_back(discrete_area(spec.params, mesh));
  }

  run.anchored = !spec.has_c_arcs();
  if (run.anchored) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
      if (mesh.boundary[i]) continue;
      const double d = std::hypot(mesh.vertices[i].x - probes[0].center.x,
                                  mesh.vertices[i].y - probes[0].center.y);
      if (d < best) {
        best = d;
        run.anchor_vertex = int(i);
      }
    }
  }
  run.probe_sup_diffs.assign(probes.size(), {});
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (std::size_t k = 0; k + 1 < run.level_heights.size(); ++k) {
      std::vector<double> hi = run.level_heights[k + 1];
      std::vector<double> lo = run.level_heights[k];
      if (run.anchored && run.anchor_vertex >= 0) {
        for (double& v : hi) v -= run.level_heights[k + 1][run.anchor_vertex];
        for (double& v : lo) v -= run.level_heights[k][run.anchor_vertex];
      }
      run.probe_sup_diffs[p].push_back(probe_sup_diff(mesh, probes[p], hi, lo));
    }
  }

  run.converged_on_probes = true;
  for (const auto& diffs : run.probe_sup_diffs) {
    if (diffs.empty()) continue;
    if (diffs.back() > probe_tol) run.converged_on_probes = false;
  }
  return run;
}

double uniqueness_probe(const DomainSpec& spec, const GraphMesh& mesh, int n,
                        const SolveOptions& opts) {
  GraphMesh a = mesh;
  GraphMesh b = mesh;
  SolveOptions oa = opts;
  oa.init = SolveOptions::Init::zero;
  SolveOptions ob = opts;
  ob.init = SolveOptions::Init::harmonic;
  solve_truncated_level(spec, a, n, oa);
  solve_truncated_level(spec, b, n, ob);
  double gap = 0.0;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.boundary[i]) gap = std::max(gap, std::abs(a.heights[i] - b.heights[i]));
  return gap;
}

double max_principle_violation(const GraphMesh& mesh) {
  double bd_min = 1e300, bd_max = -1e300;
  double in_min = 1e300, in_max = -1e300;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.boundary[i]) {
      bd_min = std::min(bd_min, mesh.heights[i]);
      bd_max = std::max(bd_max, mesh.heights[i]);
    } else {
      in_min = std::min(in_min, mesh.heights[i]);
      in_max = std::max(in_max, mesh.heights[i]);
    }
  }
  if (in_min > in_max) return 0.0;  // no interior vertices
  return std::max({0.0, in_max - bd_max, bd_min - in_min});
}

}  // namespace ekt
