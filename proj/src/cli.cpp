#include "ektlab/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace ekt {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

int usage_errors_to_exit(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::io_error:
    case Errc::invalid_argument:
    case Errc::non_convex_domain:
    case Errc::adjacent_same_label:
    case Errc::non_jordan_boundary:
    case Errc::point_outside_disc:
      return exit_usage;
    default:
      return exit_negative;
  }
}

json verdict_to_json(const SolvabilityVerdict& v) {
  json out;
  out["solvable"] = v.solvable;
  out["inconclusive"] = v.inconclusive;
  out["marginal"] = v.marginal;
  out["has_c_arcs"] = v.has_c_arcs;
  out["extended_data"] = v.extended_data;
  out["alpha_boundary"] = v.alpha_boundary;
  out["beta_boundary"] = v.beta_boundary;
  out["polygons_checked"] = v.polygons_checked;
  json witnesses = json::array();
  for (const ConditionViolation& w : v.witnesses) {
    witnesses.push_back(json{{"vertices", w.polygon.junction_ids},
                             {"alpha", w.measures.alpha},
                             {"beta", w.measures.beta},
                             {"gamma", w.measures.gamma},
                             {"inequality", w.inequality}});
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

json stats_to_json(const SolveStats& s) {
  return json{{"converged", s.converged},
              {"iterations", s.iters},
              {"residual", s.residual},
              {"energy", s.energy}};
}

struct RunMeta {
  std::string problem_name;
  ModelParams params;
  double h = 0.0;
  std::vector<int> schedule;
  double tol = 1e-10;
  ProbeRegion probe;
  AnalysisConfig analysis;
  std::uint64_t seed = 0;
};

void write_run_meta(const RunMeta& meta, const TruncationRun& run, const fs::path& dir) {
  json j;
  j["schema"] = "ektlab.run/1";
  j["problem"] = meta.problem_name;
  j["model"] = json{{"kappa", meta.params.kappa}, {"tau", meta.params.tau}};
  j["h"] = meta.h;
  j["schedule"] = run.schedule;
  j["tol"] = meta.tol;
  j["seed"] = meta.seed;
  j["forced"] = run.forced;
  j["probe"] = json{{"center", json::array({meta.probe.center.x, meta.probe.center.y})},
                    {"radius", meta.probe.radius}};
  if (meta.analysis.axis) j["axis"] = json::parse(axis_to_json(*meta.analysis.axis));
  if (meta.analysis.seam_point)
    j["seam_point"] = json::array({meta.analysis.seam_point->base.x,
                                   meta.analysis.seam_point->base.y,
                                   meta.analysis.seam_point->t});
  j["scan_radius"] = meta.analysis.scan_radius;
  j["ball_radius"] = meta.analysis.ball_radius;
  std::ofstream out(dir / "run_meta.json");
  out << j.dump(1) << "\n";
}

}  // namespace

int run_check(const std::string& problem_path, std::ostream& out) {
  Problem problem;
  try {
    problem = load_problem(problem_path);
  } catch (const Error& e) {
    // Domains like the all-A square break the endpoint-label rule before the
    // criterion can run, yet their imbalance is already decisive: report the
    // balance verdict instead of a usage failure when it settles the case.
    if (e.code() == Errc::adjacent_same_label) {
      try {
        const json j = [&] {
          std::ifstream in(problem_path);
          return json::parse(in);
        }();
        double alpha = 0.0, beta = 0.0;
        std::vector<BasePoint> vertices;
        for (const auto& v : j.at("vertices"))
          vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        const ModelParams params{j.at("model").at("kappa").get<double>(),
                                 j.at("model").at("tau").get<double>()};
        for (const auto& a : j.at("arcs")) {
          const std::string kind = a.at("kind").get<std::string>();
          if (kind != "A" && kind != "B") continue;
          const double len = base_distance(params, vertices.at(a.at("from").get<int>()),
                                           vertices.at(a.at("to").get<int>()));
          (kind == "A" ? alpha : beta) += len;
        }
        if (std::abs(alpha - beta) > tol().balance_rel * std::max(1.0, alpha + beta)) {
          out << "problem violates the endpoint-label rule (" << e.what() << ")\n";
          out << "balance: alpha(Gamma) = " << alpha << ", beta(Gamma) = " << beta << "\n";
          out << "witness: alpha(Gamma) != beta(Gamma)\n";
          out << "verdict: not solvable\n";
          return exit_negative;
        }
      } catch (...) {
      }
    }
    out << "error: " << e.what() << "\n";
    return exit_usage;
  }
  const SolvabilityVerdict verdict = check_jenkins_serrin(problem.spec);
  out << "problem: " << problem.name << "\n";
  if (problem.spec.params.heisenberg())
    out << "note: kappa = 0, tau > 0 is experimental; the solvability criterion is "
           "applied as in the kappa < 0 family\n";
  out << "polygons checked: " << verdict.polygons_checked << "\n";
  if (!verdict.has_c_arcs)
    out << "balance: alpha(Gamma) = " << verdict.alpha_boundary
        << ", beta(Gamma) = " << verdict.beta_boundary << "\n";
  if (verdict.marginal) out << "note: some inequality within 1e-9 of equality (marginal)\n";
  if (verdict.extended_data) out << "note: data carries infinite one-sided limits (extended)\n";
  for (const ConditionViolation& w : verdict.witnesses) {
    out << "witness: " << w.inequality << " with alpha=" << w.measures.alpha
        << " beta=" << w.measures.beta << " gamma=" << w.measures.gamma << " on vertices [";
    for (std::size_t i = 0; i < w.polygon.junction_ids.size(); ++i)
      out << (i ? "," : "") << w.polygon.junction_ids[i];
    out << "]\n";
  }
  if (verdict.inconclusive) {
    out << "verdict: inconclusive (enumeration truncated)\n";
    return exit_inconclusive;
  }
  out << "verdict: " << (verdict.solvable ? "solvable" : "not solvable") << "\n";
  return verdict.solvable ? exit_ok : exit_negative;
}

int run_solve(const std::string& problem_path, const std::string& out_dir,
              const SolveOverrides& overrides, std::ostream& out) {
  Problem problem;
  try {
    problem = load_problem(problem_path);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return exit_usage;
  }
  if (problem.spec.params.heisenberg())
    out << "note: kappa = 0, tau > 0 is experimental\n";
  if (overrides.h) problem.solver.h = *overrides.h;
  if (overrides.schedule) problem.solver.schedule = *overrides.schedule;
  if (overrides.tolerance) problem.solver.tol = *overrides.tolerance;

  try {
    fs::create_directories(out_dir);
    GraphMesh mesh = build_mesh(problem.spec, problem.solver.h);
    out << "mesh: " << mesh.vertex_count() << " vertices, " << mesh.triangle_count()
        << " triangles, min angle " << mesh.min_angle_deg() << " deg\n";

    SolveOptions opts;
    opts.tol_residual = problem.solver.tol;
    const ProbeRegion probe =
        problem.solver.probe ? *problem.solver.probe : default_probe(problem.spec);
    const TruncationRun run = run_jenkins_serrin(problem.spec, mesh, problem.solver.schedule,
                                                 opts, {probe}, overrides.force);

    for (std::size_t k = 0; k < run.schedule.size(); ++k) {
      GraphMesh snapshot = mesh;
      snapshot.heights = run.level_heights[k];
      char name[64];
      std::snprintf(name, sizeof(name), "level_%03d.mesh.json", run.schedule[k]);
      write_mesh_json(snapshot, (fs::path(out_dir) / name).string(), run.schedule[k],
                      problem.name);
    }
    write_mesh_json(mesh, (fs::path(out_dir) / "final.mesh.json").string(),
                    run.schedule.back(), problem.name);

    json conv;
    conv["schema"] = "ektlab.convergence/1";
    conv["schedule"] = run.schedule;
    json levels = json::array();
    bool all_converged = true;
    for (std::size_t k = 0; k < run.level_stats.size(); ++k) {
      json entry = stats_to_json(run.level_stats[k]);
      entry["level"] = run.schedule[k];
      entry["area"] = run.level_area[k];
      GraphMesh snapshot = mesh;
      snapshot.heights = run.level_heights[k];
      entry["max_principle_violation"] = max_principle_violation(snapshot);
      levels.push_back(std::move(entry));
      all_converged = all_converged && run.level_stats[k].converged;
    }
    conv["levels"] = std::move(levels);
    conv["probe_sup_diffs"] = run.probe_sup_diffs.empty() ? std::vector<double>{}
                                                          : run.probe_sup_diffs[0];
    conv["anchored"] = run.anchored;
    conv["converged_on_probes"] = run.converged_on_probes;
    std::ofstream cf(fs::path(out_dir) / "convergence.json");
    cf << conv.dump(1) << "\n";

    RunMeta meta{problem.name, problem.spec.params, problem.solver.h,
                 run.schedule,  problem.solver.tol,  probe,
                 problem.analysis, overrides.seed};
    write_run_meta(meta, run, out_dir);

    for (std::size_t k = 0; k < run.probe_sup_diffs.size(); ++k) {
      out << "probe " << k << " sup-diffs:";
      for (double d : run.probe_sup_diffs[k]) out << " " << d;
      out << "\n";
    }
    if (!all_converged || (!run.converged_on_probes && run.schedule.size() > 1)) {
      out << "solve: no convergence (partial outputs written)\n";
      return exit_negative;
    }
    out << "solve: done, " << run.schedule.size() << " level(s) written to " << out_dir << "\n";
    return exit_ok;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return usage_errors_to_exit(e);
  }
}

int run_reflect(const std::string& mesh_path, const std::string& axis_text,
                const std::string& problem_path, const std::string& out_dir, std::ostream& out) {
  try {
    const GraphMesh mesh = read_mesh_json(mesh_path);
    ReflectionAxis axis;
    if (!axis_text.empty()) {
      axis = axis_from_json(axis_text);
    } else if (!problem_path.empty()) {
      const Problem problem = load_problem(problem_path);
      if (!problem.analysis.axis)
        fail(Errc::invalid_argument, problem_path + " carries no analysis axis");
      axis = *problem.analysis.axis;
    } else {
      fail(Errc::invalid_argument, "need --axis or --problem");
    }

    fs::create_directories(out_dir);
    const ExtendedSurface ext = extend_by_reflection(mesh.params, mesh, axis);
    const SeamReport report = seam_smoothness_report(mesh.params, ext);

    write_surface_json(ext.mesh, (fs::path(out_dir) / "extended.surface.json").string());
    const CurvatureField field = gaussian_curvature(ext.mesh);
    write_obj(ext.mesh, (fs::path(out_dir) / "extended.obj").string(), &field);

    json j;
    j["schema"] = "ektlab.seam/1";
    j["axis"] = json::parse(axis_to_json(axis));
    j["seam_vertices"] = report.seam_count;
    j["c0_gap"] = report.c0_gap;
    j["normal_kink_max"] = report.normal_kink_max;
    j["curvature_jump_max"] = report.curvature_jump_max;
    std::ofstream sf(fs::path(out_dir) / "seam_report.json");
    sf << j.dump(1) << "\n";

    out << "seam vertices: " << report.seam_count << "\n";
    out << "c0 gap: " << report.c0_gap << "\n";
    out << "normal kink max: " << report.normal_kink_max << " rad\n";
    out << "curvature jump max: " << report.curvature_jump_max << "\n";
    return exit_ok;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return usage_errors_to_exit(e);
  }
}

int run_analyze(const std::string& run_dir, const std::string& problem_path,
                const std::string& report_path, std::uint64_t seed, std::ostream& out) {
  const auto t_start = std::chrono::steady_clock::now();
  try {
    const fs::path dir(run_dir);
    const json meta = [&] {
      std::ifstream in(dir / "run_meta.json");
      if (!in) fail(Errc::io_error, "missing run_meta.json in " + run_dir);
      return json::parse(in);
    }();

    json report;
    report["schema"] = "ektlab.report/1";
    report["version"] = 1;
    report["problem"] = meta.value("problem", "");
    report["seed"] = seed;

    AnalysisConfig analysis;
    Problem problem;
    bool have_problem = false;
    if (!problem_path.empty()) {
      problem = load_problem(problem_path);
      analysis = problem.analysis;
      have_problem = true;
      report["verdict"] = verdict_to_json(check_jenkins_serrin(problem.spec));
    } else {
      if (meta.contains("axis")) analysis.axis = axis_from_json(meta["axis"].dump());
      if (meta.contains("seam_point"))
        analysis.seam_point =
            AmbientPoint{{meta["seam_point"][0].get<double>(), meta["seam_point"][1].get<double>()},
                         meta["seam_point"][2].get<double>()};
      analysis.scan_radius = meta.value("scan_radius", 0.2);
      analysis.ball_radius = meta.value("ball_radius", 0.3);
    }

    // convergence log and per-level solver stats pass through
    {
      std::ifstream in(dir / "convergence.json");
      if (!in) fail(Errc::io_error, "missing convergence.json in " + run_dir);
      report["solver"] = json::parse(in);
    }

    const std::vector<int> schedule = [&] {
      std::vector<int> s;
      for (const auto& n : meta["schedule"]) s.push_back(n.get<int>());
      return s;
    }();

    std::vector<GraphMesh> meshes;
    for (int n : schedule) {
      char name[64];
      std::snprintf(name, sizeof(name), "level_%03d.mesh.json", n);
      meshes.push_back(read_mesh_json((dir / name).string()));
    }

    const ModelParams params = meshes.empty() ? ModelParams{} : meshes.front().params;

    if (analysis.axis && !meshes.empty()) {
      std::vector<ExtendedSurface> exts;
      exts.reserve(meshes.size());
      for (const GraphMesh& mesh : meshes)
        exts.push_back(extend_by_reflection(params, mesh, *analysis.axis));

      const SeamReport seam = seam_smoothness_report(params, exts.back());
      report["seam"] = json{{"count", seam.seam_count},
                            {"c0_gap", seam.c0_gap},
                            {"normal_kink_max", seam.normal_kink_max},
                            {"curvature_jump_max", seam.curvature_jump_max}};
      report["isometry_distortion"] =
          isometry_check(params, *analysis.axis, 200, seed);

      if (analysis.seam_point) {
        std::vector<const ExtendedSurface*> ptrs;
        for (const ExtendedSurface& e : exts) ptrs.push_back(&e);
        const CurvatureScan scan =
            curvature_scan(schedule, ptrs, *analysis.seam_point, analysis.scan_radius);
        report["scan"] = json{{"levels", scan.levels},
                              {"radius", scan.radius},
                              {"sup_abs_k", scan.sup_abs_k},
                              {"clearances", scan.clearances},
                              {"passed", scan.passed},
                              {"insufficient_levels", scan.insufficient_levels}};

        // blow-up diagnostics: f at the argmax per level, rho~ = f/2
        json blowup;
        std::vector<double> fmax_per_level;
        for (const ExtendedSurface& e : exts) {
          const CurvatureField field = gaussian_curvature(e.mesh);
          int source = e.seam_vertices.front();
          double best = std::numeric_limits<double>::infinity();
          for (int v : e.seam_vertices) {
            const double d = (to_vec(e.mesh.vertices[v]) - to_vec(*analysis.seam_point)).norm();
            if (d < best) {
              best = d;
              source = v;
            }
          }
          const IntrinsicBall ball = intrinsic_ball(e.mesh, source, analysis.ball_radius);
          const FResult fr = f_function(field, e.mesh, ball);
          fmax_per_level.push_back(fr.fmax);
        }
        blowup["f_argmax"] = fmax_per_level;
        blowup["rho_tilde"] = grow_radius_check(fmax_per_level);
        if (params.kappa < 0.0 && !fmax_per_level.empty()) {
          // normalization lambda = sqrt(|K|) at the final-level argmax
          const ExtendedSurface& e = exts.back();
          const CurvatureField field = gaussian_curvature(e.mesh);
          const IntrinsicBall ball =
              intrinsic_ball(e.mesh, e.seam_vertices.front(), analysis.ball_radius);
          const FResult fr = f_function(field, e.mesh, ball);
          if (!fr.degenerate) {
            const double lambda = std::sqrt(std::abs(field.k[fr.argmax]));
            const BlowupFrame frame = blowup_rescale(e.mesh, field, lambda);
            blowup["lambda"] = lambda;
            blowup["normalized_k_at_argmax"] = frame.field.k[fr.argmax];
          }
        }
        report["blowup"] = std::move(blowup);
      }
    }

    // rescaled-family diagnostics are exact formulas, included for every run
    {
      json euclid;
      json lambdas = json::array();
      for (const double lambda : {10.0, 100.0, 1000.0}) {
        lambdas.push_back(json{
            {"lambda", lambda},
            {"deviation_tau0", euclidean_limit_deviation(lambda, 0.0, 1.0)},
            {"deviation_tau1", euclidean_limit_deviation(lambda, 1.0, 1.0)}});
      }
      euclid["radius"] = 1.0;
      euclid["sweep"] = std::move(lambdas);
      report["euclidean_limit"] = std::move(euclid);
    }

    std::ofstream rf(report_path);
    if (!rf) fail(Errc::io_error, "cannot write " + report_path);
    rf << report.dump(1) << "\n";

    const auto t_end = std::chrono::steady_clock::now();
    json timings;
    timings["schema"] = "ektlab.timings/1";
    timings["analyze_seconds"] =
        std::chrono::duration<double>(t_end - t_start).count();
    std::ofstream tf(fs::path(report_path).parent_path() / "timings.json");
    if (tf) tf << timings.dump(1) << "\n";

    out << "report written to " << report_path << "\n";
    if (report.contains("scan"))
      out << "scan: " << (report["scan"]["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
    return exit_ok;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return usage_errors_to_exit(e);
  }
}

int run_export(const std::string& mesh_path, const std::string& out_path, bool with_curvature,
               std::ostream& out) {
  try {
    SurfaceMesh surface;
    // accept either a graph snapshot or an extended surface
    try {
      surface = read_surface_json(mesh_path);
    } catch (const Error&) {
      const GraphMesh mesh = read_mesh_json(mesh_path);
      surface = lift_graph(mesh);
    }
    if (with_curvature) {
      const CurvatureField field = gaussian_curvature(surface);
      write_obj(surface, out_path, &field);
    } else {
      write_obj(surface, out_path, nullptr);
    }
    out << "wrote " << out_path << "\n";
    return exit_ok;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return usage_errors_to_exit(e);
  }
}

}  // namespace ekt
