#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ektlab/cli.hpp"

namespace {

std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(std::stoi(token));
      token.clear();
    } else {
      token += c;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ektlab: minimal graphs over convex domains in the homogeneous spaces E(kappa, tau)\n"
      "exit codes: 0 ok/solvable, 1 negative result, 2 inconclusive, 64 bad input"};
  app.require_subcommand(1);
  // --h is a domain flag (target edge length); help stays on --help
  app.set_help_flag("--help", "print help");

  std::string problem_path, out_dir = "out", mesh_path, axis_text, run_dir;
  std::string report_path = "report.json", export_path = "mesh.obj";
  std::string schedule_text;
  double h_override = 0.0, tol_override = 0.0;
  bool force = false, with_curvature = false;
  std::uint64_t seed = 20240;

  CLI::App* check = app.add_subcommand("check", "evaluate the solvability criterion");
  check->add_option("problem", problem_path, "problem file")->required();

  CLI::App* solve = app.add_subcommand("solve", "run the truncation schedule");
  solve->set_help_flag("--help", "print help");
  solve->add_option("problem", problem_path, "problem file")->required();
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--h", h_override, "target edge length override");
  solve->add_option("--schedule", schedule_text, "comma-separated levels, e.g. 1,2,3");
  solve->add_option("--tol", tol_override, "first-variation tolerance override");
  solve->add_flag("--force", force, "run even when the criterion fails");
  solve->add_option("--seed", seed, "seed recorded with the run");

  CLI::App* reflect = app.add_subcommand("reflect", "extend a solution across an axis");
  reflect->add_option("mesh", mesh_path, "mesh snapshot (level_*.mesh.json)")->required();
  reflect->add_option("--axis", axis_text, "axis JSON, e.g. {\"kind\":\"vertical_fiber\",\"at\":[x,y]}");
  reflect->add_option("--problem", problem_path, "problem file carrying the analysis axis");
  reflect->add_option("--out", out_dir, "output directory");

  CLI::App* analyze = app.add_subcommand("analyze", "curvature scans and blow-up diagnostics");
  analyze->add_option("rundir", run_dir, "directory written by solve")->required();
  analyze->add_option("--problem", problem_path, "problem file (adds the verdict block)");
  analyze->add_option("--out", report_path, "report path");
  analyze->add_option("--seed", seed, "seed for sampled diagnostics");

  CLI::App* exporter = app.add_subcommand("export", "convert a snapshot to OBJ");
  exporter->add_option("mesh", mesh_path, "mesh or surface JSON")->required();
  exporter->add_option("--out", export_path, "OBJ path");
  exporter->add_flag("--curvature", with_curvature, "attach the curvature sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ekt::exit_usage;
  }

  if (check->parsed()) return ekt::run_check(problem_path, std::cout);
  if (solve->parsed()) {
    ekt::SolveOverrides overrides;
    if (h_override > 0.0) overrides.h = h_override;
    if (tol_override > 0.0) overrides.tolerance = tol_override;
    if (!schedule_text.empty()) overrides.schedule = parse_schedule(schedule_text);
    overrides.force = force;
    overrides.seed = seed;
    return ekt::run_solve(problem_path, out_dir, overrides, std::cout);
  }
  if (reflect->parsed())
    return ekt::run_reflect(mesh_path, axis_text, problem_path, out_dir, std::cout);
  if (analyze->parsed())
    return ekt::run_analyze(run_dir, problem_path, report_path, seed, std::cout);
  if (exporter->parsed())
    return ekt::run_export(mesh_path, export_path, with_curvature, std::cout);
  return ekt::exit_usage;
}
