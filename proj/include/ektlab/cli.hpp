#pragma once

#include <cstdint>
#include <iosfwd>

#include "ektlab/io.hpp"

namespace ekt {

// exit codes shared by every subcommand:
//   0  success / solvable
//   1  negative result (not solvable, no convergence, no seam)
//   2  inconclusive (polygon enumeration truncated)
//   64 unusable input (parse or validation failure)
inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_inconclusive = 2;
inline constexpr int exit_usage = 64;

struct SolveOverrides {
  std::optional<double> h;
  std::optional<std::vector<int>> schedule;
  std::optional<double> tolerance;
  bool force = false;
  std::uint64_t seed = 20240;
};

int run_check(const std::string& problem_path, std::ostream& out);

// writes level_<n>.mesh.json, final.mesh.json, convergence.json and
// run_meta.json into out_dir
int run_solve(const std::string& problem_path, const std::string& out_dir,
              const SolveOverrides& overrides, std::ostream& out);

// axis_text: inline axis JSON, or empty to take the axis from --problem
int run_reflect(const std::string& mesh_path, const std::string& axis_text,
                const std::string& problem_path, const std::string& out_dir, std::ostream& out);

// report.json (deterministic) + timings.json (wall clock) next to it
int run_analyze(const std::string& run_dir, const std::string& problem_path,
                const std::string& report_path, std::uint64_t seed, std::ostream& out);

int run_export(const std::string& mesh_path, const std::string& out_path, bool with_curvature,
               std::ostream& out);

}  // namespace ekt
