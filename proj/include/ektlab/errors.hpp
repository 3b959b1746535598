#pragma once

#include <stdexcept>
#include <string>

namespace ekt {

enum class Errc {
  point_outside_disc,
  coincident_points,
  non_convex_domain,
  adjacent_same_label,
  non_jordan_boundary,
  polygon_not_admissible,
  meshing_failure,
  degenerate_triangle,
  unsupported_axis,
  no_seam_found,
  insufficient_stencil,
  ball_exceeds_mesh,
  seam_point_outside_gamma,
  compact_exceeds_disc,
  not_solvable_refused,
  parse_error,
  io_error,
  invalid_argument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace ekt
