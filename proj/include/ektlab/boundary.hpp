#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ektlab/geometry.hpp"

namespace ekt {

enum class ArcKind { A, B, C };

inline char arc_kind_name(ArcKind k) { return k == ArcKind::A ? 'A' : (k == ArcKind::B ? 'B' : 'C'); }

// One-sided limits at a data discontinuity; +-inf means the paper's tagged
// infinite limit and is truncated away by regularize_data.
struct ArcJump {
  double s = 0.0;
  double left = 0.0;
  double right = 0.0;
};

// Data on a C arc as a function of metric arc length s in [0, length].
struct ArcData {
  std::function<double(double)> value;
  std::vector<ArcJump> jumps;  // sorted by s, strictly interior
  // limits approached at s -> 0+ and s -> L-; unset means value() is fine there
  std::optional<double> start_limit;
  std::optional<double> end_limit;
};

struct BoundaryArc {
  ArcKind kind = ArcKind::C;
  std::vector<BasePoint> polyline;   // >= 2 samples; geodesic for A/B
  std::vector<double> cum_length;    // metric arc length at each sample
  ArcData data;                      // meaningful for kind C only

  double length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }
  const BasePoint& start() const { return polyline.front(); }
  const BasePoint& end() const { return polyline.back(); }
  BasePoint at_arclength(double s) const;
  double data_at(double s) const;
};

BoundaryArc make_geodesic_arc(const ModelParams& params, ArcKind kind, const BasePoint& a,
                              const BasePoint& b, int samples = 65);
BoundaryArc make_c_arc(const ModelParams& params, std::vector<BasePoint> polyline, ArcData data);

struct DomainSpec {
  ModelParams params;
  std::vector<BoundaryArc> arcs;  // cyclic, consecutive arcs share endpoints
  bool validated = false;

  // junction i = start of arc i = end of arc i-1 (cyclic)
  std::vector<BasePoint> junctions() const;
  bool has_c_arcs() const;
  double diameter() const;  // max pairwise Euclidean distance of boundary samples
};

// Checks the Jordan/convex/labeling invariants, normalizes the orientation
// to counterclockwise and returns the validated spec. Errors name the
// offending arc or vertex.
DomainSpec validate_domain(DomainSpec spec);

struct AdmissiblePolygon {
  std::vector<int> junction_ids;      // cyclic order along the boundary
  std::vector<BasePoint> vertices;
  // per side: A or B when the side coincides with that boundary arc
  std::vector<std::optional<ArcKind>> side_tags;
  std::vector<double> side_lengths;
  bool is_full_boundary = false;  // equals Gamma (possible only when no C arcs)
};

struct PolygonMeasures {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

PolygonMeasures polygon_measures(const DomainSpec& spec, const AdmissiblePolygon& poly);

// All simple geodesic polygons on >= 3 of the A/B arc endpoints in cyclic
// order. Convex position makes every cyclic subset simple. Deterministic
// order; sets *truncated when max_count was hit.
std::vector<AdmissiblePolygon> enumerate_admissible_polygons(const DomainSpec& spec,
                                                             std::size_t max_count,
                                                             bool* truncated = nullptr);

struct ConditionViolation {
  AdmissiblePolygon polygon;
  PolygonMeasures measures;
  std::string inequality;  // "2*alpha >= gamma" | "2*beta >= gamma" | "alpha(Gamma) != beta(Gamma)"
};

struct SolvabilityVerdict {
  bool solvable = false;
  bool inconclusive = false;  // enumeration truncated before a violation was found
  bool marginal = false;      // some inequality within 1e-9 of equality
  bool has_c_arcs = false;
  bool extended_data = false;  // some C data carries infinite one-sided limits
  double alpha_boundary = 0.0;
  double beta_boundary = 0.0;
  std::size_t polygons_checked = 0;
  std::vector<ConditionViolation> witnesses;
};

SolvabilityVerdict check_jenkins_serrin(const DomainSpec& spec, std::size_t max_polygons = 100000);

// Truncation at height n: clamp to [-n, n] and bridge listed discontinuities
// across a collar of width 1/n with the midpoint value at the jump.
BoundaryArc regularize_data(const BoundaryArc& arc, int n);

// The Jordan curve Gamma_n: A arcs at t = n, B arcs at t = -n, C arcs lifted
// by their regularized data, vertical segments at height mismatches.
struct BoundaryCurve {
  std::vector<AmbientPoint> points;  // closed: edge i joins points[i], points[(i+1) % size]
  std::vector<bool> vertical_edge;   // per edge
};

BoundaryCurve boundary_curve_at_level(const DomainSpec& spec, int n);

}  // namespace ekt
