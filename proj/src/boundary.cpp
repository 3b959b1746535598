#include "ektlab/boundary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace ekt {

namespace {

double clamp_limit(double v, double n) { return std::clamp(v, -n, n); }

bool same_point(const BasePoint& a, const BasePoint& b, double eps) {
  return std::hypot(a.x - b.x, a.y - b.y) <= eps;
}

}  // namespace

BasePoint BoundaryArc::at_arclength(double s) const {
  const double L = length();
  s = std::clamp(s, 0.0, L);
  const auto it = std::upper_bound(cum_length.begin(), cum_length.end(), s);
  std::size_t hi = std::min<std::size_t>(it - cum_length.begin(), cum_length.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double span = cum_length[hi] - cum_length[lo];
  const double w = span > 0.0 ? (s - cum_length[lo]) / span : 0.0;
  return BasePoint{polyline[lo].x + w * (polyline[hi].x - polyline[lo].x),
                   polyline[lo].y + w * (polyline[hi].y - polyline[lo].y)};
}

double BoundaryArc::data_at(double s) const {
  if (kind != ArcKind::C || !data.value) fail(Errc::invalid_argument, "arc carries no data");
  const double L = length();
  if (s <= 0.0 && data.start_limit) return *data.start_limit;
  if (s >= L && data.end_limit) return *data.end_limit;
  return data.value(std::clamp(s, 0.0, L));
}

BoundaryArc make_geodesic_arc(const ModelParams& params, ArcKind kind, const BasePoint& a,
                              const BasePoint& b, int samples) {
  const GeodesicSegment seg = geodesic_between(params, a, b, samples);
  BoundaryArc arc;
  arc.kind = kind;
  arc.polyline = seg.polyline;
  // geodesic samples are uniform in arc length by construction
  arc.cum_length.resize(arc.polyline.size(), 0.0);
  for (std::size_t i = 0; i < arc.cum_length.size(); ++i)
    arc.cum_length[i] = seg.length * double(i) / double(arc.cum_length.size() - 1);
  return arc;
}

BoundaryArc make_c_arc(const ModelParams& params, std::vector<BasePoint> polyline, ArcData data) {
  if (polyline.size() < 2) fail(Errc::invalid_argument, "C arc needs >= 2 polyline points");
  BoundaryArc arc;
  arc.kind = ArcKind::C;
  arc.polyline = std::move(polyline);
  arc.cum_length.resize(arc.polyline.size(), 0.0);
  for (std::size_t i = 1; i < arc.polyline.size(); ++i)
    arc.cum_length[i] =
        arc.cum_length[i - 1] + base_distance(params, arc.polyline[i - 1], arc.polyline[i]);
  arc.data = std::move(data);
  std::sort(arc.data.jumps.begin(), arc.data.jumps.end(),
            [](const ArcJump& a, const ArcJump& b) { return a.s < b.s; });
  return arc;
}

std::vector<BasePoint> DomainSpec::junctions() const {
  std::vector<BasePoint> out;
  out.reserve(arcs.size());
  for (const BoundaryArc& arc : arcs) out.push_back(arc.start());
  return out;
}

bool DomainSpec::has_c_arcs() const {
  return std::any_of(arcs.begin(), arcs.end(),
                     [](const BoundaryArc& a) { return a.kind == ArcKind::C; });
}

double DomainSpec::diameter() const {
  std::vector<BasePoint> pts;
  for (const BoundaryArc& arc : arcs)
    for (const BasePoint& p : arc.polyline) pts.push_back(p);
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
  return best;
}

DomainSpec validate_domain(DomainSpec spec) {
  spec.params.validate();
  if (spec.arcs.size() < 2) fail(Errc::non_jordan_boundary, "need at least 2 arcs");

  const double scale = std::max(1.0, spec.diameter());
  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const BoundaryArc& arc = spec.arcs[i];
    if (arc.polyline.size() < 2)
      fail(Errc::non_jordan_boundary, "arc " + std::to_string(i) + " has < 2 samples");
    for (const BasePoint& p : arc.polyline) require_inside_disc(spec.params, p);
    const BoundaryArc& next = spec.arcs[(i + 1) % spec.arcs.size()];
    if (!same_point(arc.end(), next.start(), tol().junction_match * scale))
      fail(Errc::non_jordan_boundary, "arc " + std::to_string(i) + " does not meet arc " +
                                          std::to_string((i + 1) % spec.arcs.size()));
  }

  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const ArcKind a = spec.arcs[i].kind;
    const ArcKind b = spec.arcs[(i + 1) % spec.arcs.size()].kind;
    if ((a == ArcKind::A && b == ArcKind::A) || (a == ArcKind::B && b == ArcKind::B))
      fail(Errc::adjacent_same_label,
           "arcs " + std::to_string(i) + " and " + std::to_string((i + 1) % spec.arcs.size()) +
               " share a vertex and the label " + std::string(1, arc_kind_name(a)));
  }

  // boundary samples without the repeated junction points
  std::vector<Vec2> klein;
  std::vector<std::size_t> arc_of_sample;
  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const auto& pl = spec.arcs[i].polyline;
    for (std::size_t j = 0; j + 1 < pl.size(); ++j) {
      klein.push_back(klein_coords(spec.params, pl[j]));
      arc_of_sample.push_back(i);
    }
  }
  if (klein.size() < 3) fail(Errc::non_jordan_boundary, "boundary has fewer than 3 samples");

  double area2 = 0.0;
  for (std::size_t i = 0; i < klein.size(); ++i) {
    const Vec2& p = klein[i];
    const Vec2& q = klein[(i + 1) % klein.size()];
    area2 += p.x() * q.y() - q.x() * p.y();
  }
  if (area2 == 0.0) fail(Errc::non_jordan_boundary, "degenerate boundary");
  if (area2 < 0.0) {
    // normalize to counterclockwise: reverse the cycle and each arc
    std::reverse(spec.arcs.begin(), spec.arcs.end());
    for (BoundaryArc& arc : spec.arcs) {
      std::reverse(arc.polyline.begin(), arc.polyline.end());
      const double L = arc.length();
      std::vector<double> cum(arc.polyline.size(), 0.0);
      for (std::size_t i = 0; i < cum.size(); ++i)
        cum[i] = L - arc.cum_length[arc.cum_length.size() - 1 - i];
      arc.cum_length = std::move(cum);
      if (arc.kind == ArcKind::C && arc.data.value) {
        ArcData flipped;
        auto f = arc.data.value;
        flipped.value = [f, L](double s) { return f(L - s); };
        for (const ArcJump& j : arc.data.jumps)
          flipped.jumps.push_back(ArcJump{L - j.s, j.right, j.left});
        std::sort(flipped.jumps.begin(), flipped.jumps.end(),
                  [](const ArcJump& a, const ArcJump& b) { return a.s < b.s; });
        flipped.start_limit = arc.data.end_limit;
        flipped.end_limit = arc.data.start_limit;
        arc.data = std::move(flipped);
      }
    }
    return validate_domain(std::move(spec));
  }

  // supporting-geodesic test: in the Klein chart geodesics are chords, so
  // convexity is the turning test on the sampled boundary
  for (std::size_t i = 0; i < klein.size(); ++i) {
    const Vec2& a = klein[i];
    const Vec2& b = klein[(i + 1) % klein.size()];
    const Vec2& c = klein[(i + 2) % klein.size()];
    const Vec2 e1 = b - a;
    const Vec2 e2 = c - b;
    const double cross = e1.x() * e2.y() - e1.y() * e2.x();
    if (cross < -tol().convexity_slack * std::max(1.0, scale * scale)) {
      const std::size_t arc_id = arc_of_sample[(i + 1) % klein.size()];
      fail(Errc::non_convex_domain, "reflex turn on or after arc " + std::to_string(arc_id));
    }
  }

  // a convex closed curve is simple iff it turns by exactly one revolution
  double turning = 0.0;
  for (std::size_t i = 0; i < klein.size(); ++i) {
    const Vec2 e1 = klein[(i + 1) % klein.size()] - klein[i];
    const Vec2 e2 = klein[(i + 2) % klein.size()] - klein[(i + 1) % klein.size()];
    turning += std::atan2(e1.x() * e2.y() - e1.y() * e2.x(), e1.dot(e2));
  }
  if (std::abs(turning - 2.0 * M_PI) > 1e-6)
    fail(Errc::non_jordan_boundary, "boundary winds more than once");

  spec.validated = true;
  return spec;
}

namespace {

// junction ids incident to at least one A or B arc, in boundary order
std::vector<int> ab_endpoints(const DomainSpec& spec) {
  const std::size_t m = spec.arcs.size();
  std::vector<int> ids;
  for (std::size_t j = 0; j < m; ++j) {
    const ArcKind prev = spec.arcs[(j + m - 1) % m].kind;
    const ArcKind cur = spec.arcs[j].kind;
    if (prev != ArcKind::C || cur != ArcKind::C) ids.push_back(int(j));
  }
  return ids;
}

std::optional<ArcKind> side_tag(const DomainSpec& spec, int j1, int j2) {
  const int m = int(spec.arcs.size());
  if ((j1 + 1) % m == j2) {
    const ArcKind k = spec.arcs[j1].kind;
    if (k != ArcKind::C) return k;
  }
  return std::nullopt;
}

AdmissiblePolygon build_polygon(const DomainSpec& spec, const std::vector<int>& ids) {
  AdmissiblePolygon poly;
  poly.junction_ids = ids;
  const std::vector<BasePoint> junc = spec.junctions();
  for (int id : ids) poly.vertices.push_back(junc[id]);
  const std::size_t k = ids.size();
  for (std::size_t i = 0; i < k; ++i) {
    const int j1 = ids[i];
    const int j2 = ids[(i + 1) % k];
    poly.side_tags.push_back(side_tag(spec, j1, j2));
    poly.side_lengths.push_back(base_distance(spec.params, junc[j1], junc[j2]));
  }
  poly.is_full_boundary = !spec.has_c_arcs() && k == spec.arcs.size();
  return poly;
}

}  // namespace

PolygonMeasures polygon_measures(const DomainSpec& spec, const AdmissiblePolygon& poly) {
  const int m = int(spec.arcs.size());
  if (poly.junction_ids.size() < 3 || poly.junction_ids.size() != poly.side_lengths.size())
    fail(Errc::polygon_not_admissible, "polygon needs >= 3 tagged sides");
  for (std::size_t i = 0; i + 1 < poly.junction_ids.size(); ++i)
    if (poly.junction_ids[i] >= poly.junction_ids[i + 1])
      fail(Errc::polygon_not_admissible, "vertices not in cyclic order");
  for (int id : poly.junction_ids)
    if (id < 0 || id >= m) fail(Errc::polygon_not_admissible, "vertex id out of range");
  PolygonMeasures out;
  for (std::size_t i = 0; i < poly.side_lengths.size(); ++i) {
    out.gamma += poly.side_lengths[i];
    if (poly.side_tags[i] == ArcKind::A) out.alpha += poly.side_lengths[i];
    if (poly.side_tags[i] == ArcKind::B) out.beta += poly.side_lengths[i];
  }
  return out;
}

std::vector<AdmissiblePolygon> enumerate_admissible_polygons(const DomainSpec& spec,
                                                             std::size_t max_count,
                                                             bool* truncated) {
  if (truncated) *truncated = false;
  const std::vector<int> ids = ab_endpoints(spec);
  const std::size_t k = ids.size();
  std::vector<AdmissiblePolygon> out;
  if (k < 3) return out;
  if (k >= 63) {
    if (truncated) *truncated = true;
    return out;
  }
  std::vector<int> chosen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    if (std::popcount(mask) < 3) continue;
    chosen.clear();
    for (std::size_t b = 0; b < k; ++b)
      if (mask & (std::uint64_t(1) << b)) chosen.push_back(ids[b]);
    out.push_back(build_polygon(spec, chosen));
    if (out.size() >= max_count) {
      if (truncated) *truncated = (mask + 1 < (std::uint64_t(1) << k));
      break;
    }
  }
  return out;
}

SolvabilityVerdict check_jenkins_serrin(const DomainSpec& spec, std::size_t max_polygons) {
  if (!spec.validated) fail(Errc::invalid_argument, "spec must pass validate_domain first");
  SolvabilityVerdict verdict;
  verdict.has_c_arcs = spec.has_c_arcs();
  for (const BoundaryArc& arc : spec.arcs) {
    if (arc.kind != ArcKind::C) continue;
    const auto inf = [](const std::optional<double>& v) { return v && std::isinf(*v); };
    if (inf(arc.data.start_limit) || inf(arc.data.end_limit)) verdict.extended_data = true;
    for (const ArcJump& j : arc.data.jumps)
      if (std::isinf(j.left) || std::isinf(j.right)) verdict.extended_data = true;
  }

  bool truncated = false;
  const std::vector<AdmissiblePolygon> polys =
      enumerate_admissible_polygons(spec, max_polygons, &truncated);
  verdict.polygons_checked = polys.size();

  bool all_strict = true;
  for (const AdmissiblePolygon& poly : polys) {
    const PolygonMeasures m = polygon_measures(spec, poly);
    const double band = tol().inequality_marginal * std::max(1.0, m.gamma);
    if (!verdict.has_c_arcs && poly.is_full_boundary) continue;  // Gamma is exempt
    if (std::abs(2.0 * m.alpha - m.gamma) <= band || std::abs(2.0 * m.beta - m.gamma) <= band)
      verdict.marginal = true;
    if (2.0 * m.alpha >= m.gamma) {
      all_strict = false;
      verdict.witnesses.push_back({poly, m, "2*alpha >= gamma"});
    }
    if (2.0 * m.beta >= m.gamma) {
      all_strict = false;
      verdict.witnesses.push_back({poly, m, "2*beta >= gamma"});
    }
  }

  if (!verdict.has_c_arcs) {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    for (const BoundaryArc& arc : spec.arcs) {
      gamma += arc.length();
      if (arc.kind == ArcKind::A) alpha += arc.length();
      if (arc.kind == ArcKind::B) beta += arc.length();
    }
    verdict.alpha_boundary = alpha;
    verdict.beta_boundary = beta;
    if (std::abs(alpha - beta) > tol().balance_rel * std::max(1.0, gamma)) {
      all_strict = false;
      AdmissiblePolygon gamma_poly;
      const std::vector<int> ids = ab_endpoints(spec);
      if (ids.size() == spec.arcs.size() && ids.size() >= 3)
        gamma_poly = build_polygon(spec, ids);
      verdict.witnesses.push_back(
          {gamma_poly, PolygonMeasures{alpha, beta, gamma}, "alpha(Gamma) != beta(Gamma)"});
    }
  }

  verdict.solvable = all_strict && !truncated;
  verdict.inconclusive = truncated && all_strict;
  return verdict;
}

BoundaryArc regularize_data(const BoundaryArc& arc, int n) {
  if (arc.kind != ArcKind::C) fail(Errc::invalid_argument, "regularize_data needs a C arc");
  if (n < 1) fail(Errc::invalid_argument, "n >= 1");
  const double nn = double(n);
  const double L = arc.length();

  struct Collar {
    double lo, mid, hi;
    double v_lo, v_mid, v_hi;
  };
  std::vector<Collar> collars;
  const ArcData& d = arc.data;
  for (std::size_t i = 0; i < d.jumps.size(); ++i) {
    const ArcJump& j = d.jumps[i];
    double w = std::min(1.0 / nn, 0.25 * L);
    if (i > 0) w = std::min(w, 0.5 * (j.s - d.jumps[i - 1].s));
    if (i + 1 < d.jumps.size()) w = std::min(w, 0.5 * (d.jumps[i + 1].s - j.s));
    w = std::min({w, 0.5 * j.s, 0.5 * (L - j.s)});
    Collar c;
    c.lo = j.s - w;
    c.mid = j.s;
    c.hi = j.s + w;
    c.v_lo = clamp_limit(d.value(c.lo), nn);
    c.v_hi = clamp_limit(d.value(c.hi), nn);
    c.v_mid = 0.5 * (clamp_limit(j.left, nn) + clamp_limit(j.right, nn));
    collars.push_back(c);
  }

  BoundaryArc out = arc;
  ArcData nd;
  const auto raw = d.value;
  nd.value = [raw, collars, nn](double s) {
    for (const Collar& c : collars) {
      if (s >= c.lo && s <= c.hi) {
        if (s <= c.mid) {
          const double w = c.mid - c.lo;
          const double t = w > 0.0 ? (s - c.lo) / w : 1.0;
          return c.v_lo + t * (c.v_mid - c.v_lo);
        }
        const double w = c.hi - c.mid;
        const double t = w > 0.0 ? (s - c.mid) / w : 1.0;
        return c.v_mid + t * (c.v_hi - c.v_mid);
      }
    }
    return clamp_limit(raw(s), nn);
  };
  if (d.start_limit) nd.start_limit = clamp_limit(*d.start_limit, nn);
  if (d.end_limit) nd.end_limit = clamp_limit(*d.end_limit, nn);
  out.data = std::move(nd);
  return out;
}

BoundaryCurve boundary_curve_at_level(const DomainSpec& spec, int n) {
  if (!spec.validated) fail(Errc::invalid_argument, "spec must pass validate_domain first");
  if (n < 1) fail(Errc::invalid_argument, "n >= 1");
  BoundaryCurve curve;

  std::vector<std::vector<AmbientPoint>> lifted(spec.arcs.size());
  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const BoundaryArc& arc = spec.arcs[i];
    std::vector<AmbientPoint>& pts = lifted[i];
    if (arc.kind == ArcKind::A || arc.kind == ArcKind::B) {
      const double h = arc.kind == ArcKind::A ? double(n) : -double(n);
      for (const BasePoint& p : arc.polyline) pts.push_back({p, h});
    } else {
      const BoundaryArc reg = regularize_data(arc, n);
      for (std::size_t j = 0; j < arc.polyline.size(); ++j)
        pts.push_back({arc.polyline[j], reg.data_at(arc.cum_length[j])});
    }
  }

  // edge i joins points[i] and points[i+1 mod size]; a vertical edge keeps
  // both junction copies (same base, different heights)
  const double height_eps = 1e-12 * std::max(1.0, double(n));
  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const std::vector<AmbientPoint>& pts = lifted[i];
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      curve.points.push_back(pts[j]);
      curve.vertical_edge.push_back(false);
    }
    const AmbientPoint& end = pts.back();
    const AmbientPoint& next_start = lifted[(i + 1) % spec.arcs.size()].front();
    if (std::abs(end.t - next_start.t) > height_eps) {
      curve.points.push_back(end);
      curve.vertical_edge.push_back(true);
    }
  }
  return curve;
}

}  // namespace ekt
