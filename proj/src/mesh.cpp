#include "ektlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace ekt {

namespace {

struct DTri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // neighbor across edge (v[i], v[i+1]); -1 outside
  bool alive = true;
};

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
  const long double ax = a.x() - p.x(), ay = a.y() - p.y();
  const long double bx = b.x() - p.x(), by = b.y() - p.y();
  const long double cx = c.x() - p.x(), cy = c.y() - p.y();
  const long double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                          (bx * bx + by * by) * (ax * cy - cx * ay) +
                          (cx * cx + cy * cy) * (ax * by - bx * ay);
  return det > 0.0L;
}

// Incremental Bowyer-Watson with walking point location.
class Delaunay {
 public:
  explicit Delaunay(const std::vector<Vec2>& pts) : pts_(pts) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const Vec2& p : pts_) {
      lo_x = std::min(lo_x, p.x());
      lo_y = std::min(lo_y, p.y());
      hi_x = std::max(hi_x, p.x());
      hi_y = std::max(hi_y, p.y());
    }
    const double span = std::max(hi_x - lo_x, hi_y - lo_y) + 1.0;
    const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
    const int n = int(pts_.size());
    all_.push_back(Vec2(cx - 20.0 * span, cy - 10.0 * span));
    all_.push_back(Vec2(cx + 20.0 * span, cy - 10.0 * span));
    all_.push_back(Vec2(cx, cy + 20.0 * span));
    for (const Vec2& p : pts_) all_.push_back(p);
    tris_.push_back(DTri{{0, 1, 2}, {-1, -1, -1}, true});
    last_ = 0;
    for (int i = 0; i < n; ++i) insert(i + 3);
  }

  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const DTri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
      out.push_back({t.v[0] - 3, t.v[1] - 3, t.v[2] - 3});
    }
    return out;
  }

 private:
  const Vec2& at(int i) const { return all_[i]; }

  int locate(const Vec2& p) const {
    int cur = last_;
    if (cur < 0 || cur >= int(tris_.size()) || !tris_[cur].alive) {
      for (int i = int(tris_.size()) - 1; i >= 0; --i)
        if (tris_[i].alive) {
          cur = i;
          break;
        }
    }
    for (int step = 0; step < int(tris_.size()) + 8; ++step) {
      const DTri& t = tris_[cur];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        if (orient2d(at(t.v[e]), at(t.v[(e + 1) % 3]), p) < 0.0) {
          next = t.nbr[e];
          break;
        }
      }
      if (next < 0) return cur;
      cur = next;
    }
    return cur;  // fallback; degenerate walks are caught by the cavity test
  }

  void insert(int vid) {
    const Vec2& p = at(vid);
    const int seed = locate(p);

    // grow the cavity of circumcircle violations
    std::vector<int> cavity;
    std::vector<char> mark(tris_.size(), 0);
    std::vector<int> stack = {seed};
    mark[seed] = 1;
    while (!stack.empty()) {
      const int ti = stack.back();
      stack.pop_back();
      const DTri& t = tris_[ti];
      if (!t.alive) continue;
      if (!in_circumcircle(at(t.v[0]), at(t.v[1]), at(t.v[2]), p)) continue;
      cavity.push_back(ti);
      for (int e = 0; e < 3; ++e) {
        const int nb = t.nbr[e];
        if (nb >= 0 && !mark[nb]) {
          mark[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
    if (cavity.empty()) cavity.push_back(seed);  // exactly-on-circle fallback

    std::vector<char> in_cavity(tris_.size(), 0);
    for (int ti : cavity) in_cavity[ti] = 1;

    // boundary edges of the cavity, oriented with the cavity on the left
    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> hull;
    for (int ti : cavity) {
      const DTri& t = tris_[ti];
      for (int e = 0; e < 3; ++e) {
        const int nb = t.nbr[e];
        if (nb < 0 || !in_cavity[nb]) hull.push_back({t.v[e], t.v[(e + 1) % 3], nb});
      }
    }
    for (int ti : cavity) tris_[ti].alive = false;

    // fan from the new vertex
    std::vector<int> fresh;
    for (const Edge& e : hull) {
      DTri t;
      t.v = {e.a, e.b, vid};
      t.nbr = {e.outside, -1, -1};
      fresh.push_back(int(tris_.size()));
      tris_.push_back(t);
      if (e.outside >= 0) {
        DTri& o = tris_[e.outside];
        for (int k = 0; k < 3; ++k)
          if (o.v[k] == e.b && o.v[(k + 1) % 3] == e.a) o.nbr[k] = fresh.back();
      }
    }
    // stitch the fan: edge (b, vid) of one triangle meets (vid, a) of another
    std::unordered_map<long long, int> by_first;
    for (int ti : fresh) by_first[tris_[ti].v[0]] = ti;
    for (int ti : fresh) {
      DTri& t = tris_[ti];
      const auto it = by_first.find(t.v[1]);
      if (it != by_first.end()) {
        t.nbr[1] = it->second;          // edge (v1, vid)
        tris_[it->second].nbr[2] = ti;  // edge (vid, v0) of the other
      }
    }
    last_ = fresh.empty() ? last_ : fresh.back();
  }

  const std::vector<Vec2>& pts_;
  std::vector<Vec2> all_;
  std::vector<DTri> tris_;
  int last_ = 0;
};

struct BoundaryLoop {
  std::vector<BasePoint> points;
  std::vector<BoundaryVertexInfo> info;
};

// boundary vertices along the arcs at ~h spacing, junctions exact,
// C-arc data discontinuities included as vertices
BoundaryLoop sample_boundary(const DomainSpec& spec, double h) {
  BoundaryLoop loop;
  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    const BoundaryArc& arc = spec.arcs[i];
    double euclid_len = 0.0;
    for (std::size_t j = 0; j + 1 < arc.polyline.size(); ++j)
      euclid_len += std::hypot(arc.polyline[j + 1].x - arc.polyline[j].x,
                               arc.polyline[j + 1].y - arc.polyline[j].y);
    const int m = std::max(1, int(std::ceil(euclid_len / h)));
    std::vector<double> ss;
    for (int j = 0; j < m; ++j) ss.push_back(arc.length() * double(j) / double(m));
    if (arc.kind == ArcKind::C)
      for (const ArcJump& jump : arc.data.jumps) ss.push_back(jump.s);
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end(),
                         [&](double a, double b) { return std::abs(a - b) < 0.25 * h; }),
             ss.end());
    if (ss.empty() || ss.front() > 0.0) ss.insert(ss.begin(), 0.0);

    for (std::size_t j = 0; j < ss.size(); ++j) {
      BoundaryVertexInfo info;
      info.arc = int(i);
      info.s = ss[j];
      if (j == 0) {
        info.junction = true;
        info.prev_arc = int((i + spec.arcs.size() - 1) % spec.arcs.size());
        loop.points.push_back(arc.start());
      } else {
        loop.points.push_back(arc.at_arclength(ss[j]));
      }
      loop.info.push_back(info);
    }
  }
  return loop;
}

bool point_in_polygon(const std::vector<BasePoint>& poly, const Vec2& p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const bool above_i = poly[i].y > p.y();
    const bool above_j = poly[j].y > p.y();
    if (above_i != above_j) {
      const double x_cross =
          poly[j].x + (p.y() - poly[j].y) * (poly[i].x - poly[j].x) / (poly[i].y - poly[j].y);
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

double min_dist_to_loop(const std::vector<BasePoint>& poly, const Vec2& p) {
  double best = 1e300;
  for (const BasePoint& q : poly) best = std::min(best, std::hypot(q.x - p.x(), q.y - p.y()));
  return best;
}

std::vector<Vec2> hex_seeds(const std::vector<BasePoint>& loop, double h, double clearance) {
  double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
  for (const BasePoint& p : loop) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  }
  std::vector<Vec2> seeds;
  const double dy = h * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double y = lo_y + 0.6 * h; y < hi_y - 0.25 * h; y += dy, ++row) {
    const double off = (row % 2) ? 0.5 * h : 0.0;
    for (double x = lo_x + 0.6 * h + off; x < hi_x - 0.25 * h; x += h) {
      const Vec2 p(x, y);
      if (!point_in_polygon(loop, p)) continue;
      if (min_dist_to_loop(loop, p) < clearance * h) continue;
      seeds.push_back(p);
    }
  }
  return seeds;
}

std::vector<std::array<int, 3>> triangulate_and_cull(const std::vector<Vec2>& pts,
                                                     const std::vector<BasePoint>& loop,
                                                     std::size_t n_boundary) {
  Delaunay dt(pts);
  std::vector<std::array<int, 3>> tris = dt.triangles();
  std::vector<std::array<int, 3>> kept;
  for (auto& t : tris) {
    // only triangles whose vertices are all boundary samples can stick out
    const bool all_boundary = t[0] < int(n_boundary) && t[1] < int(n_boundary) &&
                              t[2] < int(n_boundary);
    if (all_boundary) {
      const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (!point_in_polygon(loop, c)) continue;
    }
    // counterclockwise
    if (orient2d(pts[t[0]], pts[t[1]], pts[t[2]]) < 0.0) std::swap(t[1], t[2]);
    kept.push_back(t);
  }
  return kept;
}

double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  const auto angle = [](double opp, double s1, double s2) {
    const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2), -1.0, 1.0);
    return std::acos(cosv);
  };
  return std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)}) * 180.0 / M_PI;
}

// Axis-aligned rectangles in the flat base get a symmetric criss-cross grid:
// the alternating diagonals keep the full dihedral symmetry of the domain,
// which the truncation sequence of symmetric problems inherits.
std::optional<GraphMesh> try_structured_rectangle(const DomainSpec& spec, double h) {
  if (spec.params.kappa != 0.0 || spec.arcs.size() != 4) return std::nullopt;
  const std::vector<BasePoint> junc = spec.junctions();
  // every arc must be the straight segment between its endpoints, axis-aligned
  for (const BoundaryArc& arc : spec.arcs) {
    if (arc.kind == ArcKind::C && !arc.data.jumps.empty()) return std::nullopt;
    const BasePoint a = arc.start();
    const BasePoint b = arc.end();
    const double dx = b.x - a.x, dy = b.y - a.y;
    if (std::min(std::abs(dx), std::abs(dy)) > 1e-12) return std::nullopt;
    for (const BasePoint& p : arc.polyline) {
      const double cross = (p.x - a.x) * dy - (p.y - a.y) * dx;
      if (std::abs(cross) > 1e-12) return std::nullopt;
    }
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const BasePoint& p : junc) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double lx = x1 - x0, ly = y1 - y0;
  if (lx <= 0.0 || ly <= 0.0) return std::nullopt;
  const int mx = 2 * std::max(1, int(std::ceil(lx / (2.0 * h))));
  const int my = 2 * std::max(1, int(std::ceil(ly / (2.0 * h))));

  GraphMesh mesh;
  mesh.params = spec.params;
  mesh.h = h;
  const auto vid = [&](int i, int j) { return j * (mx + 1) + i; };
  for (int j = 0; j <= my; ++j)
    for (int i = 0; i <= mx; ++i)
      mesh.vertices.push_back(BasePoint{x0 + lx * double(i) / mx, y0 + ly * double(j) / my});
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      } else {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      }
    }
  }
  mesh.boundary.assign(mesh.vertices.size(), false);
  mesh.binfo.assign(mesh.vertices.size(), BoundaryVertexInfo{});
  mesh.heights.assign(mesh.vertices.size(), 0.0);

  // attach (arc, s) provenance by walking each side from its start junction
  for (std::size_t k = 0; k < 4; ++k) {
    const BoundaryArc& arc = spec.arcs[k];
    const BasePoint a = arc.start();
    const BasePoint b = arc.end();
    const bool horizontal = std::abs(b.y - a.y) <= 1e-12;
    const int steps = horizontal ? mx : my;
    for (int s = 0; s < steps; ++s) {
      const double t = double(s) / steps;
      const double px = a.x + t * (b.x - a.x);
      const double py = a.y + t * (b.y - a.y);
      const int i = int(std::lround((px - x0) / lx * mx));
      const int j = int(std::lround((py - y0) / ly * my));
      const int v = vid(i, j);
      mesh.boundary[v] = true;
      mesh.binfo[v].arc = int(k);
      mesh.binfo[v].s = t * arc.length();
      if (s == 0) {
        mesh.binfo[v].junction = true;
        mesh.binfo[v].prev_arc = int((k + 3) % 4);
      }
    }
  }
  return mesh;
}

}  // namespace

double GraphMesh::min_angle_deg() const {
  double worst = 180.0;
  for (const auto& t : triangles)
    worst = std::min(worst, triangle_min_angle(to_vec(vertices[t[0]]), to_vec(vertices[t[1]]),
                                               to_vec(vertices[t[2]])));
  return worst;
}

bool GraphMesh::conforming() const {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_count[{a, b}]++;
    }
  }
  for (const auto& [edge, count] : edge_count) {
    if (count > 2) return false;
    if (count == 1 && (!boundary[edge.first] || !boundary[edge.second])) return false;
  }
  return true;
}

GraphMesh build_mesh(const DomainSpec& spec, double h) {
  if (!spec.validated) fail(Errc::invalid_argument, "spec must pass validate_domain first");
  const double diam = spec.diameter();
  if (!(h > 0.0) || h >= diam)
    fail(Errc::meshing_failure, "h must satisfy 0 < h < domain diameter " + std::to_string(diam));

  if (auto structured = try_structured_rectangle(spec, h)) return *std::move(structured);

  const BoundaryLoop loop = sample_boundary(spec, h);
  const std::size_t nb = loop.points.size();
  if (nb < 3) fail(Errc::meshing_failure, "boundary sampling produced fewer than 3 vertices");

  std::vector<Vec2> pts;
  pts.reserve(nb + 4 * nb);
  for (const BasePoint& p : loop.points) pts.push_back(to_vec(p));
  for (const Vec2& p : hex_seeds(loop.points, h, tol().interior_clearance)) pts.push_back(p);

  std::vector<std::array<int, 3>> tris;
  double min_angle = 0.0;
  const int max_rounds = 8;
  for (int round = 0; round < max_rounds; ++round) {
    tris = triangulate_and_cull(pts, loop.points, nb);
    if (tris.empty()) fail(Errc::meshing_failure, "no triangles survived the domain cull");

    min_angle = 180.0;
    for (const auto& t : tris)
      min_angle = std::min(min_angle, triangle_min_angle(pts[t[0]], pts[t[1]], pts[t[2]]));
    if (min_angle >= tol().min_angle_deg && round >= 2) break;

    // Laplacian smoothing of the interior seeds
    std::vector<Vec2> acc(pts.size(), Vec2::Zero());
    std::vector<int> deg(pts.size(), 0);
    for (const auto& t : tris) {
      for (int e = 0; e < 3; ++e) {
        acc[t[e]] += pts[t[(e + 1) % 3]] + pts[t[(e + 2) % 3]];
        deg[t[e]] += 2;
      }
    }
    for (std::size_t i = nb; i < pts.size(); ++i) {
      if (deg[i] == 0) continue;
      const Vec2 target = acc[i] / double(deg[i]);
      const Vec2 moved = 0.4 * pts[i] + 0.6 * target;
      if (point_in_polygon(loop.points, moved) &&
          min_dist_to_loop(loop.points, moved) >= 0.5 * tol().interior_clearance * h)
        pts[i] = moved;
    }
  }

  if (min_angle < tol().min_angle_deg) {
    // locate the offending region for the error message
    Vec2 where = Vec2::Zero();
    for (const auto& t : tris)
      if (triangle_min_angle(pts[t[0]], pts[t[1]], pts[t[2]]) <= min_angle + 1e-12)
        where = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
    fail(Errc::meshing_failure,
         "min angle " + std::to_string(min_angle) + " deg below " +
             std::to_string(tol().min_angle_deg) + " near (" + std::to_string(where.x()) + ", " +
             std::to_string(where.y()) + ")");
  }

  GraphMesh mesh;
  mesh.params = spec.params;
  mesh.h = h;
  mesh.vertices.reserve(pts.size());
  for (const Vec2& p : pts) mesh.vertices.push_back(BasePoint{p.x(), p.y()});
  mesh.triangles = std::move(tris);
  mesh.boundary.assign(pts.size(), false);
  mesh.binfo.assign(pts.size(), BoundaryVertexInfo{});
  for (std::size_t i = 0; i < nb; ++i) {
    mesh.boundary[i] = true;
    mesh.binfo[i] = loop.info[i];
  }
  mesh.heights.assign(pts.size(), 0.0);

  // drop isolated vertices (seeds that ended up outside every kept triangle)
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) used[t[k]] = 1;
  std::vector<int> remap(mesh.vertices.size(), -1);
  GraphMesh out;
  out.params = mesh.params;
  out.h = h;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = int(out.vertices.size());
    out.vertices.push_back(mesh.vertices[i]);
    out.boundary.push_back(mesh.boundary[i]);
    out.binfo.push_back(mesh.binfo[i]);
    out.heights.push_back(0.0);
  }
  for (const auto& t : mesh.triangles)
    out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});

  if (!out.conforming()) fail(Errc::meshing_failure, "triangulation is not conforming");
  return out;
}

double discrete_area(const ModelParams& params, const GraphMesh& mesh) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 p0 = to_vec(mesh.vertices[t[0]]);
    const Vec2 p1 = to_vec(mesh.vertices[t[1]]);
    const Vec2 p2 = to_vec(mesh.vertices[t[2]]);
    const double det = orient2d(p0, p1, p2);
    if (std::abs(det) < 1e-300)
      fail(Errc::degenerate_triangle, "zero-area triangle in discrete_area");
    const double area = 0.5 * std::abs(det);
    // affine gradient of the heights
    Eigen::Matrix2d d;
    d.col(0) = p1 - p0;
    d.col(1) = p2 - p0;
    const Eigen::Vector2d du(mesh.heights[t[1]] - mesh.heights[t[0]],
                             mesh.heights[t[2]] - mesh.heights[t[0]]);
    const Vec2 grad = d.transpose().inverse() * du;
    const BasePoint centroid{(p0.x() + p1.x() + p2.x()) / 3.0, (p0.y() + p1.y() + p2.y()) / 3.0};
    total += graph_area_element(params, centroid, grad) * area;
  }
  return total;
}

}  // namespace ekt
