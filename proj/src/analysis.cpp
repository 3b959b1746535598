#include "ektlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ekt {

CurvatureField gaussian_curvature(const SurfaceMesh& mesh) {
  CurvatureField field;
  field.k.assign(mesh.vertex_count(), 0.0);
  field.reliable.assign(mesh.vertex_count(), false);
  const auto incidence = vertex_triangle_incidence(mesh);

  std::vector<char> on_seam(mesh.vertex_count(), 0);
  for (int s : mesh.seam) on_seam[s] = 1;

  int usable = 0;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto k = quadric_curvature(mesh, int(v), incidence, nullptr);
    if (!k) continue;
    field.k[v] = *k;
    // boundary estimates are kept but flagged; welded seam vertices have
    // full stencils on the doubled surface and count as reliable
    field.reliable[v] = !mesh.boundary[v] || on_seam[v];
    if (field.reliable[v]) ++usable;
  }
  if (usable == 0)
    fail(Errc::insufficient_stencil, "no interior vertex carries a 2-ring stencil");
  return field;
}

IntrinsicBall intrinsic_ball(const SurfaceMesh& mesh, int source, double radius) {
  if (source < 0 || source >= int(mesh.vertex_count()))
    fail(Errc::invalid_argument, "ball source out of range");
  if (!(radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");

  std::vector<std::vector<std::pair<int, double>>> adj(mesh.vertex_count());
  {
    std::vector<std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles)
      for (int e = 0; e < 3; ++e) {
        int a = t[e], b = t[(e + 1) % 3];
        if (a < b) edges.push_back({a, b});
      }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [a, b] : edges) {
      const double len = edge_length(mesh, a, b);
      adj[a].push_back({b, len});
      adj[b].push_back({a, len});
    }
  }

  IntrinsicBall ball;
  ball.source = source;
  ball.radius = radius;
  std::vector<double>& dist = ball.dist;
  dist.assign(mesh.vertex_count(), std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, source});
  const double horizon = 3.0 * radius;  // enough margin for the smoothing pass
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (d > horizon) continue;
    for (const auto& [w, len] : adj[v]) {
      if (dist[v] + len < dist[w]) {
        dist[w] = dist[v] + len;
        heap.push({dist[w], w});
      }
    }
  }

  // one one-ring smoothing pass (source kept exact)
  std::vector<double> smoothed = dist;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (int(v) == source || adj[v].empty() || !std::isfinite(dist[v])) continue;
    double acc = 0.0;
    int cnt = 0;
    for (const auto& [w, len] : adj[v]) {
      if (!std::isfinite(dist[w])) continue;
      acc += dist[w];
      ++cnt;
    }
    if (cnt > 0) smoothed[v] = 0.5 * dist[v] + 0.5 * acc / cnt;
  }
  ball.dist = std::move(smoothed);

  ball.inside.assign(mesh.vertex_count(), false);
  std::vector<char> on_seam(mesh.vertex_count(), 0);
  for (int s : mesh.seam) on_seam[s] = 1;
  ball.boundary_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (ball.dist[v] < radius) ball.inside[v] = true;
    if (mesh.boundary[v] && !on_seam[v])
      ball.boundary_clearance = std::min(ball.boundary_clearance, ball.dist[v]);
  }
  return ball;
}

FResult f_function(const CurvatureField& field, const SurfaceMesh& mesh,
                   const IntrinsicBall& ball) {
  if (ball.boundary_clearance <= ball.radius)
    fail(Errc::ball_exceeds_mesh,
         "intrinsic ball of radius " + std::to_string(ball.radius) +
             " reaches the outer mesh boundary at distance " +
             std::to_string(ball.boundary_clearance));
  FResult out;
  out.f.assign(mesh.vertex_count(), 0.0);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (!ball.inside[v] || !field.reliable[v]) continue;
    const double margin = std::max(0.0, ball.radius - ball.dist[v]);
    out.f[v] = std::sqrt(std::abs(field.k[v])) * margin;
    if (out.f[v] > out.fmax) {
      out.fmax = out.f[v];
      out.argmax = int(v);
    }
  }
  if (out.fmax <= 1e-14) {
    out.degenerate = true;
    if (out.argmax < 0) out.argmax = ball.source;
  }
  return out;
}

namespace {

int nearest_seam_vertex(const ExtendedSurface& ext, const AmbientPoint& p) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v : ext.seam_vertices) {
    const double d = (to_vec(ext.mesh.vertices[v]) - to_vec(p)).norm();
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

}  // namespace

CurvatureScan curvature_scan(const std::vector<int>& levels,
                             const std::vector<const ExtendedSurface*>& surfaces,
                             const AmbientPoint& seam_point, double radius) {
  if (levels.size() != surfaces.size() || surfaces.empty())
    fail(Errc::invalid_argument, "levels and surfaces must align");
  CurvatureScan scan;
  scan.seam_point = seam_point;
  scan.radius = radius;
  scan.levels = levels;

  for (std::size_t k = 0; k < surfaces.size(); ++k) {
    const ExtendedSurface& ext = *surfaces[k];
    // the seam point must be interior to the seam arc at this level: for a
    // vertical axis this is |t| < n
    if (ext.axis.kind == ReflectionAxis::Kind::vertical_fiber) {
      if (std::abs(seam_point.t) >= double(levels[k]))
        fail(Errc::seam_point_outside_gamma,
             "seam point height " + std::to_string(seam_point.t) +
                 " is not interior to the level-" + std::to_string(levels[k]) + " seam");
      const double off = std::hypot(seam_point.base.x - ext.axis.fiber_point.x,
                                    seam_point.base.y - ext.axis.fiber_point.y);
      if (off > std::max(ext.mesh.h, 1e-9))
        fail(Errc::seam_point_outside_gamma, "seam point is off the reflection fiber");
    }
    const int source = nearest_seam_vertex(ext, seam_point);
    if (source < 0) fail(Errc::seam_point_outside_gamma, "extended surface carries no seam");

    const CurvatureField field = gaussian_curvature(ext.mesh);
    const IntrinsicBall ball = intrinsic_ball(ext.mesh, source, radius);
    if (ball.boundary_clearance <= radius)
      fail(Errc::ball_exceeds_mesh,
           "scan radius " + std::to_string(radius) + " reaches the outer boundary (clearance " +
               std::to_string(ball.boundary_clearance) + ") at level " +
               std::to_string(levels[k]));
    scan.clearances.push_back(ball.boundary_clearance);
    double sup = 0.0;
    for (std::size_t v = 0; v < ext.mesh.vertex_count(); ++v)
      if (ball.inside[v] && field.reliable[v]) sup = std::max(sup, std::abs(field.k[v]));
    scan.sup_abs_k.push_back(sup);
  }

  if (scan.sup_abs_k.size() < 4) {
    scan.insufficient_levels = true;
    scan.passed = true;  // trivially bounded
    return scan;
  }
  double running_max = 0.0;
  for (std::size_t k = 0; k + 1 < scan.sup_abs_k.size(); ++k)
    running_max = std::max(running_max, scan.sup_abs_k[k]);
  scan.passed = scan.sup_abs_k.back() <= tol().scan_growth * std::max(running_max, 1e-300);
  return scan;
}

BlowupFrame blowup_rescale(const SurfaceMesh& mesh, const CurvatureField& field, double lambda,
                           double rho) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  if (std::abs(mesh.params.kappa + 1.0) > 1e-12)
    fail(Errc::invalid_argument, "blow-up rescaling is set up for the kappa = -1 model");
  BlowupFrame frame;
  frame.lambda = lambda;
  frame.rho_tilde = lambda * rho / 2.0;
  frame.mesh = mesh;
  frame.mesh.params = ModelParams{-1.0 / (lambda * lambda), mesh.params.tau / lambda};
  frame.mesh.h = mesh.h * lambda;
  for (AmbientPoint& p : frame.mesh.vertices) p = homothety(lambda, p);
  frame.field = field;
  for (double& k : frame.field.k) k /= lambda * lambda;
  return frame;
}

double euclidean_limit_deviation(double lambda, double tau, double radius, int radial_samples,
                                 int angular_samples) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  if (!(radius < 2.0 * lambda))
    fail(Errc::compact_exceeds_disc, "compact radius must stay inside D(2 lambda)");
  double dev = 0.0;
  for (int r = 0; r <= radial_samples; ++r) {
    const double rr = radius * double(r) / radial_samples;
    for (int a = 0; a < angular_samples; ++a) {
      const double ang = 2.0 * M_PI * double(a) / angular_samples;
      const BasePoint p{rr * std::cos(ang), rr * std::sin(ang)};
      const Mat3 e = rescaled_coframe_at(lambda, tau, p);
      dev = std::max(dev, (e - Mat3::Identity()).cwiseAbs().maxCoeff());
    }
  }
  return dev;
}

std::vector<double> grow_radius_check(const std::vector<double>& f_argmax_values) {
  std::vector<double> out;
  out.reserve(f_argmax_values.size());
  for (double f : f_argmax_values) out.push_back(0.5 * f);
  return out;
}

}  // namespace ekt
