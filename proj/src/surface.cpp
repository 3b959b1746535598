#include "ektlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ekt {

SurfaceMesh lift_graph(const GraphMesh& mesh) {
  SurfaceMesh out;
  out.params = mesh.params;
  out.h = mesh.h;
  out.vertices.reserve(mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
    out.vertices.push_back(AmbientPoint{mesh.vertices[i], mesh.heights[i]});
  out.triangles = mesh.triangles;
  out.boundary = mesh.boundary;
  return out;
}

bool recompute_boundary_flags(SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> degree;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      degree[{a, b}]++;
    }
  }
  mesh.boundary.assign(mesh.vertex_count(), false);
  bool manifold = true;
  for (const auto& [edge, count] : degree) {
    if (count > 2) manifold = false;
    if (count == 1) {
      mesh.boundary[edge.first] = true;
      mesh.boundary[edge.second] = true;
    }
  }
  return manifold;
}

bool orientation_consistent(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) directed[{t[e], t[(e + 1) % 3]}]++;
  for (const auto& [edge, count] : directed) {
    if (count > 1) return false;  // same direction twice
  }
  return true;
}

std::vector<std::vector<int>> vertex_triangle_incidence(const SurfaceMesh& mesh) {
  std::vector<std::vector<int>> inc(mesh.vertex_count());
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti)
    for (int k = 0; k < 3; ++k) inc[mesh.triangles[ti][k]].push_back(int(ti));
  return inc;
}

Vec3 chart_coords(const SurfaceMesh& mesh, int v, const AmbientPoint& p) {
  const Mat3 frame = metric_coframe(mesh.params, mesh.vertices[v].base);
  return frame * (to_vec(p) - to_vec(mesh.vertices[v]));
}

std::optional<Vec3> ring_normal(const SurfaceMesh& mesh, int v, const std::vector<int>& incident,
                                const std::function<bool(int)>& tri_filter) {
  const Mat3 frame = metric_coframe(mesh.params, mesh.vertices[v].base);
  const Vec3 origin = to_vec(mesh.vertices[v]);
  Vec3 acc = Vec3::Zero();
  for (int ti : incident) {
    if (tri_filter && !tri_filter(ti)) continue;
    const auto& t = mesh.triangles[ti];
    const Vec3 a = frame * (to_vec(mesh.vertices[t[0]]) - origin);
    const Vec3 b = frame * (to_vec(mesh.vertices[t[1]]) - origin);
    const Vec3 c = frame * (to_vec(mesh.vertices[t[2]]) - origin);
    acc += (b - a).cross(c - a);  // 2 x area-weighted normal
  }
  const double norm = acc.norm();
  if (norm < 1e-300) return std::nullopt;
  return Vec3(acc / norm);
}

std::optional<double> quadric_curvature(const SurfaceMesh& mesh, int v,
                                        const std::vector<std::vector<int>>& incidence,
                                        const std::function<bool(int)>& tri_filter) {
  // two-ring stencil through the (possibly filtered) triangle fan
  std::vector<int> stencil;
  std::vector<char> seen(mesh.vertex_count(), 0);
  seen[v] = 1;
  std::vector<int> ring = {v};
  for (int depth = 0; depth < 2; ++depth) {
    std::vector<int> next;
    for (int u : ring) {
      for (int ti : incidence[u]) {
        if (tri_filter && !tri_filter(ti)) continue;
        for (int k = 0; k < 3; ++k) {
          const int w = mesh.triangles[ti][k];
          if (!seen[w]) {
            seen[w] = 1;
            stencil.push_back(w);
            next.push_back(w);
          }
        }
      }
    }
    ring = std::move(next);
  }
  if (stencil.size() < 6) return std::nullopt;

  const auto normal = ring_normal(mesh, v, incidence[v], tri_filter);
  if (!normal) return std::nullopt;
  const Vec3 n = *normal;
  Vec3 t1 = n.cross(Vec3(1, 0, 0));
  if (t1.norm() < 0.1) t1 = n.cross(Vec3(0, 1, 0));
  t1.normalize();
  const Vec3 t2 = n.cross(t1);

  const Mat3 frame = metric_coframe(mesh.params, mesh.vertices[v].base);
  const Vec3 origin = to_vec(mesh.vertices[v]);

  std::vector<Vec3> xi;
  std::vector<double> norms;
  xi.reserve(stencil.size());
  for (int w : stencil) {
    xi.push_back(frame * (to_vec(mesh.vertices[w]) - origin));
    norms.push_back(xi.back().norm());
  }
  std::vector<double> sorted = norms;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double sigma = 2.0 * std::max(sorted[sorted.size() / 2], 1e-12);

  // w = d s + e t + (a s^2 + 2 b s t + c t^2) / 2, weighted least squares
  Eigen::Matrix<double, 5, 5> ata = Eigen::Matrix<double, 5, 5>::Zero();
  Eigen::Matrix<double, 5, 1> atb = Eigen::Matrix<double, 5, 1>::Zero();
  int effective = 0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double s = xi[k].dot(t1);
    const double t = xi[k].dot(t2);
    const double w = xi[k].dot(n);
    const double wt = std::exp(-0.5 * norms[k] * norms[k] / (sigma * sigma));
    if (wt > 0.1) ++effective;
    Eigen::Matrix<double, 5, 1> row;
    row << s, t, 0.5 * s * s, s * t, 0.5 * t * t;
    ata += wt * row * row.transpose();
    atb += wt * row * w;
  }
  if (effective < 5) return std::nullopt;
  Eigen::LDLT<Eigen::Matrix<double, 5, 5>> ldlt(ata);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const Eigen::Matrix<double, 5, 1> coef = ldlt.solve(atb);
  const double d = coef[0], e = coef[1];
  const double a = coef[2], b = coef[3], c = coef[4];
  const double slope = 1.0 + d * d + e * e;
  return (a * c - b * b) / (slope * slope);
}

double edge_length(const SurfaceMesh& mesh, int a, int b) {
  const Vec3 pa = to_vec(mesh.vertices[a]);
  const Vec3 pb = to_vec(mesh.vertices[b]);
  const BasePoint mid{0.5 * (pa.x() + pb.x()), 0.5 * (pa.y() + pb.y())};
  const MetricTensor g = metric_at(mesh.params, mid);
  const Vec3 d = pb - pa;
  return std::sqrt(std::max(0.0, d.dot(g * d)));
}

}  // namespace ekt
