#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ektlab/cli.hpp"

namespace py = pybind11;
using namespace ekt;

namespace {

BasePoint bp(const std::pair<double, double>& p) { return BasePoint{p.first, p.second}; }

AmbientPoint ap(const std::tuple<double, double, double>& p) {
  return AmbientPoint{{std::get<0>(p), std::get<1>(p)}, std::get<2>(p)};
}

std::tuple<double, double, double> untuple(const AmbientPoint& p) {
  return {p.base.x, p.base.y, p.t};
}

py::dict verdict_dict(const SolvabilityVerdict& v) {
  py::dict out;
  out["solvable"] = v.solvable;
  out["inconclusive"] = v.inconclusive;
  out["marginal"] = v.marginal;
  out["has_c_arcs"] = v.has_c_arcs;
  out["extended_data"] = v.extended_data;
  out["alpha_boundary"] = v.alpha_boundary;
  out["beta_boundary"] = v.beta_boundary;
  out["polygons_checked"] = v.polygons_checked;
  py::list witnesses;
  for (const ConditionViolation& w : v.witnesses) {
    py::dict entry;
    entry["vertices"] = w.polygon.junction_ids;
    entry["alpha"] = w.measures.alpha;
    entry["beta"] = w.measures.beta;
    entry["gamma"] = w.measures.gamma;
    entry["inequality"] = w.inequality;
    witnesses.append(entry);
  }
  out["witnesses"] = witnesses;
  return out;
}

py::dict stats_dict(const SolveStats& s) {
  py::dict out;
  out["converged"] = s.converged;
  out["iterations"] = s.iters;
  out["residual"] = s.residual;
  out["energy"] = s.energy;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ektlab, m) {
  m.doc() = "minimal graphs over convex domains in the homogeneous spaces E(kappa, tau)";

  py::register_exception<Error>(m, "EktError");

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double>(), py::arg("kappa"), py::arg("tau"))
      .def_readonly("kappa", &ModelParams::kappa)
      .def_readonly("tau", &ModelParams::tau)
      .def_property_readonly("disc_radius", &ModelParams::disc_radius)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(kappa=" + std::to_string(p.kappa) +
               ", tau=" + std::to_string(p.tau) + ")";
      });

  m.def("conformal_factor",
        [](const ModelParams& params, std::pair<double, double> p) {
          return conformal_factor(params, bp(p));
        },
        py::arg("params"), py::arg("p"));
  m.def("metric_at",
        [](const ModelParams& params, std::pair<double, double> p) -> Eigen::Matrix3d {
          return metric_at(params, bp(p));
        },
        py::arg("params"), py::arg("p"));
  m.def("metric_coframe",
        [](const ModelParams& params, std::pair<double, double> p) -> Eigen::Matrix3d {
          return metric_coframe(params, bp(p));
        },
        py::arg("params"), py::arg("p"));
  m.def("base_distance",
        [](const ModelParams& params, std::pair<double, double> p, std::pair<double, double> q) {
          return base_distance(params, bp(p), bp(q));
        },
        py::arg("params"), py::arg("p"), py::arg("q"));
  m.def("geodesic_between",
        [](const ModelParams& params, std::pair<double, double> p, std::pair<double, double> q,
           int samples) {
          const GeodesicSegment seg = geodesic_between(params, bp(p), bp(q), samples);
          std::vector<std::pair<double, double>> pts;
          for (const BasePoint& b : seg.polyline) pts.push_back({b.x, b.y});
          return py::make_tuple(pts, seg.length);
        },
        py::arg("params"), py::arg("p"), py::arg("q"), py::arg("samples") = 65);
  m.def("graph_area_element",
        [](const ModelParams& params, std::pair<double, double> p,
           std::pair<double, double> grad) {
          return graph_area_element(params, bp(p), Vec2(grad.first, grad.second));
        },
        py::arg("params"), py::arg("p"), py::arg("grad_u"));
  m.def("rescaled_metric_at",
        [](double lam, double tau, std::pair<double, double> p) -> Eigen::Matrix3d {
          return rescaled_metric_at(lam, tau, bp(p));
        },
        py::arg("lam"), py::arg("tau"), py::arg("p"));
  m.def("homothety",
        [](double lam, std::tuple<double, double, double> p) {
          return untuple(homothety(lam, ap(p)));
        },
        py::arg("lam"), py::arg("p"));
  m.def("pullback_check",
        [](double lam, double tau, std::pair<double, double> p, const Vec3& v, const Vec3& w) {
          return pullback_check(lam, tau, bp(p), v, w);
        },
        py::arg("lam"), py::arg("tau"), py::arg("p"), py::arg("v"), py::arg("w"));
  m.def("euclidean_limit_deviation", &euclidean_limit_deviation, py::arg("lam"), py::arg("tau"),
        py::arg("radius"), py::arg("radial_samples") = 8, py::arg("angular_samples") = 16);

  py::class_<ReflectionAxis>(m, "ReflectionAxis")
      .def_static("vertical",
                  [](std::pair<double, double> x0) { return ReflectionAxis::vertical(bp(x0)); },
                  py::arg("x0"))
      .def_static("horizontal",
                  [](std::pair<double, double> a, std::pair<double, double> b, double level) {
                    return ReflectionAxis::horizontal(bp(a), bp(b), level);
                  },
                  py::arg("a"), py::arg("b"), py::arg("level"));

  m.def("reflect_point",
        [](const ModelParams& params, const ReflectionAxis& axis,
           std::tuple<double, double, double> p) {
          return untuple(reflect_point(params, axis, ap(p)));
        },
        py::arg("params"), py::arg("axis"), py::arg("p"));
  m.def("isometry_check", &isometry_check, py::arg("params"), py::arg("axis"),
        py::arg("samples"), py::arg("seed") = 20240);

  py::class_<GraphMesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &GraphMesh::vertex_count)
      .def_property_readonly("num_triangles", &GraphMesh::triangle_count)
      .def_property_readonly("h", [](const GraphMesh& mesh) { return mesh.h; })
      .def("min_angle_deg", &GraphMesh::min_angle_deg)
      .def("vertices",
           [](const GraphMesh& mesh) {
             std::vector<std::pair<double, double>> out;
             for (const BasePoint& p : mesh.vertices) out.push_back({p.x, p.y});
             return out;
           })
      .def("heights", [](const GraphMesh& mesh) { return mesh.heights; })
      .def("boundary", [](const GraphMesh& mesh) { return mesh.boundary; })
      .def("area", [](const GraphMesh& mesh) { return discrete_area(mesh.params, mesh); })
      .def("max_principle_violation",
           [](const GraphMesh& mesh) { return max_principle_violation(mesh); })
      .def("curvature", [](const GraphMesh& mesh) {
        const CurvatureField field = gaussian_curvature(lift_graph(mesh));
        return py::make_tuple(field.k, field.reliable);
      });

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("name", [](const Problem& p) { return p.name; })
      .def_property_readonly("params", [](const Problem& p) { return p.spec.params; })
      .def("check",
           [](const Problem& p) { return verdict_dict(check_jenkins_serrin(p.spec)); })
      .def("build_mesh",
           [](const Problem& p, std::optional<double> h) {
             return build_mesh(p.spec, h.value_or(p.solver.h));
           },
           py::arg("h") = std::nullopt)
      .def("solve_level",
           [](const Problem& p, GraphMesh& mesh, int n, std::optional<double> tolerance) {
             SolveOptions opts;
             opts.tol_residual = tolerance.value_or(p.solver.tol);
             const SolveStats stats = solve_truncated_level(p.spec, mesh, n, opts);
             return stats_dict(stats);
           },
           py::arg("mesh"), py::arg("n"), py::arg("tol") = std::nullopt)
      .def("run",
           [](const Problem& p, GraphMesh& mesh, std::optional<std::vector<int>> schedule,
              bool force) {
             SolveOptions opts;
             opts.tol_residual = p.solver.tol;
             std::vector<ProbeRegion> probes;
             if (p.solver.probe) probes.push_back(*p.solver.probe);
             const TruncationRun run = run_jenkins_serrin(
                 p.spec, mesh, schedule.value_or(p.solver.schedule), opts, probes, force);
             py::dict out;
             out["schedule"] = run.schedule;
             out["forced"] = run.forced;
             out["converged_on_probes"] = run.converged_on_probes;
             out["probe_sup_diffs"] =
                 run.probe_sup_diffs.empty() ? std::vector<double>{} : run.probe_sup_diffs[0];
             py::list levels;
             for (const SolveStats& s : run.level_stats) levels.append(stats_dict(s));
             out["levels"] = levels;
             return out;
           },
           py::arg("mesh"), py::arg("schedule") = std::nullopt, py::arg("force") = false)
      .def("uniqueness_probe",
           [](const Problem& p, const GraphMesh& mesh, int n) {
             SolveOptions opts;
             opts.tol_residual = p.solver.tol;
             return uniqueness_probe(p.spec, mesh, n, opts);
           },
           py::arg("mesh"), py::arg("n"));

  m.def("load_problem", &load_problem, py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
