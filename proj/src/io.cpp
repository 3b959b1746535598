#include "ektlab/io.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include <json.hpp>

namespace ekt {

using json = nlohmann::ordered_json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(Errc::parse_error, where + ": missing field '" + key + "'");
  return *it;
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(Errc::parse_error, where + ": expected a number");
  return j.get<double>();
}

// "+inf"/"-inf" strings or plain numbers
double extended_num(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(Errc::parse_error, where + ": expected a number or '+inf'/'-inf'");
  }
  return num(j, where);
}

BasePoint point2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(Errc::parse_error, where + ": expected [x, y]");
  return BasePoint{num(j[0], where), num(j[1], where)};
}

AmbientPoint point3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) fail(Errc::parse_error, where + ": expected [x, y, t]");
  return AmbientPoint{{num(j[0], where), num(j[1], where)}, num(j[2], where)};
}

// data expressions are evaluated along the arc geometry: s -> base point
struct ArcGeometry {
  std::vector<BasePoint> polyline;
  std::vector<double> cum_length;
  BasePoint at(double s) const {
    BoundaryArc probe;
    probe.polyline = polyline;
    probe.cum_length = cum_length;
    return probe.at_arclength(s);
  }
};

std::function<double(double)> make_expr(const json& j, const std::string& where,
                                        std::shared_ptr<ArcGeometry> geom) {
  const std::string expr = field(j, "expr", where).get<std::string>();
  if (expr == "const") {
    const double v = num(field(j, "value", where), where);
    return [v](double) { return v; };
  }
  if (expr == "poly2") {
    const auto coef = [&](const char* key) {
      const auto it = j.find(key);
      return it == j.end() ? 0.0 : num(*it, where);
    };
    const double c = coef("c"), cx = coef("x"), cy = coef("y");
    const double cxx = coef("xx"), cxy = coef("xy"), cyy = coef("yy");
    return [=](double s) {
      const BasePoint p = geom->at(s);
      return c + cx * p.x + cy * p.y + cxx * p.x * p.x + cxy * p.x * p.y + cyy * p.y * p.y;
    };
  }
  if (expr == "scherk") {
    return [geom](double s) {
      const BasePoint p = geom->at(s);
      return std::log(std::cos(p.y) / std::cos(p.x));
    };
  }
  if (expr == "table") {
    const json& samples = field(j, "samples", where);
    if (!samples.is_array() || samples.size() < 2)
      fail(Errc::parse_error, where + ": table needs >= 2 samples");
    std::vector<std::pair<double, double>> table;
    for (const auto& row : samples)
      table.push_back({num(row[0], where), num(row[1], where)});
    return [table](double s) {
      if (s <= table.front().first) return table.front().second;
      if (s >= table.back().first) return table.back().second;
      for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        if (s <= table[i + 1].first) {
          const double span = table[i + 1].first - table[i].first;
          const double w = span > 0.0 ? (s - table[i].first) / span : 0.0;
          return table[i].second + w * (table[i + 1].second - table[i].second);
        }
      }
      return table.back().second;
    };
  }
  fail(Errc::parse_error, where + ": unknown expr '" + expr + "'");
}

json params_to_json(const ModelParams& p) { return json{{"kappa", p.kappa}, {"tau", p.tau}}; }

ModelParams params_from_json(const json& j, const std::string& where) {
  ModelParams p{num(field(j, "kappa", where), where), num(field(j, "tau", where), where)};
  p.validate();
  return p;
}

}  // namespace

Problem load_problem(const std::string& path) {
  const json j = parse_file(path);
  Problem problem;
  problem.name = j.value("name", std::string("problem"));
  DomainSpec spec;
  spec.params = params_from_json(field(j, "model", path), path + "/model");

  std::vector<BasePoint> vertices;
  for (const auto& v : field(j, "vertices", path)) vertices.push_back(point2(v, path + "/vertices"));

  const json& arcs = field(j, "arcs", path);
  if (!arcs.is_array() || arcs.size() < 2) fail(Errc::parse_error, path + ": need >= 2 arcs");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string where = path + "/arcs/" + std::to_string(i);
    const json& a = arcs[i];
    const std::string kind = field(a, "kind", where).get<std::string>();
    const int from = int(num(field(a, "from", where), where));
    const int to = int(num(field(a, "to", where), where));
    if (from < 0 || from >= int(vertices.size()) || to < 0 || to >= int(vertices.size()))
      fail(Errc::parse_error, where + ": vertex index out of range");
    const int samples = a.contains("samples") ? int(num(a["samples"], where)) : 65;

    if (kind == "A" || kind == "B") {
      spec.arcs.push_back(make_geodesic_arc(spec.params,
                                            kind == "A" ? ArcKind::A : ArcKind::B,
                                            vertices[from], vertices[to], samples));
      continue;
    }
    if (kind != "C") fail(Errc::parse_error, where + ": kind must be A, B or C");

    std::vector<BasePoint> polyline;
    if (a.contains("polyline")) {
      for (const auto& p : a["polyline"]) polyline.push_back(point2(p, where + "/polyline"));
      if (polyline.size() < 2) fail(Errc::parse_error, where + ": polyline needs >= 2 points");
    } else {
      polyline = geodesic_between(spec.params, vertices[from], vertices[to], samples).polyline;
    }

    auto geom = std::make_shared<ArcGeometry>();
    geom->polyline = polyline;
    geom->cum_length.assign(polyline.size(), 0.0);
    for (std::size_t k = 1; k < polyline.size(); ++k)
      geom->cum_length[k] =
          geom->cum_length[k - 1] + base_distance(spec.params, polyline[k - 1], polyline[k]);

    ArcData data;
    data.value = make_expr(field(a, "data", where), where + "/data", geom);
    if (a.contains("jumps")) {
      for (const auto& jj : a["jumps"]) {
        ArcJump jump;
        jump.s = num(field(jj, "s", where + "/jumps"), where);
        jump.left = extended_num(field(jj, "left", where + "/jumps"), where);
        jump.right = extended_num(field(jj, "right", where + "/jumps"), where);
        data.jumps.push_back(jump);
      }
    }
    if (a.contains("start_limit")) data.start_limit = extended_num(a["start_limit"], where);
    if (a.contains("end_limit")) data.end_limit = extended_num(a["end_limit"], where);
    spec.arcs.push_back(make_c_arc(spec.params, std::move(polyline), std::move(data)));
  }
  problem.spec = validate_domain(std::move(spec));

  if (j.contains("solver")) {
    const json& s = j["solver"];
    const std::string where = path + "/solver";
    if (s.contains("h")) problem.solver.h = num(s["h"], where);
    if (s.contains("tol")) problem.solver.tol = num(s["tol"], where);
    if (s.contains("schedule")) {
      problem.solver.schedule.clear();
      for (const auto& n : s["schedule"]) problem.solver.schedule.push_back(int(num(n, where)));
    }
    if (s.contains("probe")) {
      ProbeRegion probe;
      probe.center = point2(field(s["probe"], "center", where), where);
      probe.radius = num(field(s["probe"], "radius", where), where);
      problem.solver.probe = probe;
    }
  }

  if (j.contains("analysis")) {
    const json& an = j["analysis"];
    const std::string where = path + "/analysis";
    if (an.contains("axis")) problem.analysis.axis = axis_from_json(an["axis"].dump());
    if (an.contains("seam_point"))
      problem.analysis.seam_point = point3(an["seam_point"], where + "/seam_point");
    if (an.contains("radius")) problem.analysis.scan_radius = num(an["radius"], where);
    if (an.contains("ball_radius")) problem.analysis.ball_radius = num(an["ball_radius"], where);
  }
  return problem;
}

void write_mesh_json(const GraphMesh& mesh, const std::string& path, std::optional<int> level,
                     const std::string& problem) {
  json j;
  j["schema"] = "ektlab.mesh/1";
  j["model"] = params_to_json(mesh.params);
  j["h"] = mesh.h;
  if (level) j["level"] = *level;
  if (!problem.empty()) j["problem"] = problem;
  json verts = json::array();
  for (const BasePoint& p : mesh.vertices) verts.push_back(json::array({p.x, p.y}));
  j["vertices"] = std::move(verts);
  j["heights"] = mesh.heights;
  json tris = json::array();
  for (const auto& t : mesh.triangles) tris.push_back(json::array({t[0], t[1], t[2]}));
  j["triangles"] = std::move(tris);
  json bd = json::array();
  for (bool b : mesh.boundary) bd.push_back(int(b));
  j["boundary"] = std::move(bd);
  json binfo = json::array();
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (!mesh.boundary[i]) {
      binfo.push_back(nullptr);
      continue;
    }
    const BoundaryVertexInfo& info = mesh.binfo[i];
    binfo.push_back(json{{"arc", info.arc},
                         {"s", info.s},
                         {"junction", info.junction},
                         {"prev_arc", info.prev_arc}});
  }
  j["binfo"] = std::move(binfo);
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << j.dump(1) << "\n";
}

GraphMesh read_mesh_json(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("schema", "") != "ektlab.mesh/1")
    fail(Errc::parse_error, path + ": not an ektlab.mesh/1 file");
  GraphMesh mesh;
  mesh.params = params_from_json(field(j, "model", path), path);
  mesh.h = num(field(j, "h", path), path);
  for (const auto& v : field(j, "vertices", path)) mesh.vertices.push_back(point2(v, path));
  for (const auto& u : field(j, "heights", path)) mesh.heights.push_back(num(u, path));
  for (const auto& t : field(j, "triangles", path)) {
    if (!t.is_array() || t.size() != 3) fail(Errc::parse_error, path + ": bad triangle");
    mesh.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  }
  for (const auto& b : field(j, "boundary", path)) mesh.boundary.push_back(b.get<int>() != 0);
  mesh.binfo.assign(mesh.vertex_count(), BoundaryVertexInfo{});
  const json& binfo = field(j, "binfo", path);
  for (std::size_t i = 0; i < binfo.size() && i < mesh.vertex_count(); ++i) {
    if (binfo[i].is_null()) continue;
    mesh.binfo[i].arc = binfo[i].value("arc", -1);
    mesh.binfo[i].s = binfo[i].value("s", 0.0);
    mesh.binfo[i].junction = binfo[i].value("junction", false);
    mesh.binfo[i].prev_arc = binfo[i].value("prev_arc", -1);
  }
  if (mesh.heights.size() != mesh.vertex_count() || mesh.boundary.size() != mesh.vertex_count())
    fail(Errc::parse_error, path + ": inconsistent array lengths");
  return mesh;
}

void write_surface_json(const SurfaceMesh& mesh, const std::string& path) {
  json j;
  j["schema"] = "ektlab.surface/1";
  j["model"] = params_to_json(mesh.params);
  j["h"] = mesh.h;
  json verts = json::array();
  for (const AmbientPoint& p : mesh.vertices)
    verts.push_back(json::array({p.base.x, p.base.y, p.t}));
  j["vertices"] = std::move(verts);
  json tris = json::array();
  for (const auto& t : mesh.triangles) tris.push_back(json::array({t[0], t[1], t[2]}));
  j["triangles"] = std::move(tris);
  json bd = json::array();
  for (bool b : mesh.boundary) bd.push_back(int(b));
  j["boundary"] = std::move(bd);
  j["seam"] = mesh.seam;
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << j.dump(1) << "\n";
}

SurfaceMesh read_surface_json(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("schema", "") != "ektlab.surface/1")
    fail(Errc::parse_error, path + ": not an ektlab.surface/1 file");
  SurfaceMesh mesh;
  mesh.params = params_from_json(field(j, "model", path), path);
  mesh.h = num(field(j, "h", path), path);
  for (const auto& v : field(j, "vertices", path)) mesh.vertices.push_back(point3(v, path));
  for (const auto& t : field(j, "triangles", path))
    mesh.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  for (const auto& b : field(j, "boundary", path)) mesh.boundary.push_back(b.get<int>() != 0);
  if (j.contains("seam"))
    for (const auto& s : j["seam"]) mesh.seam.push_back(s.get<int>());
  return mesh;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path, const CurvatureField* field) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << "# ektlab surface export: model coordinates (x, y, t)\n";
  out.precision(17);
  for (const AmbientPoint& p : mesh.vertices)
    out << "v " << p.base.x << " " << p.base.y << " " << p.t << "\n";
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  if (field) {
    json j;
    j["schema"] = "ektlab.attrs/1";
    j["gaussian_curvature"] = field->k;
    json rel = json::array();
    for (bool r : field->reliable) rel.push_back(int(r));
    j["reliable"] = std::move(rel);
    json bd = json::array();
    for (bool b : mesh.boundary) bd.push_back(int(b));
    j["boundary"] = std::move(bd);
    json seam = json::array();
    for (int s : mesh.seam) seam.push_back(s);
    j["seam"] = std::move(seam);
    std::ofstream side(path + ".attrs.json");
    if (!side) fail(Errc::io_error, "cannot write " + path + ".attrs.json");
    side << j.dump(1) << "\n";
  }
}

std::string axis_to_json(const ReflectionAxis& axis) {
  json j;
  if (axis.kind == ReflectionAxis::Kind::vertical_fiber) {
    j["kind"] = "vertical_fiber";
    j["at"] = json::array({axis.fiber_point.x, axis.fiber_point.y});
  } else {
    j["kind"] = "horizontal_geodesic";
    j["through"] = json::array({json::array({axis.geodesic_a.x, axis.geodesic_a.y}),
                                json::array({axis.geodesic_b.x, axis.geodesic_b.y})});
    j["level"] = axis.level;
  }
  return j.dump();
}

ReflectionAxis axis_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::parse_error, std::string("axis: ") + e.what());
  }
  const std::string kind = field(j, "kind", "axis").get<std::string>();
  if (kind == "vertical_fiber")
    return ReflectionAxis::vertical(point2(field(j, "at", "axis"), "axis/at"));
  if (kind == "horizontal_geodesic") {
    const json& through = field(j, "through", "axis");
    if (!through.is_array() || through.size() != 2)
      fail(Errc::parse_error, "axis/through: expected two points");
    return ReflectionAxis::horizontal(point2(through[0], "axis/through"),
                                      point2(through[1], "axis/through"),
                                      num(field(j, "level", "axis"), "axis/level"));
  }
  fail(Errc::parse_error, "axis: unknown kind '" + kind + "'");
}

}  // namespace ekt
