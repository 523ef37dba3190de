#include "pfmpm/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pfmpm {

using json = nlohmann::ordered_json;

namespace {

constexpr double kDegToRad = M_PI / 180.0;

/// Collects every problem instead of failing fast.
struct Validator {
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) return;
    for (const auto& [key, value] : obj.items())
      if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }

  bool require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required key");
      return false;
    }
    return true;
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback,
                bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required key");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(path + "." + key, "expected a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  long integer(const json& obj, const std::string& path, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
      fail(path + "." + key, "expected an integer");
      return fallback;
    }
    return obj[key].get<long>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
      fail(path + "." + key, "expected a boolean");
      return fallback;
    }
    return obj[key].get<bool>();
  }

  std::string text(const json& obj, const std::string& path, const char* key,
                   const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required key");
      return fallback;
    }
    if (!obj[key].is_string()) {
      fail(path + "." + key, "expected a string");
      return fallback;
    }
    return obj[key].get<std::string>();
  }

  Vec2 vec2(const json& obj, const std::string& path, const char* key, Vec2 fallback,
            bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required key");
      return fallback;
    }
    const json& v = obj[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path + "." + key, "expected [x, y]");
      return fallback;
    }
    return Vec2(v[0].get<double>(), v[1].get<double>());
  }

  Rect rect(const json& obj, const std::string& path) {
    Rect r;
    check_keys(obj, path, {"min", "max"});
    r.min = vec2(obj, path, "min", Vec2::Zero(), true);
    r.max = vec2(obj, path, "max", Vec2::Zero(), true);
    if (r.max.x() < r.min.x() || r.max.y() < r.min.y()) fail(path, "max must not be below min");
    return r;
  }
};

GammaTensor parse_gamma(Validator& v, const json& obj, const std::string& path) {
  v.check_keys(obj, path, {"g1111", "g2222", "g1122", "g1112", "g1222", "g1212"});
  Eigen::Matrix3d voigt = Eigen::Matrix3d::Zero();
  voigt(0, 0) = v.number(obj, path, "g1111", 0.0);
  voigt(1, 1) = v.number(obj, path, "g2222", 0.0);
  voigt(0, 1) = voigt(1, 0) = v.number(obj, path, "g1122", 0.0);
  voigt(0, 2) = voigt(2, 0) = v.number(obj, path, "g1112", 0.0);
  voigt(1, 2) = voigt(2, 1) = v.number(obj, path, "g1222", 0.0);
  voigt(2, 2) = v.number(obj, path, "g1212", 0.0);
  return GammaTensor::from_voigt(voigt);
}

json gamma_to_json(const GammaTensor& g) {
  const Eigen::Matrix3d& v = g.voigt();
  json j;
  j["g1111"] = v(0, 0);
  j["g2222"] = v(1, 1);
  j["g1122"] = v(0, 1);
  j["g1112"] = v(0, 2);
  j["g1222"] = v(1, 2);
  j["g1212"] = v(2, 2);
  return j;
}

ShapeGeometry parse_shape(Validator& v, const json& obj, const std::string& path) {
  const std::string kind = v.text(obj, path, "kind", "", true);
  if (kind == "rectangle") {
    v.check_keys(obj, path, {"kind", "min", "max"});
    RectangleShape s;
    s.rect.min = v.vec2(obj, path, "min", Vec2::Zero(), true);
    s.rect.max = v.vec2(obj, path, "max", Vec2::Zero(), true);
    return s;
  }
  if (kind == "disk") {
    v.check_keys(obj, path, {"kind", "center", "radius"});
    DiskShape s;
    s.center = v.vec2(obj, path, "center", Vec2::Zero(), true);
    s.radius = v.number(obj, path, "radius", 0.0, true);
    if (!(s.radius > 0.0)) v.fail(path + ".radius", "must be positive");
    return s;
  }
  if (kind == "ring") {
    v.check_keys(obj, path, {"kind", "center", "r_outer", "r_inner"});
    RingShape s;
    s.center = v.vec2(obj, path, "center", Vec2::Zero(), true);
    s.r_outer = v.number(obj, path, "r_outer", 0.0, true);
    s.r_inner = v.number(obj, path, "r_inner", 0.0, true);
    if (!(s.r_outer > s.r_inner) || !(s.r_inner >= 0.0))
      v.fail(path, "requires 0 <= r_inner < r_outer");
    return s;
  }
  if (kind == "polygon") {
    v.check_keys(obj, path, {"kind", "vertices"});
    PolygonShape s;
    if (v.require(obj, path, "vertices") && obj["vertices"].is_array()) {
      for (const auto& vert : obj["vertices"]) {
        if (vert.is_array() && vert.size() == 2 && vert[0].is_number() && vert[1].is_number())
          s.vertices.emplace_back(vert[0].get<double>(), vert[1].get<double>());
        else
          v.fail(path + ".vertices", "each vertex must be [x, y]");
      }
    }
    if (s.vertices.size() < 3) v.fail(path + ".vertices", "polygon needs at least 3 vertices");
    return s;
  }
  v.fail(path + ".kind", "unknown shape kind '" + kind + "'");
  return RectangleShape{};
}

Rect shape_bounding_box(const ShapeGeometry& shape) {
  return std::visit(
      [](const auto& s) -> Rect {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RectangleShape>) {
          return s.rect;
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          return {s.center - Vec2(s.radius, s.radius), s.center + Vec2(s.radius, s.radius)};
        } else if constexpr (std::is_same_v<T, RingShape>) {
          return {s.center - Vec2(s.r_outer, s.r_outer), s.center + Vec2(s.r_outer, s.r_outer)};
        } else {
          Rect r{s.vertices.empty() ? Vec2::Zero() : s.vertices[0],
                 s.vertices.empty() ? Vec2::Zero() : s.vertices[0]};
          for (const Vec2& p : s.vertices) {
            r.min = r.min.cwiseMin(p);
            r.max = r.max.cwiseMax(p);
          }
          return r;
        }
      },
      shape);
}

json shape_to_json(const ShapeGeometry& shape) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, RectangleShape>) {
          j["kind"] = "rectangle";
          j["min"] = {s.rect.min.x(), s.rect.min.y()};
          j["max"] = {s.rect.max.x(), s.rect.max.y()};
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          j["kind"] = "disk";
          j["center"] = {s.center.x(), s.center.y()};
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, RingShape>) {
          j["kind"] = "ring";
          j["center"] = {s.center.x(), s.center.y()};
          j["r_outer"] = s.r_outer;
          j["r_inner"] = s.r_inner;
        } else {
          j["kind"] = "polygon";
          json verts = json::array();
          for (const Vec2& p : s.vertices) verts.push_back({p.x(), p.y()});
          j["vertices"] = verts;
        }
        return j;
      },
      shape);
}

EdgeNormal parse_edge_normal(Validator& v, const json& obj, const std::string& path) {
  const std::string s = v.text(obj, path, "surface_normal", "+y", true);
  if (s == "+x") return EdgeNormal::PlusX;
  if (s == "-x") return EdgeNormal::MinusX;
  if (s == "+y") return EdgeNormal::PlusY;
  if (s == "-y") return EdgeNormal::MinusY;
  v.fail(path + ".surface_normal", "expected one of +x, -x, +y, -y");
  return EdgeNormal::PlusY;
}

const char* edge_normal_name(EdgeNormal n) {
  switch (n) {
    case EdgeNormal::PlusX: return "+x";
    case EdgeNormal::MinusX: return "-x";
    case EdgeNormal::PlusY: return "+y";
    default: return "-y";
  }
}

}  // namespace

int SimConfig::n_fields() const {
  int n = 0;
  for (const BodyShape& b : bodies) n = std::max(n, b.field_id + 1);
  return n;
}

SimConfig parse_config(const std::string& content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  Validator v;
  SimConfig cfg;

  v.check_keys(root, "$",
               {"grid", "thickness", "plane", "cell_density", "materials", "bodies", "precracks",
                "loads", "fixed", "contact", "solver", "outputs"});

  // --- grid ---
  if (v.require(root, "$", "grid")) {
    const json& g = root["grid"];
    v.check_keys(g, "grid", {"origin", "size", "h", "order"});
    const Vec2 origin = v.vec2(g, "grid", "origin", Vec2::Zero());
    const Vec2 size = v.vec2(g, "grid", "size", Vec2::Zero(), true);
    cfg.grid_bounds = {origin, origin + size};
    cfg.h = v.number(g, "grid", "h", 1.0, true);
    cfg.order = static_cast<int>(v.integer(g, "grid", "order", 2));
    if (!(cfg.h > 0.0)) v.fail("grid.h", "must be positive");
    if (cfg.order < 1 || cfg.order > 3) v.fail("grid.order", "must be 1, 2 or 3");
    for (int a = 0; a < 2; ++a) {
      const double extent = size[a];
      if (extent <= 0.0) {
        v.fail("grid.size", "extents must be positive");
      } else if (cfg.h > 0.0) {
        const double n = extent / cfg.h;
        if (std::abs(n - std::lround(n)) > 1e-9 * std::max(1.0, n))
          v.fail("grid.size", std::string("h does not divide the ") + (a == 0 ? "x" : "y") +
                                  " extent into an integer span count");
      }
    }
  }

  cfg.thickness = v.number(root, "$", "thickness", 1.0);
  if (!(cfg.thickness > 0.0)) v.fail("thickness", "must be positive");
  const std::string plane = v.text(root, "$", "plane", "stress");
  if (plane == "stress") {
    cfg.plane = PlaneMode::Stress;
  } else if (plane == "strain") {
    cfg.plane = PlaneMode::Strain;
  } else {
    v.fail("plane", "expected 'stress' or 'strain'");
  }
  cfg.cell_density = static_cast<int>(v.integer(root, "$", "cell_density", 3));
  if (cfg.cell_density < 1) v.fail("cell_density", "must be at least 1");

  // --- materials ---
  if (v.require(root, "$", "materials") && root["materials"].is_array()) {
    int mi = 0;
    for (const json& jm : root["materials"]) {
      const std::string path = "materials[" + std::to_string(mi) + "]";
      v.check_keys(jm, path,
                   {"name", "E", "nu", "rho", "l0", "k_f", "Gc_bar", "phi_deg", "gamma"});
      Material m;
      m.name = v.text(jm, path, "name", "material" + std::to_string(mi));
      m.E = v.number(jm, path, "E", 0.0, true);
      m.nu = v.number(jm, path, "nu", 0.0, true);
      m.rho = v.number(jm, path, "rho", 0.0, true);
      m.l0 = v.number(jm, path, "l0", 1.0);
      m.k_f = v.number(jm, path, "k_f", 0.0);
      m.Gc_bar = v.number(jm, path, "Gc_bar", 1.0);
      m.phi = v.number(jm, path, "phi_deg", 0.0) * kDegToRad;
      if (jm.contains("gamma")) m.gamma = parse_gamma(v, jm["gamma"], path + ".gamma");
      m.plane = cfg.plane;
      if (!(m.E > 0.0)) v.fail(path + ".E", "must be positive");
      if (!(m.nu > -1.0 && m.nu < 0.5)) v.fail(path + ".nu", "must lie in (-1, 0.5)");
      if (!(m.rho > 0.0)) v.fail(path + ".rho", "must be positive");
      if (!(m.l0 > 0.0)) v.fail(path + ".l0", "must be positive");
      if (!(m.k_f >= 0.0 && m.k_f < 1.0)) v.fail(path + ".k_f", "must lie in [0, 1)");
      if (!(m.Gc_bar > 0.0)) v.fail(path + ".Gc_bar", "must be positive");
      cfg.materials.push_back(std::move(m));
      ++mi;
    }
    if (cfg.materials.empty()) v.fail("materials", "at least one material is required");
  }

  auto material_index = [&cfg](const std::string& name) -> int {
    for (size_t i = 0; i < cfg.materials.size(); ++i)
      if (cfg.materials[i].name == name) return static_cast<int>(i);
    return -1;
  };

  // --- bodies ---
  if (v.require(root, "$", "bodies") && root["bodies"].is_array()) {
    int bi = 0;
    for (const json& jb : root["bodies"]) {
      const std::string path = "bodies[" + std::to_string(bi) + "]";
      v.check_keys(jb, path, {"name", "field", "material", "shape", "velocity"});
      BodyShape b;
      b.name = v.text(jb, path, "name", "body" + std::to_string(bi));
      b.field_id = static_cast<int>(v.integer(jb, path, "field", 0));
      if (b.field_id < 0) v.fail(path + ".field", "must be non-negative");
      const std::string mat = v.text(jb, path, "material", "", true);
      b.material_id = material_index(mat);
      if (b.material_id < 0) {
        v.fail(path + ".material",
               "body '" + b.name + "' references unknown material '" + mat + "'");
        b.material_id = 0;
      }
      if (v.require(jb, path, "shape")) b.geometry = parse_shape(v, jb["shape"], path + ".shape");
      if (jb.contains("velocity")) {
        const json& jv = jb["velocity"];
        v.check_keys(jv, path + ".velocity", {"constant", "linear"});
        if (jv.contains("constant")) {
          b.initial_velocity.offset = v.vec2(jv, path + ".velocity", "constant", Vec2::Zero());
        }
        if (jv.contains("linear")) {
          const json& jl = jv["linear"];
          v.check_keys(jl, path + ".velocity.linear", {"origin", "matrix", "offset"});
          b.initial_velocity.origin = v.vec2(jl, path + ".velocity.linear", "origin", Vec2::Zero());
          b.initial_velocity.offset = v.vec2(jl, path + ".velocity.linear", "offset", Vec2::Zero());
          if (jl.contains("matrix")) {
            const json& jmat = jl["matrix"];
            if (jmat.is_array() && jmat.size() == 2 && jmat[0].is_array() && jmat[0].size() == 2 &&
                jmat[1].is_array() && jmat[1].size() == 2) {
              for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                  b.initial_velocity.matrix(r, c) = jmat[r][c].get<double>();
            } else {
              v.fail(path + ".velocity.linear.matrix", "expected [[a,b],[c,d]]");
            }
          }
        }
      }
      // Bodies must sit inside the grid with one cell of clearance.
      const Rect bb = shape_bounding_box(b.geometry);
      const Rect inner{cfg.grid_bounds.min + Vec2(cfg.h, cfg.h),
                       cfg.grid_bounds.max - Vec2(cfg.h, cfg.h)};
      if (!(bb.min.x() >= inner.min.x() && bb.min.y() >= inner.min.y() &&
            bb.max.x() <= inner.max.x() && bb.max.y() <= inner.max.y()))
        v.fail(path + ".shape",
               "body '" + b.name + "' must lie inside the grid with one cell of clearance");
      cfg.bodies.push_back(std::move(b));
      ++bi;
    }
    if (cfg.bodies.empty()) v.fail("bodies", "at least one body is required");
  }

  // --- precracks ---
  if (root.contains("precracks") && root["precracks"].is_array()) {
    int ci = 0;
    for (const json& jc : root["precracks"]) {
      const std::string path = "precracks[" + std::to_string(ci) + "]";
      v.check_keys(jc, path, {"body", "from", "to", "magnitude"});
      PreCrack c;
      c.body = v.text(jc, path, "body", "", true);
      c.from = v.vec2(jc, path, "from", Vec2::Zero(), true);
      c.to = v.vec2(jc, path, "to", Vec2::Zero(), true);
      c.seeding_magnitude = v.number(jc, path, "magnitude", 1000.0);
      if ((c.to - c.from).norm() <= 0.0) v.fail(path, "segment has zero length");
      bool found = false;
      for (const BodyShape& b : cfg.bodies)
        if (b.name == c.body) found = true;
      if (!found) v.fail(path + ".body", "references unknown body '" + c.body + "'");
      cfg.precracks.push_back(std::move(c));
      ++ci;
    }
  }

  // --- loads ---
  if (root.contains("loads")) {
    const json& jl = root["loads"];
    v.check_keys(jl, "loads", {"gravity", "tractions"});
    cfg.loads.gravity = v.vec2(jl, "loads", "gravity", Vec2::Zero());
    if (jl.contains("tractions") && jl["tractions"].is_array()) {
      int ti = 0;
      for (const json& jt : jl["tractions"]) {
        const std::string path = "loads.tractions[" + std::to_string(ti) + "]";
        v.check_keys(jt, path, {"band", "surface_normal", "traction", "ramp_us"});
        TractionLoad t;
        if (v.require(jt, path, "band")) t.band = v.rect(jt["band"], path + ".band");
        t.surface_normal = parse_edge_normal(v, jt, path);
        t.traction = v.vec2(jt, path, "traction", Vec2::Zero(), true);
        t.ramp_us = v.number(jt, path, "ramp_us", 0.0);
        if (t.ramp_us < 0.0) v.fail(path + ".ramp_us", "must be non-negative");
        cfg.loads.tractions.push_back(t);
        ++ti;
      }
    }
  }

  // --- fixed boundaries ---
  if (root.contains("fixed") && root["fixed"].is_array()) {
    int fi = 0;
    for (const json& jf : root["fixed"]) {
      const std::string path = "fixed[" + std::to_string(fi) + "]";
      v.check_keys(jf, path, {"band", "components"});
      FixedBoundary fb;
      if (v.require(jf, path, "band")) fb.band = v.rect(jf["band"], path + ".band");
      const std::string comp = v.text(jf, path, "components", "xy");
      fb.fix_x = comp.find('x') != std::string::npos;
      fb.fix_y = comp.find('y') != std::string::npos;
      if (!fb.fix_x && !fb.fix_y) v.fail(path + ".components", "expected 'x', 'y' or 'xy'");
      cfg.fixed.push_back(fb);
      ++fi;
    }
  }

  // --- contact ---
  if (root.contains("contact")) {
    const json& jc = root["contact"];
    v.check_keys(jc, "contact", {"mu_f", "debug_break_collinearity"});
    cfg.contact.mu_f = v.number(jc, "contact", "mu_f", 0.0);
    cfg.contact.debug_break_collinearity =
        v.boolean(jc, "contact", "debug_break_collinearity", false);
    if (cfg.contact.mu_f < 0.0) v.fail("contact.mu_f", "must be non-negative");
  }

  // --- solver ---
  if (root.contains("solver")) {
    const json& js = root["solver"];
    v.check_keys(js, "solver",
                 {"dt", "alpha_c", "steps", "n_staggs", "tol_c", "check_every", "phase_field",
                  "blowup_factor", "double_map_strain"});
    if (js.contains("dt")) {
      if (js["dt"].is_string()) {
        if (js["dt"].get<std::string>() != "auto")
          v.fail("solver.dt", "expected a number or 'auto'");
        cfg.solver.dt = 0.0;
      } else if (js["dt"].is_number()) {
        cfg.solver.dt = js["dt"].get<double>();
        if (!(cfg.solver.dt > 0.0)) v.fail("solver.dt", "must be positive (or 'auto')");
      } else {
        v.fail("solver.dt", "expected a number or 'auto'");
      }
    }
    cfg.solver.alpha_c = v.number(js, "solver", "alpha_c", 0.80);
    if (!(cfg.solver.alpha_c >= 0.8 && cfg.solver.alpha_c <= 0.98))
      v.fail("solver.alpha_c", "must lie in [0.8, 0.98]");
    cfg.solver.n_steps = v.integer(js, "solver", "steps", 0);
    if (cfg.solver.n_steps < 0) v.fail("solver.steps", "must be non-negative");
    cfg.solver.n_staggs = static_cast<int>(v.integer(js, "solver", "n_staggs", 1));
    if (cfg.solver.n_staggs < 1) v.fail("solver.n_staggs", "must be at least 1");
    cfg.solver.tol_c = v.number(js, "solver", "tol_c", 1e-6);
    cfg.solver.check_every = static_cast<int>(v.integer(js, "solver", "check_every", 100));
    cfg.solver.phase_field_on = v.boolean(js, "solver", "phase_field", true);
    cfg.solver.blowup_factor = v.number(js, "solver", "blowup_factor", 2.0);
    cfg.solver.double_map_strain = v.boolean(js, "solver", "double_map_strain", true);
  }

  // --- outputs ---
  if (root.contains("outputs")) {
    const json& jo = root["outputs"];
    v.check_keys(jo, "outputs",
                 {"directory", "snapshot_every", "energy_every", "c_min_output", "vtk",
                  "track_tip", "fragments"});
    cfg.outputs.directory = v.text(jo, "outputs", "directory", "out");
    cfg.outputs.snapshot_every = v.integer(jo, "outputs", "snapshot_every", 0);
    cfg.outputs.energy_every = v.integer(jo, "outputs", "energy_every", 1);
    cfg.outputs.c_min_output = v.number(jo, "outputs", "c_min_output", -1.0);
    cfg.outputs.vtk = v.boolean(jo, "outputs", "vtk", false);
    if (jo.contains("track_tip")) {
      const json& jt = jo["track_tip"];
      v.check_keys(jt, "outputs.track_tip", {"axis", "threshold", "region", "field"});
      cfg.outputs.track_tip = true;
      const std::string axis = v.text(jt, "outputs.track_tip", "axis", "y");
      if (axis != "x" && axis != "y") v.fail("outputs.track_tip.axis", "expected 'x' or 'y'");
      cfg.outputs.tip_axis = axis.empty() ? 'y' : axis[0];
      cfg.outputs.tip_threshold = v.number(jt, "outputs.track_tip", "threshold", 0.5);
      cfg.outputs.tip_field = static_cast<int>(v.integer(jt, "outputs.track_tip", "field", -1));
      if (jt.contains("region")) {
        cfg.outputs.tip_region = v.rect(jt["region"], "outputs.track_tip.region");
        cfg.outputs.tip_region_set = true;
      }
    }
    if (jo.contains("fragments")) {
      const json& jf = jo["fragments"];
      v.check_keys(jf, "outputs.fragments", {"threshold"});
      cfg.outputs.fragments = true;
      cfg.outputs.fragment_threshold = v.number(jf, "outputs.fragments", "threshold", 0.05);
    }
  }

  if (!v.errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration (" << v.errors.size() << " error"
       << (v.errors.size() > 1 ? "s" : "") << "):";
    for (const std::string& e : v.errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }

  for (Material& m : cfg.materials) m.finalize();
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& cfg) {
  json root;
  root["grid"] = {{"origin", {cfg.grid_bounds.min.x(), cfg.grid_bounds.min.y()}},
                  {"size",
                   {cfg.grid_bounds.max.x() - cfg.grid_bounds.min.x(),
                    cfg.grid_bounds.max.y() - cfg.grid_bounds.min.y()}},
                  {"h", cfg.h},
                  {"order", cfg.order}};
  root["thickness"] = cfg.thickness;
  root["plane"] = cfg.plane == PlaneMode::Stress ? "stress" : "strain";
  root["cell_density"] = cfg.cell_density;

  root["materials"] = json::array();
  for (const Material& m : cfg.materials) {
    json jm;
    jm["name"] = m.name;
    jm["E"] = m.E;
    jm["nu"] = m.nu;
    jm["rho"] = m.rho;
    jm["l0"] = m.l0;
    jm["k_f"] = m.k_f;
    jm["Gc_bar"] = m.Gc_bar;
    jm["phi_deg"] = m.phi / kDegToRad;
    jm["gamma"] = gamma_to_json(m.gamma);
    root["materials"].push_back(jm);
  }

  root["bodies"] = json::array();
  for (const BodyShape& b : cfg.bodies) {
    json jb;
    jb["name"] = b.name;
    jb["field"] = b.field_id;
    jb["material"] = cfg.materials[b.material_id].name;
    jb["shape"] = shape_to_json(b.geometry);
    json jv;
    if (b.initial_velocity.matrix.isZero(0.0)) {
      jv["constant"] = {b.initial_velocity.offset.x(), b.initial_velocity.offset.y()};
    } else {
      jv["linear"] = {
          {"origin", {b.initial_velocity.origin.x(), b.initial_velocity.origin.y()}},
          {"matrix",
           {{b.initial_velocity.matrix(0, 0), b.initial_velocity.matrix(0, 1)},
            {b.initial_velocity.matrix(1, 0), b.initial_velocity.matrix(1, 1)}}},
          {"offset", {b.initial_velocity.offset.x(), b.initial_velocity.offset.y()}}};
    }
    jb["velocity"] = jv;
    root["bodies"].push_back(jb);
  }

  root["precracks"] = json::array();
  for (const PreCrack& c : cfg.precracks) {
    root["precracks"].push_back({{"body", c.body},
                                 {"from", {c.from.x(), c.from.y()}},
                                 {"to", {c.to.x(), c.to.y()}},
                                 {"magnitude", c.seeding_magnitude}});
  }

  json jl;
  jl["gravity"] = {cfg.loads.gravity.x(), cfg.loads.gravity.y()};
  jl["tractions"] = json::array();
  for (const TractionLoad& t : cfg.loads.tractions) {
    jl["tractions"].push_back({{"band",
                                {{"min", {t.band.min.x(), t.band.min.y()}},
                                 {"max", {t.band.max.x(), t.band.max.y()}}}},
                               {"surface_normal", edge_normal_name(t.surface_normal)},
                               {"traction", {t.traction.x(), t.traction.y()}},
                               {"ramp_us", t.ramp_us}});
  }
  root["loads"] = jl;

  root["fixed"] = json::array();
  for (const FixedBoundary& f : cfg.fixed) {
    std::string comp;
    if (f.fix_x) comp += 'x';
    if (f.fix_y) comp += 'y';
    root["fixed"].push_back({{"band",
                              {{"min", {f.band.min.x(), f.band.min.y()}},
                               {"max", {f.band.max.x(), f.band.max.y()}}}},
                             {"components", comp}});
  }

  root["contact"] = {{"mu_f", cfg.contact.mu_f}};
  if (cfg.contact.debug_break_collinearity)
    root["contact"]["debug_break_collinearity"] = true;

  json js;
  if (cfg.solver.dt > 0.0) {
    js["dt"] = cfg.solver.dt;
  } else {
    js["dt"] = "auto";
  }
  js["alpha_c"] = cfg.solver.alpha_c;
  js["steps"] = cfg.solver.n_steps;
  js["n_staggs"] = cfg.solver.n_staggs;
  js["tol_c"] = cfg.solver.tol_c;
  js["check_every"] = cfg.solver.check_every;
  js["phase_field"] = cfg.solver.phase_field_on;
  js["blowup_factor"] = cfg.solver.blowup_factor;
  js["double_map_strain"] = cfg.solver.double_map_strain;
  root["solver"] = js;

  json jo;
  jo["directory"] = cfg.outputs.directory;
  jo["snapshot_every"] = cfg.outputs.snapshot_every;
  jo["energy_every"] = cfg.outputs.energy_every;
  jo["c_min_output"] = cfg.outputs.c_min_output;
  jo["vtk"] = cfg.outputs.vtk;
  if (cfg.outputs.track_tip) {
    json jt;
    jt["axis"] = std::string(1, cfg.outputs.tip_axis);
    jt["threshold"] = cfg.outputs.tip_threshold;
    jt["field"] = cfg.outputs.tip_field;
    if (cfg.outputs.tip_region_set)
      jt["region"] = {{"min", {cfg.outputs.tip_region.min.x(), cfg.outputs.tip_region.min.y()}},
                      {"max", {cfg.outputs.tip_region.max.x(), cfg.outputs.tip_region.max.y()}}};
    jo["track_tip"] = jt;
  }
  if (cfg.outputs.fragments) jo["fragments"] = {{"threshold", cfg.outputs.fragment_threshold}};
  root["outputs"] = jo;

  return root.dump(2) + "\n";
}

Simulation build_simulation(const SimConfig& cfg) {
  SplineGrid grid = SplineGrid::build(cfg.grid_bounds, cfg.h, cfg.order);

  std::vector<MaterialPoint> particles;
  for (const BodyShape& b : cfg.bodies) {
    const Material& m = cfg.materials[b.material_id];
    std::vector<MaterialPoint> pts = discretize(b, m, grid, cfg.cell_density, cfg.thickness);
    for (const PreCrack& c : cfg.precracks)
      if (c.body == b.name) seed_precrack(pts, c, m);
    apply_initial_velocity(pts, b);
    particles.insert(particles.end(), pts.begin(), pts.end());
  }

  return Simulation(std::move(grid), cfg.materials, std::move(particles), cfg.n_fields(),
                    cfg.loads, cfg.fixed, cfg.contact, cfg.solver, cfg.thickness,
                    cfg.lattice_spacing());
}

}  // namespace pfmpm
