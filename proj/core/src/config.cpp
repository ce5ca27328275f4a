#include "maxshape/config.hpp"

#include <fstream>

#include "maxshape/errors.hpp"

namespace maxshape {

namespace {

cplx parse_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
  throw Error(ErrorCode::ConfigError, "expected number or [re, im] at " + path);
}

Vec3 parse_vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::ConfigError, "expected [x, y, z] at " + path);
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

CVec3 parse_cvec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::ConfigError, "expected [c, c, c] at " + path);
  CVec3 v;
  for (int i = 0; i < 3; ++i) v[i] = parse_complex(j[i], path);
  return v;
}

}  // namespace

void RunConfig::validate() const {
  wave.validate();
  fixed_point.validate();
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i - 1]) || !(t_grid[i] > 0.0))
      throw Error(ErrorCode::ConfigError, "t_grid must be strictly decreasing and positive");
  if (response_type != "zero" && response_type != "linear" && response_type != "saturating")
    throw Error(ErrorCode::ConfigError, "response.type must be zero|linear|saturating");
}

RunConfig parse_config(const Json& j) {
  RunConfig c;
  try {
    if (j.contains("problem")) {
      std::string p = j["problem"].get<std::string>();
      if (p == "nibc") c.problem = ProblemKind::Nibc;
      else if (p == "npec") c.problem = ProblemKind::Npec;
      else if (p == "ntc") c.problem = ProblemKind::Ntc;
      else throw Error(ErrorCode::ConfigError, "problem must be nibc|npec|ntc");
    }
    if (j.contains("mesh")) {
      const Json& m = j["mesh"];
      if (m.contains("file")) {
        c.mesh.file = m["file"].get<std::string>();
        c.mesh.builtin.clear();
      }
      if (m.contains("builtin")) c.mesh.builtin = m["builtin"].get<std::string>();
      if (m.contains("refinement")) c.mesh.refinement = m["refinement"].get<int>();
      if (m.contains("inner_radius")) c.mesh.inner_radius = m["inner_radius"].get<double>();
      if (m.contains("outer_radius")) c.mesh.outer_radius = m["outer_radius"].get<double>();
      if (m.contains("half_width")) c.mesh.half_width = m["half_width"].get<double>();
    }
    if (j.contains("wave")) {
      const Json& w = j["wave"];
      if (w.contains("k")) c.wave.k = w["k"].get<double>();
      if (w.contains("lambda")) c.wave.lambda = parse_complex(w["lambda"], "wave.lambda");
      if (w.contains("eps_r_interior"))
        c.wave.eps_r_interior = parse_complex(w["eps_r_interior"], "wave.eps_r_interior");
      if (w.contains("mu_r_interior")) c.wave.mu_r_interior = w["mu_r_interior"].get<double>();
      if (w.contains("direction"))
        c.wave.direction = parse_vec3(w["direction"], "wave.direction").normalized();
      if (w.contains("polarization"))
        c.wave.polarization = parse_cvec3(w["polarization"], "wave.polarization");
    }
    if (j.contains("response")) {
      const Json& r = j["response"];
      if (r.contains("type")) c.response_type = r["type"].get<std::string>();
      if (r.contains("beta")) c.response_beta = parse_complex(r["beta"], "response.beta");
      if (r.contains("c")) c.response_c = parse_complex(r["c"], "response.c");
      if (r.contains("a_const")) c.response_a_const = r["a_const"].get<double>();
    }
    if (j.contains("radiation")) {
      const Json& r = j["radiation"];
      if (r.contains("variant")) {
        std::string v = r["variant"].get<std::string>();
        if (v == "silver-mueller-1")
          c.radiation_variant = RadiationOperator::Variant::SilverMuller1;
        else if (v == "spectral-dtn")
          c.radiation_variant = RadiationOperator::Variant::SpectralDtN;
        else
          throw Error(ErrorCode::ConfigError, "radiation.variant must be silver-mueller-1|spectral-dtn");
      }
      if (r.contains("order")) c.radiation_order = r["order"].get<int>();
    }
    if (j.contains("deformation")) {
      const Json& d = j["deformation"];
      if (d.contains("builtin")) c.deformation.builtin = d["builtin"].get<std::string>();
      if (d.contains("amplitude")) c.deformation.amplitude = d["amplitude"].get<double>();
      if (d.contains("seed")) c.deformation.seed = d["seed"].get<unsigned>();
      if (d.contains("r0")) c.deformation.r0 = d["r0"].get<double>();
      if (d.contains("width")) c.deformation.width = d["width"].get<double>();
    }
    if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
    if (j.contains("fixed_point")) {
      const Json& f = j["fixed_point"];
      if (f.contains("max_iters")) c.fixed_point.max_iters = f["max_iters"].get<int>();
      if (f.contains("abs_tol")) c.fixed_point.abs_tol = f["abs_tol"].get<double>();
      if (f.contains("rel_tol")) c.fixed_point.rel_tol = f["rel_tol"].get<double>();
      if (f.contains("damping")) c.fixed_point.damping = f["damping"].get<double>();
    }
    if (j.contains("output") && j["output"].contains("dump_system"))
      c.output.dump_system = j["output"]["dump_system"].get<bool>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config parse: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config json: ") + e.what());
  }
  return parse_config(j);
}

DeformationField make_deformation(const DeformationConfig& d, unsigned seed) {
  if (d.builtin == "radial-bump") return make_radial_bump(d.amplitude, d.r0, d.width);
  if (d.builtin == "tangential-rotation")
    return make_tangential_rotation(d.amplitude, d.r0, d.width);
  if (d.builtin == "random-smooth")
    return make_random_smooth(d.amplitude, d.r0, d.width, d.seed + seed);
  throw Error(ErrorCode::ConfigError, "unknown deformation builtin " + d.builtin);
}

std::shared_ptr<const BoundaryResponse> make_response(const RunConfig& cfg,
                                                      const AnalyticSurface& surface) {
  if (cfg.response_type == "zero") return std::make_shared<ZeroResponse>();
  if (cfg.response_type == "linear")
    return std::make_shared<LinearResponse>(cfg.response_c, surface);
  return std::make_shared<SaturatingResponse>(cfg.response_beta, cfg.response_a_const, surface);
}

std::unique_ptr<Workspace> make_workspace(const RunConfig& cfg) {
  auto ws = std::make_unique<Workspace>();
  if (!cfg.mesh.file.empty()) {
    ws->mesh = read_mesh_file(cfg.mesh.file);
  } else if (cfg.mesh.builtin == "shell") {
    ws->mesh = build_shell_mesh(cfg.mesh.inner_radius, cfg.mesh.outer_radius, cfg.mesh.refinement);
  } else if (cfg.mesh.builtin == "ball") {
    ws->mesh = build_ball_mesh(cfg.mesh.inner_radius, cfg.mesh.outer_radius, cfg.mesh.refinement);
  } else if (cfg.mesh.builtin == "cube_hole") {
    ws->mesh =
        build_cube_hole_mesh(cfg.mesh.inner_radius, cfg.mesh.half_width, cfg.mesh.refinement);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown mesh builtin " + cfg.mesh.builtin);
  }
  ws->mesh.validate();
  ws->space = std::make_unique<EdgeSpace>(ws->mesh);
  ws->obstacle = AnalyticSurface::sphere(Vec3::Zero(), cfg.mesh.inner_radius);
  RadiationOperator rad;
  rad.variant = cfg.radiation_variant;
  rad.order = cfg.radiation_order;
  rad.radius = cfg.mesh.outer_radius;
  ws->setup = make_setup(*ws->space, cfg.problem, cfg.wave, rad, make_response(cfg, ws->obstacle));
  ws->deformation = make_deformation(cfg.deformation, cfg.seed);
  set_assembly_threads(cfg.threads);
  return ws;
}

}  // namespace maxshape
