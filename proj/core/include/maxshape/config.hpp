#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"  // vendored nlohmann/json
#include "maxshape/deformation.hpp"
#include "maxshape/fixed_point.hpp"
#include "maxshape/mesh.hpp"

namespace maxshape {

using Json = nlohmann::json;

struct MeshConfig {
  std::string builtin = "shell";  // shell | ball | cube_hole, or empty with `file`
  std::string file;
  int refinement = 1;
  double inner_radius = 1.0;
  double outer_radius = 2.0;
  double half_width = 2.0;  // cube_hole only
};

struct DeformationConfig {
  std::string builtin = "radial-bump";  // radial-bump | tangential-rotation | random-smooth
  double amplitude = 0.1;
  unsigned seed = 1;
  double r0 = 1.0;
  double width = 0.45;
};

struct OutputConfig {
  bool dump_system = false;
};

/// One experiment: problem kind, mesh, wave data, response, radiation
/// variant, deformation and the t-grid of the sensitivity sweeps.
struct RunConfig {
  ProblemKind problem = ProblemKind::Nibc;
  MeshConfig mesh;
  WaveParameters wave;
  std::string response_type = "saturating";  // zero | linear | saturating
  cplx response_beta{0.05, 0.0};
  cplx response_c{0.05, 0.0};
  double response_a_const = 1.0;
  RadiationOperator::Variant radiation_variant = RadiationOperator::Variant::SilverMuller1;
  int radiation_order = 0;
  DeformationConfig deformation;
  std::vector<double> t_grid = {1e-1, 3e-2, 1e-2, 3e-3};
  FixedPointConfig fixed_point;
  OutputConfig output;
  unsigned seed = 0;
  int threads = 1;

  void validate() const;
};

RunConfig parse_config(const Json& j);
RunConfig load_config_file(const std::string& path);

/// Assembled runtime objects for one configuration.
struct Workspace {
  Mesh mesh;
  std::unique_ptr<EdgeSpace> space;
  AnalyticSurface obstacle;  // the Gamma / interface sphere
  ScatteringSetup setup;
  DeformationField deformation;

  Workspace() : obstacle(AnalyticSurface::sphere(Vec3::Zero(), 1.0)) {}
};

/// Builds mesh, edge space, response and setup from a config.
std::unique_ptr<Workspace> make_workspace(const RunConfig& cfg);

DeformationField make_deformation(const DeformationConfig& d, unsigned seed);

std::shared_ptr<const BoundaryResponse> make_response(const RunConfig& cfg,
                                                      const AnalyticSurface& surface);

}  // namespace maxshape
