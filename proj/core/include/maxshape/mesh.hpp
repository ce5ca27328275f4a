#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxshape/common.hpp"

namespace maxshape {

enum class SurfaceTag { Gamma, GammaR, Interface };

const char* surface_tag_name(SurfaceTag tag);

/// Boundary or interface triangle. `normal` follows the jump convention:
/// on Gamma and Interface it points from the obstacle D into the exterior,
/// on GammaR it points out of the computational domain. `tet_plus` is the
/// adjacent tet on the exterior-of-D side, `tet_minus` the one inside D
/// (-1 when absent).
struct SurfaceTri {
  std::array<Index, 3> v;
  Vec3 normal;
  double area = 0.0;
  Index tet_plus = -1;
  Index tet_minus = -1;
};

/// Affine geometry of one tetrahedron: volume and barycentric gradients.
struct TetGeom {
  double volume = 0.0;
  std::array<Vec3, 4> grad_lambda;

  static TetGeom from(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3);
};

class Mesh {
 public:
  static constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  std::vector<Vec3> vertices;
  std::vector<std::array<Index, 4>> tets;
  std::vector<int> tet_region;  // 0 exterior, 1 inside the obstacle D

  // Globally oriented edges: lower vertex index first.
  std::vector<std::array<Index, 2>> edges;
  std::vector<std::array<Index, 6>> tet_edges;

  std::vector<SurfaceTri> gamma;
  std::vector<SurfaceTri> gamma_r;
  std::vector<SurfaceTri> interface;

  const std::vector<SurfaceTri>& surface(SurfaceTag tag) const;
  std::vector<SurfaceTri>& surface(SurfaceTag tag);

  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_tets() const { return static_cast<Index>(tets.size()); }
  Index n_edges() const { return static_cast<Index>(edges.size()); }

  Vec3 tet_vertex(Index t, int local) const { return vertices[tets[t][local]]; }
  Vec3 tet_centroid(Index t) const;
  TetGeom tet_geom(Index t) const;
  double tet_volume(Index t) const { return tet_geom(t).volume; }
  double total_volume() const;
  double mean_edge_length() const;

  /// Builds edge tables, orients surface normals, fills adjacency. Must be
  /// called after vertices/tets/surface triangles are set.
  void finalize();

  /// Checks the structural invariants (unit normals, tags partition tagged
  /// faces, surface triangles are tet faces). Throws on violation.
  void validate() const;
};

/// Spherical shell r_in <= |x| <= r_out; Gamma at r_in, GammaR at r_out.
Mesh build_shell_mesh(double r_in, double r_out, int level);

/// Ball of radius r_out with a conforming interior interface sphere at
/// r_interface; tets inside the interface carry region 1.
Mesh build_ball_mesh(double r_interface, double r_out, int level);

/// Cube [-half_width, half_width]^3 with a spherical hole of radius r_in;
/// Gamma on the sphere, GammaR on the cube surface.
Mesh build_cube_hole_mesh(double r_in, double half_width, int level);

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

/// Uniform-grid point locator for sampling fields at arbitrary points.
class TetLocator {
 public:
  explicit TetLocator(const Mesh& mesh, int cells_per_axis = 24);

  /// Returns the tet containing x (barycentric tolerance `tol`), or -1.
  Index locate(const Vec3& x, double tol = 1e-10) const;

 private:
  const Mesh& mesh_;
  Vec3 lo_, hi_;
  int n_;
  std::vector<std::vector<Index>> cells_;

  int cell_of(double v, double lo, double hi) const;
};

}  // namespace maxshape
