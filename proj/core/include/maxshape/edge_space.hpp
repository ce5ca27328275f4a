#pragma once

#include <array>
#include <functional>
#include <vector>

#include "maxshape/common.hpp"
#include "maxshape/mesh.hpp"
#include "maxshape/quadrature.hpp"

namespace maxshape {

/// Lowest-order curl-conforming edge-element space. Basis functions are
/// length-scaled Whitney forms N_e = |e| (lambda_a grad lambda_b -
/// lambda_b grad lambda_a) with a < b in global vertex order; the degree of
/// freedom is the mean tangential component along the edge, so
/// dof_e(N_e) = 1.
class EdgeSpace {
 public:
  explicit EdgeSpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  Index n_dofs() const { return mesh_->n_edges(); }

  Index global_edge(Index tet, int local_edge) const { return mesh_->tet_edges[tet][local_edge]; }
  double edge_length(Index edge) const { return edge_length_[edge]; }

  /// Barycentric coordinates of x in tet t (affine, no clipping).
  std::array<double, 4> barycentric(Index tet, const Vec3& x) const;

  Vec3 basis_value(Index tet, int local_edge, const Vec3& x) const;
  Vec3 basis_curl(Index tet, int local_edge) const;

  CVec3 eval(const CVecX& coef, Index tet, const Vec3& x) const;
  CVec3 eval_curl(const CVecX& coef, Index tet) const;

  /// Edge interpolation: dof_e = (1/|e|) \int_e f . t dl with the shared
  /// two-point Gauss rule.
  CVecX interpolate(const std::function<CVec3(const Vec3&)>& f) const;
  cplx interpolate_edge(Index edge, const std::function<CVec3(const Vec3&)>& f) const;

  /// Edges lying on a tagged surface (edges of its triangles).
  const std::vector<Index>& surface_edges(SurfaceTag tag) const;
  const std::vector<char>& surface_edge_mask(SurfaceTag tag) const;

  /// Averaged facet normal per surface edge (by edge id; zero off-surface).
  const std::vector<Vec3>& surface_edge_normals(SurfaceTag tag) const;

  const TetGeom& geom(Index tet) const { return geom_[tet]; }

 private:
  struct SurfaceEdgeData {
    std::vector<Index> edges;
    std::vector<char> mask;
    std::vector<Vec3> normals;
  };
  const SurfaceEdgeData& surf_data(SurfaceTag tag) const;

  const Mesh* mesh_;
  std::vector<TetGeom> geom_;
  std::vector<std::array<double, 4>> bary_offset_;  // lambda_i(x) = g_i.x + d_i
  std::vector<double> edge_length_;
  // Local edge endpoints reordered so the global index increases.
  std::vector<std::array<std::array<int, 2>, 6>> ordered_local_;
  SurfaceEdgeData gamma_, gamma_r_, interface_;
};

}  // namespace maxshape
