#pragma once

#include <array>
#include <vector>

#include "maxshape/common.hpp"
#include "maxshape/mesh.hpp"

namespace maxshape {

/// Piecewise-linear surface differential operators on a triangle with nodal
/// data. All results are constant per triangle.
struct TriOps {
  std::array<Vec3, 3> grad_lambda;  // in-plane P1 shape gradients
  Vec3 n;
  double area;

  static TriOps from(const Vec3& p0, const Vec3& p1, const Vec3& p2);

  Vec3 surface_gradient(const std::array<double, 3>& psi) const;
  CVec3 surface_gradient(const std::array<cplx, 3>& psi) const;
  double surface_divergence(const std::array<Vec3, 3>& v) const;
  Vec3 surface_vector_curl(const std::array<double, 3>& psi) const;  // n x grad_G psi
  CVec3 surface_vector_curl(const std::array<cplx, 3>& psi) const;
  double surface_scalar_curl(const std::array<Vec3, 3>& v) const;  // (curl v~).n
};

// Analytic counterparts: the caller supplies the extension's pointwise data.
Vec3 analytic_surface_gradient(const Vec3& n, const Vec3& grad_psi);
double analytic_surface_divergence(const Vec3& n, const Mat3& J_v);
Vec3 analytic_surface_vector_curl(const Vec3& n, const Vec3& grad_psi);
double analytic_surface_scalar_curl(const Vec3& n, const Mat3& J_v);

/// Vertex-averaged normals plus a per-triangle least-squares Weingarten fit
/// for tagged discrete surfaces without an analytic description.
class DiscreteSurfaceCurvature {
 public:
  DiscreteSurfaceCurvature(const Mesh& mesh, SurfaceTag tag);

  Vec3 vertex_normal(Index vertex) const;
  /// 3x3 shape operator of triangle `tri` (index into the tag's list).
  Mat3 shape_operator(std::size_t tri) const;
  double additive_curvature(std::size_t tri) const { return shape_operator(tri).trace(); }

 private:
  const Mesh& mesh_;
  const std::vector<SurfaceTri>& tris_;
  std::vector<Vec3> vertex_normals_;  // indexed by mesh vertex id (sparse use)
  std::vector<char> has_normal_;
};

/// Averages per-triangle values to surface vertices (arithmetic mean over the
/// adjacent tagged triangles); used to reconstruct P1 data from facet data.
template <typename T>
std::vector<T> average_to_vertices(const Mesh& mesh, SurfaceTag tag,
                                   const std::vector<T>& per_tri, const T& zero) {
  const auto& tris = mesh.surface(tag);
  std::vector<T> acc(mesh.vertices.size(), zero);
  std::vector<int> cnt(mesh.vertices.size(), 0);
  for (std::size_t f = 0; f < tris.size(); ++f)
    for (Index v : tris[f].v) {
      acc[v] += per_tri[f];
      cnt[v] += 1;
    }
  for (std::size_t v = 0; v < acc.size(); ++v)
    if (cnt[v] > 0) acc[v] = acc[v] * (1.0 / cnt[v]);
  return acc;
}

}  // namespace maxshape
