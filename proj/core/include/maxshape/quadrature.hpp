#pragma once

#include <array>

#include "maxshape/common.hpp"
#include "maxshape/mesh.hpp"

namespace maxshape {

/// Degree-2 rules shared by every form in the project so that discrete
/// adjoint identities hold exactly: 4 points per tet, 3 per triangle.

struct TetQuadPoint {
  std::array<double, 4> bary;
  double w;  // barycentric weight, sums to 1 over the rule

  Vec3 point(const Mesh& mesh, Index tet) const {
    Vec3 p = Vec3::Zero();
    for (int i = 0; i < 4; ++i) p += bary[i] * mesh.tet_vertex(tet, i);
    return p;
  }
};

inline const std::array<TetQuadPoint, 4>& tet_rule() {
  static const double a = 0.5854101966249685;
  static const double b = 0.1381966011250105;
  static const std::array<TetQuadPoint, 4> rule = {{
      {{a, b, b, b}, 0.25},
      {{b, a, b, b}, 0.25},
      {{b, b, a, b}, 0.25},
      {{b, b, b, a}, 0.25},
  }};
  return rule;
}

struct TriQuadPoint {
  std::array<double, 3> bary;
  double w;

  Vec3 point(const Vec3& p0, const Vec3& p1, const Vec3& p2) const {
    return bary[0] * p0 + bary[1] * p1 + bary[2] * p2;
  }
  Vec3 point(const Mesh& mesh, const SurfaceTri& tri) const {
    return point(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]);
  }
};

inline const std::array<TriQuadPoint, 3>& tri_rule() {
  static const std::array<TriQuadPoint, 3> rule = {{
      {{0.5, 0.5, 0.0}, 1.0 / 3.0},
      {{0.0, 0.5, 0.5}, 1.0 / 3.0},
      {{0.5, 0.0, 0.5}, 1.0 / 3.0},
  }};
  return rule;
}

/// Two-point Gauss rule on (0,1), used for all edge-DoF interpolation.
inline const std::array<std::pair<double, double>, 2>& edge_rule() {
  static const double d = 0.28867513459481287;  // 1/(2 sqrt 3)
  static const std::array<std::pair<double, double>, 2> rule = {{
      {0.5 - d, 0.5},
      {0.5 + d, 0.5},
  }};
  return rule;
}

/// Flattened quadrature of a tagged surface; weights carry the area factor,
/// so integrals are plain weighted sums over `points`.
struct SurfacePoint {
  Vec3 x;
  double w;
  Vec3 n;
  Index tri;
  Index tet_plus;
  Index tet_minus;
};

struct SurfaceQuadrature {
  SurfaceTag tag = SurfaceTag::Gamma;
  std::vector<SurfacePoint> points;
  double area = 0.0;
};

inline SurfaceQuadrature make_surface_quadrature(const Mesh& mesh, SurfaceTag tag) {
  SurfaceQuadrature q;
  q.tag = tag;
  const auto& tris = mesh.surface(tag);
  q.points.reserve(tris.size() * 3);
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& tri = tris[f];
    for (const auto& r : tri_rule()) {
      SurfacePoint p;
      p.x = r.point(mesh, tri);
      p.w = r.w * tri.area;
      p.n = tri.normal;
      p.tri = static_cast<Index>(f);
      p.tet_plus = tri.tet_plus;
      p.tet_minus = tri.tet_minus;
      q.points.push_back(p);
    }
    q.area += tri.area;
  }
  return q;
}

}  // namespace maxshape
