#include "maxshape/edge_space.hpp"

#include <algorithm>
#include <set>

namespace maxshape {

EdgeSpace::EdgeSpace(const Mesh& mesh) : mesh_(&mesh) {
  Index nt = mesh.n_tets();
  geom_.reserve(nt);
  bary_offset_.reserve(nt);
  ordered_local_.reserve(nt);
  for (Index t = 0; t < nt; ++t) {
    geom_.push_back(mesh.tet_geom(t));
    const auto& g = geom_.back();
    std::array<double, 4> d;
    for (int i = 0; i < 4; ++i)
      d[i] = (i == 0 ? 1.0 : 0.0) - g.grad_lambda[i].dot(mesh.tet_vertex(t, 0));
    bary_offset_.push_back(d);
    std::array<std::array<int, 2>, 6> ord;
    for (int le = 0; le < 6; ++le) {
      int la = Mesh::kTetEdges[le][0], lb = Mesh::kTetEdges[le][1];
      if (mesh.tets[t][la] > mesh.tets[t][lb]) std::swap(la, lb);
      ord[le] = {la, lb};
    }
    ordered_local_.push_back(ord);
  }
  edge_length_.resize(mesh.n_edges());
  for (Index e = 0; e < mesh.n_edges(); ++e)
    edge_length_[e] = (mesh.vertices[mesh.edges[e][0]] - mesh.vertices[mesh.edges[e][1]]).norm();

  auto build_surf = [&](SurfaceTag tag, SurfaceEdgeData& out) {
    std::set<Index> ids;
    std::vector<Vec3> acc(mesh.n_edges(), Vec3::Zero());
    for (const auto& tri : mesh.surface(tag)) {
      for (int e = 0; e < 3; ++e) {
        Index a = tri.v[e], b = tri.v[(e + 1) % 3];
        // Find the edge id by scanning the adjacent tet's edges.
        Index tet = tri.tet_plus >= 0 ? tri.tet_plus : tri.tet_minus;
        for (int le = 0; le < 6; ++le) {
          Index ga = mesh.tets[tet][Mesh::kTetEdges[le][0]];
          Index gb = mesh.tets[tet][Mesh::kTetEdges[le][1]];
          if ((ga == a && gb == b) || (ga == b && gb == a)) {
            Index id = mesh.tet_edges[tet][le];
            ids.insert(id);
            acc[id] += tri.normal;
          }
        }
      }
    }
    out.edges.assign(ids.begin(), ids.end());
    out.mask.assign(mesh.n_edges(), 0);
    out.normals.assign(mesh.n_edges(), Vec3::Zero());
    for (Index id : out.edges) {
      out.mask[id] = 1;
      double nn = acc[id].norm();
      out.normals[id] = nn > 1e-14 ? Vec3(acc[id] / nn) : Vec3::Zero();
    }
  };
  build_surf(SurfaceTag::Gamma, gamma_);
  build_surf(SurfaceTag::GammaR, gamma_r_);
  build_surf(SurfaceTag::Interface, interface_);
}

std::array<double, 4> EdgeSpace::barycentric(Index tet, const Vec3& x) const {
  const auto& g = geom_[tet];
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[i] = g.grad_lambda[i].dot(x) + bary_offset_[tet][i];
  return l;
}

Vec3 EdgeSpace::basis_value(Index tet, int local_edge, const Vec3& x) const {
  const auto& ord = ordered_local_[tet][local_edge];
  const auto& g = geom_[tet];
  auto l = barycentric(tet, x);
  double len = edge_length_[global_edge(tet, local_edge)];
  return len * (l[ord[0]] * g.grad_lambda[ord[1]] - l[ord[1]] * g.grad_lambda[ord[0]]);
}

Vec3 EdgeSpace::basis_curl(Index tet, int local_edge) const {
  const auto& ord = ordered_local_[tet][local_edge];
  const auto& g = geom_[tet];
  double len = edge_length_[global_edge(tet, local_edge)];
  return 2.0 * len * g.grad_lambda[ord[0]].cross(g.grad_lambda[ord[1]]);
}

CVec3 EdgeSpace::eval(const CVecX& coef, Index tet, const Vec3& x) const {
  CVec3 v = CVec3::Zero();
  for (int le = 0; le < 6; ++le)
    v += coef[global_edge(tet, le)] * basis_value(tet, le, x).cast<cplx>();
  return v;
}

CVec3 EdgeSpace::eval_curl(const CVecX& coef, Index tet) const {
  CVec3 v = CVec3::Zero();
  for (int le = 0; le < 6; ++le)
    v += coef[global_edge(tet, le)] * basis_curl(tet, le).cast<cplx>();
  return v;
}

cplx EdgeSpace::interpolate_edge(Index edge, const std::function<CVec3(const Vec3&)>& f) const {
  const Vec3 a = mesh_->vertices[mesh_->edges[edge][0]];
  const Vec3 b = mesh_->vertices[mesh_->edges[edge][1]];
  Vec3 tang = (b - a).normalized();
  cplx acc = 0.0;
  for (const auto& [s, w] : edge_rule()) acc += w * bdot(tang, f(a + s * (b - a)));
  return acc;  // mean tangential component: (1/|e|) int f.t dl
}

CVecX EdgeSpace::interpolate(const std::function<CVec3(const Vec3&)>& f) const {
  CVecX u(n_dofs());
  for (Index e = 0; e < n_dofs(); ++e) u[e] = interpolate_edge(e, f);
  return u;
}

const EdgeSpace::SurfaceEdgeData& EdgeSpace::surf_data(SurfaceTag tag) const {
  switch (tag) {
    case SurfaceTag::Gamma: return gamma_;
    case SurfaceTag::GammaR: return gamma_r_;
    case SurfaceTag::Interface: return interface_;
  }
  return gamma_;
}

const std::vector<Index>& EdgeSpace::surface_edges(SurfaceTag tag) const {
  return surf_data(tag).edges;
}
const std::vector<char>& EdgeSpace::surface_edge_mask(SurfaceTag tag) const {
  return surf_data(tag).mask;
}
const std::vector<Vec3>& EdgeSpace::surface_edge_normals(SurfaceTag tag) const {
  return surf_data(tag).normals;
}

}  // namespace maxshape
