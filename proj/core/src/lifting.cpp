#include "maxshape/lifting.hpp"

#include <cmath>

#include "maxshape/errors.hpp"

namespace maxshape {

LiftingOperator::LiftingOperator(const EdgeSpace& space, SurfaceTag tag)
    : space_(&space), tag_(tag) {
  const Mesh& mesh = space.mesh();
  gram_ = assemble_hcurl_gram(space);

  const auto& mask = space.surface_edge_mask(tag);
  reduced_of_full_.assign(space.n_dofs(), -1);
  for (Index e = 0; e < space.n_dofs(); ++e) {
    if (!mask[e]) {
      reduced_of_full_[e] = static_cast<Index>(full_of_reduced_.size());
      full_of_reduced_.push_back(e);
    }
  }

  // Interior block of the gram matrix.
  std::vector<TripletR> trips;
  for (int k = 0; k < gram_.outerSize(); ++k)
    for (SpMatR::InnerIterator it(gram_, k); it; ++it) {
      Index r = reduced_of_full_[it.row()], c = reduced_of_full_[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  SpMatR Aii(full_of_reduced_.size(), full_of_reduced_.size());
  Aii.setFromTriplets(trips.begin(), trips.end());
  interior_ = std::make_shared<Eigen::SimplicialLDLT<SpMatR>>();
  interior_->compute(Aii);
  if (interior_->info() != Eigen::Success)
    throw Error(ErrorCode::SingularExtension, "lifting extension factorization failed");

  // Pick an adjacent tagged triangle per boundary edge.
  edge_tri_.assign(space.n_dofs(), -1);
  const auto& tris = mesh.surface(tag);
  for (std::size_t f = 0; f < tris.size(); ++f) {
    Index tet = tris[f].tet_plus >= 0 ? tris[f].tet_plus : tris[f].tet_minus;
    for (int le = 0; le < 6; ++le) {
      Index e = mesh.tet_edges[tet][le];
      if (mask[e] && edge_tri_[e] < 0) {
        // Only claim the edge if it is actually an edge of this triangle.
        Index a = mesh.edges[e][0], b = mesh.edges[e][1];
        int hits = 0;
        for (Index v : tris[f].v) hits += (v == a || v == b);
        if (hits == 2) edge_tri_[e] = static_cast<Index>(f);
      }
    }
  }
}

const std::vector<Index>& LiftingOperator::boundary_edges() const {
  return space_->surface_edges(tag_);
}

CVecX LiftingOperator::boundary_dofs(const GammaTData& data) const {
  Diffeomorphism id{};
  id.t = 0.0;
  id.field.value = [](const Vec3&) { return Vec3::Zero(); };
  id.field.jacobian = [](const Vec3&) { return Mat3::Zero(); };
  return boundary_dofs_deformed(data, id);
}

CVecX LiftingOperator::boundary_dofs_deformed(const GammaTData& data,
                                              const Diffeomorphism& phi) const {
  const Mesh& mesh = space_->mesh();
  const auto& normals = space_->surface_edge_normals(tag_);
  CVecX dofs = CVecX::Zero(space_->n_dofs());
  for (Index e : boundary_edges()) {
    const Vec3 a = mesh.vertices[mesh.edges[e][0]];
    const Vec3 b = mesh.vertices[mesh.edges[e][1]];
    double len = space_->edge_length(e);
    Vec3 n = normals[e];
    cplx acc = 0.0;
    for (const auto& [s, w] : edge_rule()) {
      Vec3 x = a + s * (b - a);
      Mat3 J = phi.jac(x);
      Vec3 jt = J * (b - a) / len;  // deformed tangent (unnormalized by design)
      Vec3 nt = (J.inverse().transpose() * n).normalized();
      CVec3 g = data(phi.phi(x), nt);
      acc += w * bdot(jt, cross(g, nt));  // (g x n_tilde) . (J t)
    }
    dofs[e] = acc;
  }
  return dofs;
}

CVecX LiftingOperator::extend(const CVecX& boundary) const {
  // Solve G_II w_I = -G_IB w_B for the real and imaginary parts.
  Index ni = static_cast<Index>(full_of_reduced_.size());
  CVecX rhs = CVecX::Zero(ni);
  for (int k = 0; k < gram_.outerSize(); ++k)
    for (SpMatR::InnerIterator it(gram_, k); it; ++it) {
      Index r = reduced_of_full_[it.row()];
      if (r >= 0 && reduced_of_full_[it.col()] < 0)
        rhs[r] -= it.value() * boundary[it.col()];
    }
  VecX xr = interior_->solve(rhs.real());
  VecX xi = interior_->solve(rhs.imag());
  if (interior_->info() != Eigen::Success)
    throw Error(ErrorCode::SingularExtension, "lifting extension solve failed");
  CVecX w = boundary;
  for (Index r = 0; r < ni; ++r) w[full_of_reduced_[r]] = cplx(xr[r], xi[r]);
  return w;
}

CVecX LiftingOperator::lift(const TangentialField& data) const {
  const Mesh& mesh = space_->mesh();
  const auto& tris = mesh.surface(tag_);
  // Linear reconstruction from the three mid-edge quadrature values.
  auto eval_in_tri = [&](Index f, const Vec3& x) -> CVec3 {
    const auto& tri = tris[f];
    const Vec3 p0 = mesh.vertices[tri.v[0]], p1 = mesh.vertices[tri.v[1]],
               p2 = mesh.vertices[tri.v[2]];
    // Barycentric coordinates in the triangle plane.
    Vec3 v0 = p1 - p0, v1 = p2 - p0, vp = x - p0;
    double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    double dp0 = vp.dot(v0), dp1 = vp.dot(v1);
    double det = d00 * d11 - d01 * d01;
    double l1 = (d11 * dp0 - d01 * dp1) / det;
    double l2 = (d00 * dp1 - d01 * dp0) / det;
    double l0 = 1.0 - l1 - l2;
    // Rule order: m01, m12, m02 (see tri_rule()).
    const CVec3& f01 = data.values[3 * f + 0];
    const CVec3& f12 = data.values[3 * f + 1];
    const CVec3& f02 = data.values[3 * f + 2];
    return f01 * (l0 + l1 - l2) + f12 * (-l0 + l1 + l2) + f02 * (l0 - l1 + l2);
  };
  CVecX dofs = CVecX::Zero(space_->n_dofs());
  const auto& normals = space_->surface_edge_normals(tag_);
  for (Index e : boundary_edges()) {
    const Vec3 a = mesh.vertices[mesh.edges[e][0]];
    const Vec3 b = mesh.vertices[mesh.edges[e][1]];
    double len = space_->edge_length(e);
    Vec3 t = (b - a) / len;
    Vec3 n = normals[e];
    Index f = edge_tri_[e];
    cplx acc = 0.0;
    for (const auto& [s, w] : edge_rule()) {
      Vec3 x = a + s * (b - a);
      CVec3 g = eval_in_tri(f, x);
      acc += w * bdot(t, cross(g, n));
    }
    dofs[e] = acc;
  }
  return extend(dofs);
}

CVecX LiftingOperator::boundary_dofs_response(const CVecX& U, const BoundaryResponse& g,
                                              const Diffeomorphism* phi) const {
  const Mesh& mesh = space_->mesh();
  const auto& tris = mesh.surface(tag_);
  const auto& normals = space_->surface_edge_normals(tag_);
  CVecX dofs = CVecX::Zero(space_->n_dofs());
  for (Index e : boundary_edges()) {
    const Vec3 a = mesh.vertices[mesh.edges[e][0]];
    const Vec3 b = mesh.vertices[mesh.edges[e][1]];
    double len = space_->edge_length(e);
    Vec3 n = normals[e];
    const SurfaceTri& tri = tris[edge_tri_[e]];
    Index tet = tri.tet_plus >= 0 ? tri.tet_plus : tri.tet_minus;
    cplx acc = 0.0;
    for (const auto& [s, w] : edge_rule()) {
      Vec3 x = a + s * (b - a);
      CVec3 uval = space_->eval(U, tet, x);
      CVec3 zeta = tangential_component(uval, n);
      if (!phi || phi->is_identity()) {
        CVec3 gval = g.eval(x, zeta);
        acc += w * bdot((b - a) / len, cross(gval, n));
      } else {
        Mat3 J = phi->jac(x);
        Mat3 JinvT = J.inverse().transpose();
        Vec3 nt = (JinvT * n).normalized();
        CVec3 zeta_h = JinvT.cast<cplx>() * zeta;
        zeta_h -= bdot(nt, zeta_h) * nt.cast<cplx>();  // P_h J^-T gamma_T U
        CVec3 gval = g.eval(phi->phi(x), zeta_h);
        acc += w * bdot(J * (b - a) / len, cross(gval, nt));
      }
    }
    dofs[e] = acc;
  }
  return dofs;
}

void LiftingOperator::append_linear_constraint_rows(std::vector<Triplet>& trips, cplx c) const {
  const Mesh& mesh = space_->mesh();
  const auto& tris = mesh.surface(tag_);
  const auto& normals = space_->surface_edge_normals(tag_);
  for (Index e : boundary_edges()) {
    trips.emplace_back(e, e, cplx(1.0, 0.0));
    const Vec3 a = mesh.vertices[mesh.edges[e][0]];
    const Vec3 b = mesh.vertices[mesh.edges[e][1]];
    double len = space_->edge_length(e);
    Vec3 t = (b - a) / len;
    Vec3 n = normals[e];
    const SurfaceTri& tri = tris[edge_tri_[e]];
    Index tet = tri.tet_plus >= 0 ? tri.tet_plus : tri.tet_minus;
    Mat3 P = tangential_projector(n);
    for (const auto& [s, w] : edge_rule()) {
      Vec3 x = a + s * (b - a);
      for (int le = 0; le < 6; ++le) {
        Vec3 zeta = P * space_->basis_value(tet, le, x);
        double coef = w * t.dot(zeta.cross(n));
        if (coef != 0.0) trips.emplace_back(e, space_->global_edge(tet, le), -c * coef);
      }
    }
  }
}

double LiftingOperator::energy_norm(const CVecX& w) const {
  cplx v = w.adjoint() * (gram_ * w);
  return std::sqrt(std::max(0.0, v.real()));
}

}  // namespace maxshape
