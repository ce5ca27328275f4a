#include "maxshape/surface_ops.hpp"

#include <Eigen/Dense>

#include "maxshape/errors.hpp"

namespace maxshape {

TriOps TriOps::from(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  TriOps t;
  Vec3 a = (p1 - p0).cross(p2 - p0);
  double two_area = a.norm();
  if (0.5 * two_area < 1e-14) throw Error(ErrorCode::DegenerateTriangle, "triangle area < 1e-14");
  t.area = 0.5 * two_area;
  t.n = a / two_area;
  // In-plane P1 gradients: grad lambda_i = n x e_i / (2A), e_i opposite edge.
  t.grad_lambda[0] = t.n.cross(p2 - p1) / two_area;
  t.grad_lambda[1] = t.n.cross(p0 - p2) / two_area;
  t.grad_lambda[2] = t.n.cross(p1 - p0) / two_area;
  return t;
}

Vec3 TriOps::surface_gradient(const std::array<double, 3>& psi) const {
  return psi[0] * grad_lambda[0] + psi[1] * grad_lambda[1] + psi[2] * grad_lambda[2];
}

CVec3 TriOps::surface_gradient(const std::array<cplx, 3>& psi) const {
  CVec3 g = CVec3::Zero();
  for (int i = 0; i < 3; ++i) g += psi[i] * grad_lambda[i].cast<cplx>();
  return g;
}

double TriOps::surface_divergence(const std::array<Vec3, 3>& v) const {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d += grad_lambda[i].dot(v[i]);
  return d;
}

Vec3 TriOps::surface_vector_curl(const std::array<double, 3>& psi) const {
  return n.cross(surface_gradient(psi));
}

CVec3 TriOps::surface_vector_curl(const std::array<cplx, 3>& psi) const {
  return cross(n, surface_gradient(psi));
}

double TriOps::surface_scalar_curl(const std::array<Vec3, 3>& v) const {
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < 3; ++i) c += grad_lambda[i].cross(v[i]);
  return c.dot(n);
}

Vec3 analytic_surface_gradient(const Vec3& n, const Vec3& grad_psi) {
  return grad_psi - grad_psi.dot(n) * n;
}

double analytic_surface_divergence(const Vec3& n, const Mat3& J_v) {
  return J_v.trace() - n.dot(J_v * n);
}

Vec3 analytic_surface_vector_curl(const Vec3& n, const Vec3& grad_psi) {
  return n.cross(analytic_surface_gradient(n, grad_psi));
}

double analytic_surface_scalar_curl(const Vec3& n, const Mat3& J_v) {
  Vec3 curl(J_v(2, 1) - J_v(1, 2), J_v(0, 2) - J_v(2, 0), J_v(1, 0) - J_v(0, 1));
  return curl.dot(n);
}

DiscreteSurfaceCurvature::DiscreteSurfaceCurvature(const Mesh& mesh, SurfaceTag tag)
    : mesh_(mesh), tris_(mesh.surface(tag)) {
  vertex_normals_.assign(mesh.vertices.size(), Vec3::Zero());
  has_normal_.assign(mesh.vertices.size(), 0);
  for (const auto& tri : tris_)
    for (Index v : tri.v) {
      vertex_normals_[v] += tri.area * tri.normal;
      has_normal_[v] = 1;
    }
  for (std::size_t v = 0; v < vertex_normals_.size(); ++v)
    if (has_normal_[v]) {
      double nn = vertex_normals_[v].norm();
      if (nn < 1e-14) throw Error(ErrorCode::MissingCurvature, "degenerate vertex normal");
      vertex_normals_[v] /= nn;
    }
}

Vec3 DiscreteSurfaceCurvature::vertex_normal(Index vertex) const {
  if (!has_normal_[vertex])
    throw Error(ErrorCode::MissingCurvature, "vertex is not on the tagged surface");
  return vertex_normals_[vertex];
}

Mat3 DiscreteSurfaceCurvature::shape_operator(std::size_t tri) const {
  const auto& f = tris_[tri];
  Vec3 n = f.normal;
  // Orthonormal tangent frame.
  Vec3 t1 = n.cross(std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).normalized();
  Vec3 t2 = n.cross(t1);
  // Least squares for the symmetric 2x2 Weingarten matrix from the three
  // edge differences of vertex positions and vertex normals.
  Eigen::Matrix<double, 6, 3> A;
  Eigen::Matrix<double, 6, 1> b;
  int row = 0;
  for (int e = 0; e < 3; ++e) {
    Index vi = f.v[e], vj = f.v[(e + 1) % 3];
    Vec3 dp = mesh_.vertices[vj] - mesh_.vertices[vi];
    Vec3 dn = vertex_normal(vj) - vertex_normal(vi);
    double u1 = t1.dot(dp), u2 = t2.dot(dp);
    A.row(row) << u1, u2, 0.0;
    b(row++) = t1.dot(dn);
    A.row(row) << 0.0, u1, u2;
    b(row++) = t2.dot(dn);
  }
  Eigen::Matrix3d AtA = A.transpose() * A;
  if (std::abs(AtA.determinant()) < 1e-18)
    throw Error(ErrorCode::MissingCurvature, "Weingarten fit is singular");
  Eigen::Vector3d s = AtA.ldlt().solve(A.transpose() * b);
  Mat3 S = s(0) * outer(t1, t1) + s(1) * (outer(t1, t2) + outer(t2, t1)) + s(2) * outer(t2, t2);
  return S;
}

}  // namespace maxshape
