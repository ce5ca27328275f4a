#include "maxshape/geometry_kit.hpp"

#include "maxshape/errors.hpp"

namespace maxshape {

BulkKit bulk_coefficients(const Mat3& J, double detJ) {
  if (detJ <= 0.0) throw Error(ErrorCode::NonInvertible, "det J <= 0 in bulk_coefficients");
  BulkKit k;
  k.M = J.transpose() * J / detJ;
  Mat3 Jinv = J.inverse();
  k.N = detJ * Jinv * Jinv.transpose();
  return k;
}

BulkVariation bulk_variation(const Mat3& J_h) {
  BulkVariation v;
  double divh = J_h.trace();
  v.Mdot = -divh * Mat3::Identity() + J_h + J_h.transpose();
  v.Ndot = -v.Mdot;
  return v;
}

namespace {

SurfaceKit base_kit(const Mat3& J, double detJ, const Vec3& n) {
  if (detJ <= 0.0) throw Error(ErrorCode::NonInvertible, "det J <= 0 in surface kit");
  SurfaceKit k;
  k.JinvT = J.inverse().transpose();
  Vec3 v = k.JinvT * n;
  double nv = v.norm();
  if (nv < 1e-12) throw Error(ErrorCode::DegenerateNormal, "J^-T n ~ 0");
  k.n_tilde = v / nv;
  k.P_h = tangential_projector(k.n_tilde);
  k.omega = detJ * nv;
  k.omega_dot = 0.0;
  k.delta_n = Vec3::Zero();
  return k;
}

}  // namespace

SurfaceKit surface_kit_algebraic(const Mat3& J, double detJ, const Vec3& n, const Mat3& J_h) {
  SurfaceKit k = base_kit(J, detJ, n);
  double divh = J_h.trace();
  k.omega_dot = divh - n.dot(J_h * n);
  k.delta_n = -tangential_projector(n) * (J_h.transpose() * n);
  return k;
}

SurfaceKit surface_kit(const Mat3& J, double detJ, const Vec3& n, const AnalyticSurface& surface,
                       const Vec3& x, const Vec3& h_value, const Mat3& J_h) {
  SurfaceKit k = base_kit(J, detJ, n);
  double h_n = h_value.dot(n);
  // Jacobian of the tangential part h_T = h - (h.n_ext) n_ext of the field,
  // with the normal extended off the surface.
  Mat3 Jn = surface.normal_jacobian(x);
  Vec3 grad_hn = J_h.transpose() * n + Jn.transpose() * h_value;
  Mat3 J_hT = J_h - n * grad_hn.transpose() - h_n * Jn;
  double div_gamma_hT = J_hT.trace() - n.dot(J_hT * n);
  k.omega_dot = div_gamma_hT + surface.additive_curvature(x) * h_n;
  k.delta_n = surface.delta_n(x, h_value, J_h);
  return k;
}

}  // namespace maxshape
