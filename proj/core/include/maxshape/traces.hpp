#pragma once

#include <functional>
#include <vector>

#include "maxshape/common.hpp"
#include "maxshape/geometry_kit.hpp"
#include "maxshape/quadrature.hpp"

namespace maxshape {

/// gamma_T U = n x (U x n) = U - (U.n) n.
inline CVec3 tangential_component(const CVec3& U, const Vec3& n) {
  return U - bdot(n, U) * n.cast<cplx>();
}

/// gamma_t U = n x U.
inline CVec3 tangential_trace(const CVec3& U, const Vec3& n) { return cross(n, U); }

/// Transported tangential trace P_h J^-T gamma_T U.
inline CVec3 transported_trace(const CVec3& U, const Vec3& n, const SurfaceKit& kit) {
  CVec3 v = kit.JinvT.cast<cplx>() * tangential_component(U, n);
  return v - bdot(kit.n_tilde, v) * kit.n_tilde.cast<cplx>();
}

/// Pointwise first variation of the transported trace for smooth fields:
/// delta_n x (U x n) + n x (U x delta_n) - n x (J_h^T U x n).
inline CVec3 trace_variation(const CVec3& U, const Vec3& n, const Vec3& delta_n, const Mat3& J_h) {
  CVec3 term1 = cross(delta_n, cross(U, n));
  CVec3 term2 = cross(n, cross(U, delta_n));
  CVec3 jtu = J_h.transpose().cast<cplx>() * U;
  CVec3 term3 = cross(n, cross(jtu, n));
  return term1 + term2 - term3;
}

/// Exact t-derivative of P_{th} J_{th}^-T gamma_T U at t = 0 with whatever
/// normal the quadrature carries; this is the variation the pulled-back forms
/// linearize, so the sensitivity assembly uses it instead of the smooth-field
/// representation above. delta_n here must be the algebraic -P_T(J_h^T n).
inline CVec3 transported_trace_variation(const CVec3& U, const Vec3& n, const Vec3& delta_n,
                                         const Mat3& J_h) {
  CVec3 uT = tangential_component(U, n);
  CVec3 v = J_h.transpose().cast<cplx>() * uT;
  CVec3 PTv = v - bdot(n, v) * n.cast<cplx>();
  return -bdot(delta_n, uT) * n.cast<cplx>() - PTv;
}

/// Complex tangential field stored at the quadrature points of a tagged
/// surface.
struct TangentialField {
  const SurfaceQuadrature* quad = nullptr;
  std::vector<CVec3> values;

  double l2_norm() const;
  /// max |v.n| over stored points (membership check for L_t^2).
  double max_normal_component() const;
};

TangentialField make_tangential_field(const SurfaceQuadrature& quad,
                                      const std::function<CVec3(const SurfacePoint&)>& f);

}  // namespace maxshape
