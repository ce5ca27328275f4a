#pragma once

#include <functional>

#include "maxshape/common.hpp"
#include "maxshape/deformation.hpp"
#include "maxshape/errors.hpp"

namespace maxshape {

/// Analytic (or semi-analytic) vector field with an evaluable curl, used by
/// the pullback machinery and the verification oracles.
struct VectorField {
  std::function<CVec3(const Vec3&)> value;
  std::function<CVec3(const Vec3&)> curl;
  std::function<bool(const Vec3&)> in_domain;  // optional

  CVec3 operator()(const Vec3& x) const { return value(x); }
};

/// Covariant Piola pullback E_hat(x) = J^T(x) E(phi(x)). The pulled-back curl
/// comes from the covariant transform: curl E_hat = det J J^-1 (curl E)(phi).
struct PulledBackField {
  VectorField source;
  Diffeomorphism map;

  CVec3 value(const Vec3& x) const {
    Vec3 y = map.phi(x);
    if (source.in_domain && !source.in_domain(y))
      throw Error(ErrorCode::EvaluationOutOfDomain, "phi(x) leaves the field domain");
    return map.jac(x).transpose() * source.value(y);
  }

  CVec3 curl(const Vec3& x) const {
    Vec3 y = map.phi(x);
    if (source.in_domain && !source.in_domain(y))
      throw Error(ErrorCode::EvaluationOutOfDomain, "phi(x) leaves the field domain");
    Mat3 J = map.jac(x);
    return J.determinant() * (J.inverse() * source.curl(y));
  }
};

inline PulledBackField piola_pullback(const VectorField& field, const Diffeomorphism& phi) {
  return PulledBackField{field, phi};
}

}  // namespace maxshape
