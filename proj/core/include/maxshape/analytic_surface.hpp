#pragma once

#include "maxshape/common.hpp"

namespace maxshape {

/// Closed analytic reference surface (sphere or axis-aligned ellipsoid) with
/// exact normal field, shape operator and additive curvature. The normal is
/// extended off the surface through the gradient of the level-set function,
/// so curvature data can be evaluated in a tubular neighborhood.
class AnalyticSurface {
 public:
  enum class Kind { Sphere, Ellipsoid };

  static AnalyticSurface sphere(const Vec3& center, double radius);
  static AnalyticSurface ellipsoid(const Vec3& center, const Vec3& radii);

  Kind kind() const { return kind_; }
  const Vec3& center() const { return center_; }
  const Vec3& radii() const { return radii_; }

  /// Radial projection onto the surface.
  Vec3 project(const Vec3& x) const;
  /// Signed-ish distance proxy: |x - project(x)|.
  double distance(const Vec3& x) const;

  Vec3 normal(const Vec3& x) const;
  /// Jacobian of the extended unit normal field.
  Mat3 normal_jacobian(const Vec3& x) const;
  /// Weingarten map as a 3x3 matrix P_T J_n P_T (symmetric, kills normals).
  Mat3 shape_operator(const Vec3& x) const;
  /// Additive curvature: trace of the shape operator, div_Gamma n = 2*kappa.
  double additive_curvature(const Vec3& x) const;

  /// Shape derivative of the unit normal, -grad_Gamma(h.n) + S h_T, for a
  /// deformation with value h and Jacobian J_h at x.
  Vec3 delta_n(const Vec3& x, const Vec3& h, const Mat3& J_h) const;

  /// Surface gradient of h.n for the same data (tangential vector).
  Vec3 surface_gradient_hn(const Vec3& x, const Vec3& h, const Mat3& J_h) const;

 private:
  AnalyticSurface(Kind kind, const Vec3& center, const Vec3& radii)
      : kind_(kind), center_(center), radii_(radii) {}

  Kind kind_;
  Vec3 center_;
  Vec3 radii_;
};

}  // namespace maxshape
