#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "maxshape/analytic_surface.hpp"
#include "maxshape/common.hpp"
#include "maxshape/mesh.hpp"

namespace maxshape {

/// Compactly supported C^1 perturbation direction with an exact Jacobian.
/// Fields are analytic closures, not nodal vectors, so derivative checks do
/// not carry an extra discretization error.
struct DeformationField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> jacobian;
  /// h and J_h vanish for |x - support_center| >= support_radius.
  double support_radius = 0.0;
  Vec3 support_center = Vec3::Zero();
  std::string descriptor;
  /// Algebraic property: h(x) . x == 0 identically (tangential to every
  /// origin-centered sphere). The Hadamard extraction uses it to produce
  /// exact zeros instead of roundoff-sized normal components.
  bool sphere_tangential = false;
  /// Filled by deformation_sum: h = sum c_i h_i. Lets linear functionals of
  /// h (like h.n) be evaluated distributively, preserving exact zeros.
  std::vector<std::pair<double, std::shared_ptr<const DeformationField>>> summands;

  Vec3 operator()(const Vec3& x) const { return value(x); }
  double divergence(const Vec3& x) const { return jacobian(x).trace(); }
};

/// phi(x) = x + t h(x) with Jacobian Id + t J_h(x).
struct Diffeomorphism {
  DeformationField field;
  double t = 0.0;

  Vec3 phi(const Vec3& x) const { return x + t * field.value(x); }
  Mat3 jac(const Vec3& x) const { return Mat3::Identity() + t * field.jacobian(x); }
  double detj(const Vec3& x) const { return jac(x).determinant(); }
  bool is_identity() const { return t == 0.0; }
};

/// Validates admissibility over the mesh (t * max|J_h| < 0.5 on sampled
/// quadrature points, det J > 0 everywhere sampled, h == 0 near GammaR) and
/// returns the evaluable map. Throws NonInvertible or SupportViolation.
Diffeomorphism build_diffeomorphism(const DeformationField& h, double t, const Mesh& mesh);

/// Samples t_max * max|J_h| over the mesh quadrature points.
double sampled_jacobian_bound(const DeformationField& h, const Mesh& mesh);

// Built-in deformation directions. All use a C^2 radial cutoff vanishing at
// r0 +- width, so the support stays clear of GammaR by construction.

/// Radial bump with angular modulation: h = A chi(|x|) (1 + mod_z z/|x|) x/|x|.
DeformationField make_radial_bump(double amplitude, double r0, double width, double mod_z = 0.5);

/// Rigid-rotation-like tangential field: h = A chi(|x|) (axis x x).
/// Exactly tangential to every sphere |x| = const, so h.n = 0 on Gamma.
DeformationField make_tangential_rotation(double amplitude, double r0, double width,
                                          const Vec3& axis = Vec3(0, 0, 1));

/// Seeded degree-2 polynomial field under the same cutoff.
DeformationField make_random_smooth(double amplitude, double r0, double width, unsigned seed);

/// Normal and tangential parts of h with respect to the extended normal field
/// of `surface`: h_n-part = (h . n_ext) n_ext, h_T-part = h - h_n-part.
DeformationField normal_part(const DeformationField& h, const AnalyticSurface& surface);
DeformationField tangential_part(const DeformationField& h, const AnalyticSurface& surface);

/// Pointwise sum (for linearity checks).
DeformationField deformation_sum(const DeformationField& a, const DeformationField& b,
                                 double ca = 1.0, double cb = 1.0);

}  // namespace maxshape
