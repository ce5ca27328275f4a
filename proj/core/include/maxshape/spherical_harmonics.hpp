#pragma once

#include <vector>

#include "maxshape/common.hpp"
#include "maxshape/poly3.hpp"

namespace maxshape {

/// Real spherical harmonics of order 1..max_order realized as solid-harmonic
/// polynomials, plus the orthonormal tangential mode pair on a sphere of
/// radius R: U = R grad_Gamma Y / sqrt(l(l+1)) and V = n x U. Evaluation is
/// scale-invariant (degree-0 homogeneous extension), so slightly-off-sphere
/// quadrature points are fine.
class RealSphericalHarmonics {
 public:
  explicit RealSphericalHarmonics(int max_order);

  int max_order() const { return max_order_; }
  int n_modes() const { return static_cast<int>(modes_.size()); }
  int mode_degree(int mode) const { return modes_[mode].l; }

  /// Y normalized so that the L2 norm over the radius-R sphere is 1.
  double eval(int mode, const Vec3& x, double R) const;
  /// Tangential gradient of the normalized Y (exactly tangential).
  Vec3 surface_gradient(int mode, const Vec3& x, double R) const;
  /// Orthonormal tangential modes.
  Vec3 mode_u(int mode, const Vec3& x, double R) const;
  Vec3 mode_v(int mode, const Vec3& x, double R) const;

 private:
  struct Mode {
    int l;
    Poly3 solid;  // degree-l harmonic polynomial, orthonormal on the unit sphere
  };
  int max_order_;
  std::vector<Mode> modes_;
};

/// Riccati-Hankel logarithmic derivative of the second kind,
/// z_l(t) = (t h2_l(t))' / (t h2_l(t)); tends to -i as t -> infinity.
cplx riccati_hankel2_ratio(int l, double t);

}  // namespace maxshape
