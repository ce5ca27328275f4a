#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "maxshape/analytic_surface.hpp"
#include "maxshape/common.hpp"

namespace maxshape {

/// Pointwise nonlinear boundary response g(x, z) with its R-linear
/// directional derivative in z, its spatial gradient, and the mixed
/// derivative. Built-in responses extend their spatial dependence constantly
/// along the normals of `surface()` and are defined on the tubular
/// neighborhood dist(x, Gamma) < tube_radius().
class BoundaryResponse {
 public:
  virtual ~BoundaryResponse() = default;

  virtual CVec3 eval(const Vec3& x, const CVec3& z) const = 0;
  /// g_z(x, z; w): R-linear in w.
  virtual CVec3 dz(const Vec3& x, const CVec3& z, const CVec3& w) const = 0;
  /// grad_x g(x, z) as a complex 3x3 matrix acting on a real direction h.
  virtual CMat3 grad_x(const Vec3& x, const CVec3& z) const = 0;
  /// g_xz(x, z; w) h: mixed derivative; default is a central difference of
  /// grad_x in the z direction.
  virtual CVec3 dxz(const Vec3& x, const CVec3& z, const CVec3& w, const Vec3& h) const;

  virtual double lipschitz_bound() const = 0;   // L_g
  virtual double derivative_bound() const = 0;  // C_g
  virtual bool is_zero() const { return false; }
  virtual bool pec_compatible() const { return false; }
  /// Growth envelopes psi_0, psi_1 of the admissibility assumptions; constant
  /// values, diagnostic metadata only.
  virtual double psi0() const { return 0.0; }
  virtual double psi1() const { return 0.0; }

  const AnalyticSurface* surface() const { return surface_.get(); }
  double tube_radius() const { return tube_radius_; }
  /// Throws OutsideTubularNeighborhood when x is too far from the surface.
  void check_in_tube(const Vec3& x) const;

 protected:
  void set_surface(const AnalyticSurface& s);

  std::shared_ptr<AnalyticSurface> surface_;
  double tube_radius_ = 1e300;
};

class ZeroResponse final : public BoundaryResponse {
 public:
  CVec3 eval(const Vec3&, const CVec3&) const override { return CVec3::Zero(); }
  CVec3 dz(const Vec3&, const CVec3&, const CVec3&) const override { return CVec3::Zero(); }
  CMat3 grad_x(const Vec3&, const CVec3&) const override { return CMat3::Zero(); }
  double lipschitz_bound() const override { return 0.0; }
  double derivative_bound() const override { return 0.0; }
  bool is_zero() const override { return true; }
  bool pec_compatible() const override { return true; }
};

/// g(x, z) = c P_T(x) z. C-linear in z for any complex coefficient c.
class LinearResponse final : public BoundaryResponse {
 public:
  LinearResponse(cplx c, const AnalyticSurface& surface);

  CVec3 eval(const Vec3& x, const CVec3& z) const override;
  CVec3 dz(const Vec3& x, const CVec3& z, const CVec3& w) const override;
  CMat3 grad_x(const Vec3& x, const CVec3& z) const override;
  double lipschitz_bound() const override { return std::abs(c_); }
  double derivative_bound() const override { return std::abs(c_); }
  bool pec_compatible() const override { return true; }
  cplx coefficient() const { return c_; }

 private:
  cplx c_;
};

/// Saturating response beta a P_T z / (1 + |P_T z|^2); the canonical
/// admissible nonlinearity with L_g <= |beta| sup|a|.
class SaturatingResponse final : public BoundaryResponse {
 public:
  SaturatingResponse(cplx beta, double a_const, const AnalyticSurface& surface);

  CVec3 eval(const Vec3& x, const CVec3& z) const override;
  CVec3 dz(const Vec3& x, const CVec3& z, const CVec3& w) const override;
  CMat3 grad_x(const Vec3& x, const CVec3& z) const override;
  double lipschitz_bound() const override { return std::abs(beta_) * std::abs(a_); }
  double derivative_bound() const override { return std::abs(beta_) * std::abs(a_); }
  bool pec_compatible() const override { return true; }
  double psi0() const override { return std::abs(beta_) * std::abs(a_); }
  cplx beta() const { return beta_; }

 private:
  /// Derivative of u -> u/(1+|u|^2) at u in the direction du.
  CVec3 core_derivative(const CVec3& u, const CVec3& du) const;

  cplx beta_;
  double a_;
};

/// Wraps a value-only response with central-difference derivatives
/// (step 1e-6 (1 + |z|)); for user-supplied nonlinearities without
/// analytic g_z.
class FdDerivativeResponse final : public BoundaryResponse {
 public:
  FdDerivativeResponse(std::function<CVec3(const Vec3&, const CVec3&)> g, double lipschitz,
                       const AnalyticSurface& surface);

  CVec3 eval(const Vec3& x, const CVec3& z) const override { return g_(x, z); }
  CVec3 dz(const Vec3& x, const CVec3& z, const CVec3& w) const override;
  CMat3 grad_x(const Vec3& x, const CVec3& z) const override;
  double lipschitz_bound() const override { return lipschitz_; }
  double derivative_bound() const override { return lipschitz_; }

 private:
  std::function<CVec3(const Vec3&, const CVec3&)> g_;
  double lipschitz_;
};

/// Max ratio |g(x,z1)-g(x,z2)| / |z1-z2| over the samples; throws
/// EmptySampleSet, and reports when the declared bound is exceeded.
struct LipschitzSample {
  Vec3 x;
  CVec3 z1;
  CVec3 z2;
};

double estimate_lipschitz(const BoundaryResponse& r, const std::vector<LipschitzSample>& samples);

}  // namespace maxshape
