#include "maxshape/response.hpp"

#include <cmath>

#include "maxshape/errors.hpp"

namespace maxshape {

void BoundaryResponse::set_surface(const AnalyticSurface& s) {
  surface_ = std::make_shared<AnalyticSurface>(s);
  // delta_tube = 0.2 * (min curvature radius); for spheres/ellipsoids that is
  // 0.2 * min semi-axis adjusted by the largest curvature. Conservative pick:
  double min_axis = surface_->radii().minCoeff();
  tube_radius_ = 0.2 * min_axis;
}

void BoundaryResponse::check_in_tube(const Vec3& x) const {
  if (!surface_) return;
  if (surface_->distance(x) >= tube_radius_)
    throw Error(ErrorCode::OutsideTubularNeighborhood,
                "x is outside the tubular neighborhood of Gamma");
}

CVec3 BoundaryResponse::dxz(const Vec3& x, const CVec3& z, const CVec3& w, const Vec3& h) const {
  double step = 1e-6 * (1.0 + z.norm()) / std::max(w.norm(), 1e-30);
  CMat3 gp = grad_x(x, z + step * w);
  CMat3 gm = grad_x(x, z - step * w);
  return (gp - gm) * h.cast<cplx>() / (2.0 * step);
}

// ---------------------------------------------------------------------------

LinearResponse::LinearResponse(cplx c, const AnalyticSurface& surface) : c_(c) {
  set_surface(surface);
}

CVec3 LinearResponse::eval(const Vec3& x, const CVec3& z) const {
  check_in_tube(x);
  Vec3 n = surface_->normal(x);
  return c_ * (z - bdot(n, z) * n.cast<cplx>());  // c P_T z
}

CVec3 LinearResponse::dz(const Vec3& x, const CVec3&, const CVec3& w) const {
  Vec3 n = surface_->normal(x);
  return c_ * (w - bdot(n, w) * n.cast<cplx>());
}

CMat3 LinearResponse::grad_x(const Vec3& x, const CVec3& z) const {
  // d/dh [P_T(x)] z = -(J_n h)(n.z) - n ((J_n h).z).
  Vec3 n = surface_->normal(x);
  Mat3 Jn = surface_->normal_jacobian(x);
  cplx nz = bdot(n, z);
  CMat3 G = -nz * Jn.cast<cplx>() - n.cast<cplx>() * (Jn.transpose().cast<cplx>() * z).transpose();
  return c_ * G;
}

// ---------------------------------------------------------------------------

SaturatingResponse::SaturatingResponse(cplx beta, double a_const, const AnalyticSurface& surface)
    : beta_(beta), a_(a_const) {
  set_surface(surface);
}

CVec3 SaturatingResponse::eval(const Vec3& x, const CVec3& z) const {
  check_in_tube(x);
  Vec3 n = surface_->normal(x);
  CVec3 u = z - bdot(n, z) * n.cast<cplx>();
  return beta_ * a_ * u / (1.0 + u.squaredNorm());
}

CVec3 SaturatingResponse::core_derivative(const CVec3& u, const CVec3& du) const {
  double denom = 1.0 + u.squaredNorm();
  double d_sq = 2.0 * re_inner(du, u);  // d|u|^2 in direction du
  return du / denom - u * (d_sq / (denom * denom));
}

CVec3 SaturatingResponse::dz(const Vec3& x, const CVec3& z, const CVec3& w) const {
  Vec3 n = surface_->normal(x);
  CVec3 u = z - bdot(n, z) * n.cast<cplx>();
  CVec3 du = w - bdot(n, w) * n.cast<cplx>();
  return beta_ * a_ * core_derivative(u, du);
}

CMat3 SaturatingResponse::grad_x(const Vec3& x, const CVec3& z) const {
  Vec3 n = surface_->normal(x);
  Mat3 Jn = surface_->normal_jacobian(x);
  CVec3 u = z - bdot(n, z) * n.cast<cplx>();
  CMat3 G;
  for (int c = 0; c < 3; ++c) {
    Vec3 h = Vec3::Unit(c);
    Vec3 jnh = Jn * h;
    CVec3 du = -bdot(n, z) * jnh.cast<cplx>() - bdot(jnh, z) * n.cast<cplx>();
    G.col(c) = beta_ * a_ * core_derivative(u, du);
  }
  return G;
}

// ---------------------------------------------------------------------------

FdDerivativeResponse::FdDerivativeResponse(std::function<CVec3(const Vec3&, const CVec3&)> g,
                                           double lipschitz, const AnalyticSurface& surface)
    : g_(std::move(g)), lipschitz_(lipschitz) {
  set_surface(surface);
}

CVec3 FdDerivativeResponse::dz(const Vec3& x, const CVec3& z, const CVec3& w) const {
  double wn = w.norm();
  if (wn < 1e-300) return CVec3::Zero();
  double step = 1e-6 * (1.0 + z.norm()) / wn;
  return (g_(x, z + step * w) - g_(x, z - step * w)) / (2.0 * step);
}

CMat3 FdDerivativeResponse::grad_x(const Vec3& x, const CVec3& z) const {
  CMat3 G;
  double step = 1e-6 * (1.0 + x.norm());
  for (int c = 0; c < 3; ++c) {
    Vec3 h = Vec3::Unit(c);
    G.col(c) = (g_(x + step * h, z) - g_(x - step * h, z)) / (2.0 * step);
  }
  return G;
}

// ---------------------------------------------------------------------------

double estimate_lipschitz(const BoundaryResponse& r, const std::vector<LipschitzSample>& samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "estimate_lipschitz needs samples");
  double m = 0.0;
  for (const auto& s : samples) {
    double dz = (s.z1 - s.z2).norm();
    if (dz < 1e-300) continue;
    m = std::max(m, (r.eval(s.x, s.z1) - r.eval(s.x, s.z2)).norm() / dz);
  }
  return m;
}

}  // namespace maxshape
