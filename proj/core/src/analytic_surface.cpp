#include "maxshape/analytic_surface.hpp"

#include <cmath>

#include "maxshape/errors.hpp"

namespace maxshape {

AnalyticSurface AnalyticSurface::sphere(const Vec3& center, double radius) {
  return AnalyticSurface(Kind::Sphere, center, Vec3::Constant(radius));
}

AnalyticSurface AnalyticSurface::ellipsoid(const Vec3& center, const Vec3& radii) {
  return AnalyticSurface(Kind::Ellipsoid, center, radii);
}

Vec3 AnalyticSurface::project(const Vec3& x) const {
  Vec3 d = x - center_;
  if (kind_ == Kind::Sphere) {
    double r = d.norm();
    if (r < 1e-14) throw Error(ErrorCode::DegenerateNormal, "cannot project the center");
    return center_ + radii_.x() / r * d;
  }
  // Radial (not closest-point) projection: scale d so the level set is 1.
  double s = std::sqrt(d.x() * d.x() / (radii_.x() * radii_.x()) +
                       d.y() * d.y() / (radii_.y() * radii_.y()) +
                       d.z() * d.z() / (radii_.z() * radii_.z()));
  if (s < 1e-14) throw Error(ErrorCode::DegenerateNormal, "cannot project the center");
  return center_ + d / s;
}

double AnalyticSurface::distance(const Vec3& x) const { return (x - project(x)).norm(); }

Vec3 AnalyticSurface::normal(const Vec3& x) const {
  Vec3 d = x - center_;
  if (kind_ == Kind::Sphere) {
    double r = d.norm();
    if (r < 1e-14) throw Error(ErrorCode::DegenerateNormal, "normal undefined at the center");
    return d / r;
  }
  Vec3 w(d.x() / (radii_.x() * radii_.x()), d.y() / (radii_.y() * radii_.y()),
         d.z() / (radii_.z() * radii_.z()));
  double nw = w.norm();
  if (nw < 1e-14) throw Error(ErrorCode::DegenerateNormal, "normal undefined at the center");
  return w / nw;
}

Mat3 AnalyticSurface::normal_jacobian(const Vec3& x) const {
  Vec3 d = x - center_;
  if (kind_ == Kind::Sphere) {
    double r = d.norm();
    Vec3 n = d / r;
    return tangential_projector(n) / r;
  }
  Mat3 D = Vec3(1.0 / (radii_.x() * radii_.x()), 1.0 / (radii_.y() * radii_.y()),
                1.0 / (radii_.z() * radii_.z()))
               .asDiagonal();
  Vec3 w = D * d;
  double nw = w.norm();
  Vec3 n = w / nw;
  return tangential_projector(n) * D / nw;
}

Mat3 AnalyticSurface::shape_operator(const Vec3& x) const {
  Vec3 n = normal(x);
  Mat3 P = tangential_projector(n);
  return P * normal_jacobian(x) * P;
}

double AnalyticSurface::additive_curvature(const Vec3& x) const {
  return shape_operator(x).trace();
}

Vec3 AnalyticSurface::surface_gradient_hn(const Vec3& x, const Vec3& h, const Mat3& J_h) const {
  Vec3 n = normal(x);
  Mat3 P = tangential_projector(n);
  // grad(h . n_ext) = J_h^T n + J_n^T h, projected to the tangent plane.
  return P * (J_h.transpose() * n + normal_jacobian(x).transpose() * h);
}

Vec3 AnalyticSurface::delta_n(const Vec3& x, const Vec3& h, const Mat3& J_h) const {
  Vec3 n = normal(x);
  Vec3 h_t = tangential_projector(n) * h;
  return -surface_gradient_hn(x, h, J_h) + shape_operator(x) * h_t;
}

}  // namespace maxshape
