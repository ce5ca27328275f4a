#include "maxshape/deformation.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "maxshape/errors.hpp"
#include "maxshape/poly3.hpp"
#include "maxshape/quadrature.hpp"

namespace maxshape {

namespace {

// C^2 cutoff psi(s) = (1-s^2)^3 on |s|<1.
double cutoff(double s) {
  double u = 1.0 - s * s;
  return u > 0.0 ? u * u * u : 0.0;
}

double cutoff_d(double s) {
  double u = 1.0 - s * s;
  return u > 0.0 ? -6.0 * s * u * u : 0.0;
}

}  // namespace

double sampled_jacobian_bound(const DeformationField& h, const Mesh& mesh) {
  double m = 0.0;
  const auto& rule = tet_rule();
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      m = std::max(m, h.jacobian(x).operatorNorm());
    }
  }
  return m;
}

Diffeomorphism build_diffeomorphism(const DeformationField& h, double t, const Mesh& mesh) {
  // Support must exclude GammaR: sample the outer boundary quadrature points.
  for (const auto& tri : mesh.gamma_r) {
    for (int q = 0; q < 3; ++q) {
      Vec3 x = tri_rule()[q].point(mesh, tri);
      if (h.value(x).norm() > 1e-13 || h.jacobian(x).norm() > 1e-12)
        throw Error(ErrorCode::SupportViolation, "deformation does not vanish on GammaR");
    }
  }
  double jb = sampled_jacobian_bound(h, mesh);
  if (std::abs(t) * jb >= 0.5)
    throw Error(ErrorCode::NonInvertible,
                "inadmissible deformation: t*max|J_h| = " + std::to_string(std::abs(t) * jb));
  Diffeomorphism phi{h, t};
  const auto& rule = tet_rule();
  for (Index tt = 0; tt < mesh.n_tets(); ++tt)
    for (const auto& qp : rule)
      if (phi.detj(qp.point(mesh, tt)) <= 0.0)
        throw Error(ErrorCode::NonInvertible, "det J_phi <= 0 at a quadrature point");
  return phi;
}

DeformationField make_radial_bump(double amplitude, double r0, double width, double mod_z) {
  DeformationField f;
  f.support_radius = r0 + width;
  f.descriptor = "radial-bump";
  f.value = [=](const Vec3& x) -> Vec3 {
    double r = x.norm();
    if (r < 1e-12) return Vec3::Zero();
    double chi = cutoff((r - r0) / width);
    if (chi == 0.0) return Vec3::Zero();
    double m = 1.0 + mod_z * x.z() / r;
    return amplitude * chi * m / r * x;
  };
  f.jacobian = [=](const Vec3& x) -> Mat3 {
    double r = x.norm();
    if (r < 1e-12) return Mat3::Zero();
    double s = (r - r0) / width;
    double chi = cutoff(s);
    if (chi == 0.0 && cutoff_d(s) == 0.0) return Mat3::Zero();
    double chi_d = cutoff_d(s) / width;
    Vec3 xhat = x / r;
    double m = 1.0 + mod_z * x.z() / r;
    Vec3 grad_m = mod_z * (Vec3::UnitZ() / r - x.z() / (r * r * r) * x);
    // h = f x with f = A chi m / r.
    double fval = amplitude * chi * m / r;
    Vec3 grad_f = amplitude * (chi_d * m / r * xhat + chi / r * grad_m - chi * m / (r * r) * xhat);
    return x * grad_f.transpose() + fval * Mat3::Identity();
  };
  return f;
}

DeformationField make_tangential_rotation(double amplitude, double r0, double width, const Vec3& axis) {
  DeformationField f;
  f.support_radius = r0 + width;
  f.descriptor = "tangential-rotation";
  f.sphere_tangential = true;
  Vec3 w = axis.normalized();
  Mat3 wx;
  wx << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  f.value = [=](const Vec3& x) -> Vec3 {
    double r = x.norm();
    if (r < 1e-12) return Vec3::Zero();
    double chi = cutoff((r - r0) / width);
    return amplitude * chi * w.cross(x);
  };
  f.jacobian = [=](const Vec3& x) -> Mat3 {
    double r = x.norm();
    if (r < 1e-12) return Mat3::Zero();
    double s = (r - r0) / width;
    double chi = cutoff(s);
    double chi_d = cutoff_d(s) / width;
    Vec3 xhat = x / r;
    return amplitude * (w.cross(x) * (chi_d * xhat).transpose() + chi * wx);
  };
  return f;
}

DeformationField make_random_smooth(double amplitude, double r0, double width, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto p = std::make_shared<PolyField3>();
  for (int c = 0; c < 3; ++c) {
    Poly3 poly(2);
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j + i <= 2; ++j)
        for (int k = 0; k + j + i <= 2; ++k) poly.at(i, j, k) = uni(rng) / 3.0;
    p->comp[c] = poly;
  }
  DeformationField f;
  f.support_radius = r0 + width;
  f.descriptor = "random-smooth(seed=" + std::to_string(seed) + ")";
  f.value = [=](const Vec3& x) -> Vec3 {
    double r = x.norm();
    double chi = cutoff((r - r0) / width);
    if (chi == 0.0) return Vec3::Zero();
    return amplitude * chi * p->eval(x);
  };
  f.jacobian = [=](const Vec3& x) -> Mat3 {
    double r = x.norm();
    double s = (r - r0) / width;
    double chi = cutoff(s);
    if (chi == 0.0 && cutoff_d(s) == 0.0) return Mat3::Zero();
    double chi_d = cutoff_d(s) / width;
    Vec3 xhat = r > 1e-12 ? Vec3(x / r) : Vec3::Zero();
    return amplitude * (p->eval(x) * (chi_d * xhat).transpose() + chi * p->jacobian(x));
  };
  return f;
}

DeformationField normal_part(const DeformationField& h, const AnalyticSurface& surface) {
  DeformationField f;
  f.support_radius = h.support_radius;
  f.support_center = h.support_center;
  f.descriptor = h.descriptor + ":normal-part";
  auto hv = h.value;
  auto hj = h.jacobian;
  f.value = [=](const Vec3& x) -> Vec3 {
    Vec3 v = hv(x);
    if (v.isZero()) return v;
    Vec3 n = surface.normal(x);
    return v.dot(n) * n;
  };
  f.jacobian = [=](const Vec3& x) -> Mat3 {
    Vec3 v = hv(x);
    Mat3 J = hj(x);
    if (v.isZero() && J.isZero()) return Mat3::Zero();
    Vec3 n = surface.normal(x);
    Mat3 Jn = surface.normal_jacobian(x);
    Vec3 grad_hn = J.transpose() * n + Jn.transpose() * v;  // grad of (h . n_ext)
    return n * grad_hn.transpose() + v.dot(n) * Jn;
  };
  return f;
}

DeformationField tangential_part(const DeformationField& h, const AnalyticSurface& surface) {
  DeformationField f = deformation_sum(h, normal_part(h, surface), 1.0, -1.0);
  if (surface.kind() == AnalyticSurface::Kind::Sphere && surface.center().isZero())
    f.sphere_tangential = true;
  return f;
}

DeformationField deformation_sum(const DeformationField& a, const DeformationField& b,
                                 double ca, double cb) {
  DeformationField f;
  f.support_radius = std::max(a.support_radius, b.support_radius);
  f.support_center = a.support_center;
  f.descriptor = a.descriptor + "+" + b.descriptor;
  f.summands.emplace_back(ca, std::make_shared<const DeformationField>(a));
  f.summands.emplace_back(cb, std::make_shared<const DeformationField>(b));
  auto av = a.value, bv = b.value;
  auto aj = a.jacobian, bj = b.jacobian;
  f.value = [=](const Vec3& x) -> Vec3 { return ca * av(x) + cb * bv(x); };
  f.jacobian = [=](const Vec3& x) -> Mat3 { return ca * aj(x) + cb * bj(x); };
  return f;
}

}  // namespace maxshape
