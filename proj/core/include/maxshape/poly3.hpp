#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "maxshape/common.hpp"

namespace maxshape {

/// Dense trivariate polynomial with real coefficients, indexed by the
/// exponents of x, y, z. Degrees stay small (solid harmonics, polynomial
/// oracles), so the cubic coefficient table is fine.
class Poly3 {
 public:
  Poly3() : deg_(0), c_(1, 0.0) {}
  explicit Poly3(int degree) : deg_(degree), c_(size_of(degree), 0.0) {}

  static Poly3 constant(double v);
  static Poly3 variable(int axis);  // 0 -> x, 1 -> y, 2 -> z

  int degree() const { return deg_; }
  double& at(int i, int j, int k) { return c_[idx(i, j, k)]; }
  double at(int i, int j, int k) const { return c_[idx(i, j, k)]; }

  double eval(const Vec3& p) const;
  Vec3 grad(const Vec3& p) const;
  Poly3 derivative(int axis) const;

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 operator*(double s) const;
  Poly3& operator+=(const Poly3& o) { *this = *this + o; return *this; }

 private:
  static std::size_t size_of(int d) {
    return static_cast<std::size_t>(d + 1) * (d + 1) * (d + 1);
  }
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * (deg_ + 1) + j) * (deg_ + 1) + k;
  }

  int deg_;
  std::vector<double> c_;
};

/// Polynomial vector field, one Poly3 per component.
struct PolyField3 {
  std::array<Poly3, 3> comp;

  Vec3 eval(const Vec3& p) const {
    return Vec3(comp[0].eval(p), comp[1].eval(p), comp[2].eval(p));
  }
  Mat3 jacobian(const Vec3& p) const {
    Mat3 J;
    for (int i = 0; i < 3; ++i) J.row(i) = comp[i].grad(p).transpose();
    return J;
  }
  PolyField3 curl() const {
    PolyField3 r;
    r.comp[0] = comp[2].derivative(1) - comp[1].derivative(2);
    r.comp[1] = comp[0].derivative(2) - comp[2].derivative(0);
    r.comp[2] = comp[1].derivative(0) - comp[0].derivative(1);
    return r;
  }
  Poly3 divergence() const {
    return comp[0].derivative(0) + comp[1].derivative(1) + comp[2].derivative(2);
  }
};

}  // namespace maxshape
