#include "maxshape/poly3.hpp"

#include <algorithm>

namespace maxshape {

Poly3 Poly3::constant(double v) {
  Poly3 p(0);
  p.at(0, 0, 0) = v;
  return p;
}

Poly3 Poly3::variable(int axis) {
  Poly3 p(1);
  if (axis == 0) p.at(1, 0, 0) = 1.0;
  if (axis == 1) p.at(0, 1, 0) = 1.0;
  if (axis == 2) p.at(0, 0, 1) = 1.0;
  return p;
}

double Poly3::eval(const Vec3& p) const {
  // Horner in z innermost, plain power accumulation outside; degrees are tiny.
  double acc = 0.0;
  double xi = 1.0;
  for (int i = 0; i <= deg_; ++i) {
    double yj = 1.0;
    for (int j = 0; j <= deg_; ++j) {
      double zk = 1.0;
      for (int k = 0; k <= deg_; ++k) {
        double c = c_[idx(i, j, k)];
        if (c != 0.0) acc += c * xi * yj * zk;
        zk *= p.z();
      }
      yj *= p.y();
    }
    xi *= p.x();
  }
  return acc;
}

Vec3 Poly3::grad(const Vec3& p) const {
  return Vec3(derivative(0).eval(p), derivative(1).eval(p), derivative(2).eval(p));
}

Poly3 Poly3::derivative(int axis) const {
  Poly3 r(std::max(deg_ - 1, 0));
  for (int i = 0; i <= deg_; ++i)
    for (int j = 0; j <= deg_; ++j)
      for (int k = 0; k <= deg_; ++k) {
        double c = c_[idx(i, j, k)];
        if (c == 0.0) continue;
        if (axis == 0 && i > 0) r.at(i - 1, j, k) += i * c;
        if (axis == 1 && j > 0) r.at(i, j - 1, k) += j * c;
        if (axis == 2 && k > 0) r.at(i, j, k - 1) += k * c;
      }
  return r;
}

Poly3 Poly3::operator+(const Poly3& o) const {
  Poly3 r(std::max(deg_, o.deg_));
  for (int i = 0; i <= deg_; ++i)
    for (int j = 0; j <= deg_; ++j)
      for (int k = 0; k <= deg_; ++k) r.at(i, j, k) += c_[idx(i, j, k)];
  for (int i = 0; i <= o.deg_; ++i)
    for (int j = 0; j <= o.deg_; ++j)
      for (int k = 0; k <= o.deg_; ++k) r.at(i, j, k) += o.at(i, j, k);
  return r;
}

Poly3 Poly3::operator-(const Poly3& o) const { return *this + o * (-1.0); }

Poly3 Poly3::operator*(const Poly3& o) const {
  Poly3 r(deg_ + o.deg_);
  for (int i = 0; i <= deg_; ++i)
    for (int j = 0; j <= deg_; ++j)
      for (int k = 0; k <= deg_; ++k) {
        double a = c_[idx(i, j, k)];
        if (a == 0.0) continue;
        for (int p = 0; p <= o.deg_; ++p)
          for (int q = 0; q <= o.deg_; ++q)
            for (int s = 0; s <= o.deg_; ++s) {
              double b = o.at(p, q, s);
              if (b != 0.0) r.at(i + p, j + q, k + s) += a * b;
            }
      }
  return r;
}

Poly3 Poly3::operator*(double s) const {
  Poly3 r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

}  // namespace maxshape
