#include "maxshape/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>

namespace maxshape {

namespace {

// Legendre P_l coefficients in u, exact recurrence.
std::vector<std::vector<double>> legendre_table(int lmax) {
  std::vector<std::vector<double>> P(lmax + 1);
  P[0] = {1.0};
  if (lmax >= 1) P[1] = {0.0, 1.0};
  for (int l = 2; l <= lmax; ++l) {
    P[l].assign(l + 1, 0.0);
    for (int j = 0; j <= l - 1; ++j) P[l][j + 1] += (2.0 * l - 1.0) / l * P[l - 1][j];
    for (std::size_t j = 0; j < P[l - 2].size(); ++j) P[l][j] -= (l - 1.0) / l * P[l - 2][j];
  }
  return P;
}

std::vector<double> differentiate(const std::vector<double>& c, int times) {
  std::vector<double> r = c;
  for (int t = 0; t < times; ++t) {
    std::vector<double> d(std::max<std::size_t>(r.size(), 1) - 1, 0.0);
    for (std::size_t j = 1; j < r.size(); ++j) d[j - 1] = j * r[j];
    r = std::move(d);
    if (r.empty()) r = {0.0};
  }
  return r;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Pi_l^m(x,y,z) = r^{l-m} (d^m P_l)(z/r) as a polynomial (parity makes all
// powers of r even).
Poly3 homogenize(const std::vector<double>& q, int l, int m) {
  Poly3 r2 = Poly3::variable(0) * Poly3::variable(0) + Poly3::variable(1) * Poly3::variable(1) +
             Poly3::variable(2) * Poly3::variable(2);
  Poly3 acc(0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] == 0.0) continue;
    int pow_r = l - m - static_cast<int>(j);
    // parity guarantees pow_r is even for nonzero coefficients
    Poly3 term = Poly3::constant(q[j]);
    for (std::size_t p = 0; p < j; ++p) term = term * Poly3::variable(2);
    for (int p = 0; p < pow_r / 2; ++p) term = term * r2;
    acc += term;
  }
  return acc;
}

}  // namespace

RealSphericalHarmonics::RealSphericalHarmonics(int max_order) : max_order_(max_order) {
  auto P = legendre_table(max_order);
  Poly3 x = Poly3::variable(0), y = Poly3::variable(1);
  for (int l = 1; l <= max_order; ++l) {
    // A_m = Re (x+iy)^m, B_m = Im (x+iy)^m by recurrence.
    Poly3 A = Poly3::constant(1.0), B = Poly3::constant(0.0);
    for (int m = 0; m <= l; ++m) {
      double K = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial(l - m) /
                           factorial(l + m));
      Poly3 Pi = homogenize(differentiate(P[l], m), l, m);
      if (m == 0) {
        modes_.push_back({l, Pi * K});
      } else {
        double N = std::sqrt(2.0) * K;
        modes_.push_back({l, Pi * A * N});
        modes_.push_back({l, Pi * B * N});
      }
      // advance (x+iy)^m -> (x+iy)^{m+1}
      Poly3 A2 = A * x - B * y;
      Poly3 B2 = A * y + B * x;
      A = A2;
      B = B2;
    }
  }
}

double RealSphericalHarmonics::eval(int mode, const Vec3& x, double R) const {
  const auto& m = modes_[mode];
  double r = x.norm();
  return m.solid.eval(x) / std::pow(r, m.l) / R;
}

Vec3 RealSphericalHarmonics::surface_gradient(int mode, const Vec3& x, double R) const {
  const auto& m = modes_[mode];
  double r = x.norm();
  double rl = std::pow(r, m.l);
  Vec3 g = m.solid.grad(x) / rl - m.l * m.solid.eval(x) / (rl * r * r) * x;
  return g / R;  // exactly tangential: the extension is 0-homogeneous
}

Vec3 RealSphericalHarmonics::mode_u(int mode, const Vec3& x, double R) const {
  int l = modes_[mode].l;
  return R * surface_gradient(mode, x, R) / std::sqrt(l * (l + 1.0));
}

Vec3 RealSphericalHarmonics::mode_v(int mode, const Vec3& x, double R) const {
  return x.normalized().cross(mode_u(mode, x, R));
}

cplx riccati_hankel2_ratio(int l, double t) {
  auto sph = [&](int order) {
    return cplx(std::sph_bessel(static_cast<unsigned>(order), t),
                -std::sph_neumann(static_cast<unsigned>(order), t));
  };
  cplx h = sph(l);
  cplx hm1 = l >= 1 ? sph(l - 1) : cplx(std::cos(t) / t, -std::sin(t) / t);
  // h'_l = h_{l-1} - (l+1)/t h_l; (t h)' = h + t h'.
  cplx hp = hm1 - (l + 1.0) / t * h;
  return (h + t * hp) / (t * h);
}

}  // namespace maxshape
