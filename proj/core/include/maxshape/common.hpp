#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <vector>

namespace maxshape {

using cplx = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

using VecX = Eigen::VectorXd;
using CVecX = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;
using SpMatR = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<cplx>;
using TripletR = Eigen::Triplet<double>;

using Index = std::int64_t;

inline constexpr cplx IM{0.0, 1.0};

inline Mat3 outer(const Vec3& a, const Vec3& b) { return a * b.transpose(); }

/// Tangential projector Id - n (x) n for a unit normal n.
inline Mat3 tangential_projector(const Vec3& n) {
  return Mat3::Identity() - outer(n, n);
}

inline CVec3 cross(const Vec3& a, const CVec3& b) {
  return CVec3(a.y() * b.z() - a.z() * b.y(),
               a.z() * b.x() - a.x() * b.z(),
               a.x() * b.y() - a.y() * b.x());
}

inline CVec3 cross(const CVec3& a, const Vec3& b) {
  return CVec3(a.y() * b.z() - a.z() * b.y(),
               a.z() * b.x() - a.x() * b.z(),
               a.x() * b.y() - a.y() * b.x());
}

/// Bilinear (unconjugated) dot product; Eigen's dot() conjugates the first
/// argument, which is not what the real-linear trace algebra wants.
template <typename DerivedA, typename DerivedB>
inline cplx bdot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  cplx s = 0.0;
  for (int i = 0; i < 3; ++i) s += cplx(a[i]) * cplx(b[i]);
  return s;
}

/// Re <a, b> with the complex L2 pairing (second argument conjugated).
inline double re_inner(const CVec3& a, const CVec3& b) {
  return (a.array() * b.array().conjugate()).sum().real();
}

}  // namespace maxshape
