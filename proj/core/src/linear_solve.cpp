#include "maxshape/linear_solve.hpp"

#include <cmath>
#include <random>

namespace maxshape {

ComplexLU::ComplexLU(const SpMat& A, ErrorCode on_fail) : n_(A.rows()) {
  lu_ = std::make_shared<Eigen::SparseLU<SpMat>>();
  lu_->compute(A);
  if (lu_->info() != Eigen::Success)
    throw Error(on_fail, "complex sparse LU factorization failed");
}

CVecX ComplexLU::solve(const CVecX& b) const { return lu_->solve(b); }

CVecX ComplexLU::solve_adjoint(const CVecX& b) const { return lu_->adjoint().solve(b); }

RealLU::RealLU(const SpMatR& A, ErrorCode on_fail) : n_(A.rows()) {
  lu_ = std::make_shared<Eigen::SparseLU<SpMatR>>();
  lu_->compute(A);
  if (lu_->info() != Eigen::Success)
    throw Error(on_fail, "real sparse LU factorization failed");
}

VecX RealLU::solve(const VecX& b) const { return lu_->solve(b); }

double inverse_norm_estimate(const ComplexLU& lu, int iters, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVecX v(lu.size());
  for (Index i = 0; i < lu.size(); ++i) v[i] = cplx(gauss(rng), gauss(rng));
  v /= v.norm();
  double est = 0.0;
  for (int k = 0; k < iters; ++k) {
    CVecX w = lu.solve(lu.solve_adjoint(v));
    est = std::sqrt(w.norm());
    v = w / w.norm();
  }
  return est;
}

}  // namespace maxshape
