#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "maxshape/common.hpp"
#include "maxshape/errors.hpp"

namespace maxshape {

/// Direct sparse complex factorization; the one solver the project uses
/// (desk-scale systems, deterministic solves for all finite-difference work).
class ComplexLU {
 public:
  explicit ComplexLU(const SpMat& A, ErrorCode on_fail = ErrorCode::SingularSystem);

  CVecX solve(const CVecX& b) const;
  CVecX solve_adjoint(const CVecX& b) const;
  Index size() const { return n_; }

 private:
  std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
  Index n_;
};

class RealLU {
 public:
  explicit RealLU(const SpMatR& A, ErrorCode on_fail = ErrorCode::SingularSystem);

  VecX solve(const VecX& b) const;
  Index size() const { return n_; }

 private:
  std::shared_ptr<Eigen::SparseLU<SpMatR>> lu_;
  Index n_;
};

/// Power iteration on A^-1 A^-H: estimates the operator norm of the inverse
/// in the DoF l2 metric. Used only as an empirical surrogate for the
/// stability constants of the linear problems.
double inverse_norm_estimate(const ComplexLU& lu, int iters = 12, unsigned seed = 7);

}  // namespace maxshape
