#pragma once

#include "maxshape/deformation.hpp"
#include "maxshape/fixed_point.hpp"
#include "maxshape/geometry_kit.hpp"

namespace maxshape {

/// t-dependent pulled-back coefficients on the reference mesh: the bulk
/// tensors (material-weighted for NTC), the boundary transport of the
/// nonlinearity surface, and the diffeomorphism itself.
struct PullbackData {
  Diffeomorphism phi;
  TensorCoefficient Mh;
  TensorCoefficient Nh;
  BoundaryTransport transport;
};

PullbackData make_pullback_data(const ScatteringSetup& setup, const DeformationField& h, double t);

/// Pulled-back linear system of the primal problems (matrix + invariant load).
AssembledSystem assemble_pulled_back_system(const ScatteringSetup& setup, const PullbackData& pb);

struct PullbackSolution {
  CVecX E;
  CVecX Q;  // mixed NPEC only; empty otherwise
  ContractionDiagnostics diag;
};

/// Solves the pulled-back nonlinear problem for phi = Id + t h with the
/// matching fixed-point solver; at t = 0 it reproduces the reference solve
/// bit for bit. For NPEC, `mixed` selects the dual formulation used by the
/// sensitivity pipeline; otherwise the lifting solver runs on the deformed
/// data.
PullbackSolution pullback_solve(const ScatteringSetup& setup, const DeformationField& h, double t,
                                const FixedPointConfig& cfg, bool mixed_npec = true);

/// Applies the full pulled-back semi-linear form to a fixed coefficient
/// vector: returns the vector of A~_t(E, N_f) over all test functions (used
/// by the finite-difference consistency oracles).
CVecX apply_pulled_back_form(const ScatteringSetup& setup, const PullbackData& pb, const CVecX& E);

/// Same for the mixed NPEC form: rows [tau; nu] of A~^p_t((E,Q), .).
CVecX apply_pulled_back_mixed_form(const ScatteringSetup& setup, const PullbackData& pb,
                                   const CVecX& E, const CVecX& Q);

}  // namespace maxshape
