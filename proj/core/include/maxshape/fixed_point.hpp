#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maxshape/assembly.hpp"
#include "maxshape/lifting.hpp"
#include "maxshape/linear_solve.hpp"
#include "maxshape/radiation.hpp"
#include "maxshape/response.hpp"

namespace maxshape {

enum class ProblemKind { Nibc, Npec, Ntc };

const char* problem_kind_name(ProblemKind kind);

struct FixedPointConfig {
  int max_iters = 200;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double damping = 1.0;
  /// Window length for the divergence test (median increment ratio >= 1).
  int divergence_window = 10;

  void validate() const;
};

struct ContractionDiagnostics {
  std::vector<double> increments;
  std::vector<double> ratios;
  double rho_hat = 0.0;  // median increment ratio
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;            // |A E - F - G(E)|_2 / |F|_2
  double boundary_residual = 0.0;   // NPEC: gamma_t E vs g at Gamma DoFs
  double stability_surrogate = 0.0; // inverse-power estimate of |A_l^-1|
  double contraction_surrogate = 0.0;  // stability_surrogate * L_g

  std::string to_csv() const;  // "iter,increment_norm,ratio" lines
};

/// Everything the solvers need about one scattering configuration.
struct ScatteringSetup {
  ProblemKind kind = ProblemKind::Nibc;
  const EdgeSpace* space = nullptr;
  WaveParameters wave;
  RadiationOperator radiation;
  std::shared_ptr<const BoundaryResponse> response;
  SurfaceTag g_surface = SurfaceTag::Gamma;  // Interface for NTC
  SurfaceQuadrature g_quad;
  SurfaceQuadrature gr_quad;

  /// gamma_T E at a quadrature point of the nonlinearity surface.
  CVec3 trace_at(const CVecX& E, std::size_t q) const;
};

ScatteringSetup make_setup(const EdgeSpace& space, ProblemKind kind, const WaveParameters& wave,
                           const RadiationOperator& radiation,
                           std::shared_ptr<const BoundaryResponse> response);

/// Linear part of the primal forms: NIBC K - k^2 M + ik lambda B_Gamma + R,
/// NTC with the piecewise material weights, NPEC without the impedance term.
AssembledSystem assemble_linear_system(const ScatteringSetup& setup);

struct PrimalSolution {
  CVecX E;
  ContractionDiagnostics diag;
};

struct NpecSolution {
  CVecX E;
  CVecX Q;  // L2 projection of curl E onto the edge space
  ContractionDiagnostics diag;
};

struct MixedSolution {
  CVecX E;
  CVecX Q;  // independent mixed unknown
  ContractionDiagnostics diag;
};

PrimalSolution solve_nibc(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                          const CVecX* initial = nullptr);
PrimalSolution solve_ntc(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                         const CVecX* initial = nullptr);
NpecSolution solve_npec(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                        const CVecX* initial = nullptr);

/// Fixed point against an already-assembled (possibly pulled-back) primal
/// system; `transport` transports the g-term traces when given.
PrimalSolution solve_primal_system(const ScatteringSetup& setup, const AssembledSystem& sys,
                                   const FixedPointConfig& cfg,
                                   const BoundaryTransport* transport = nullptr,
                                   const CVecX* initial = nullptr);

/// NPEC lifting solver against an assembled system; `phi` moves the lifting
/// interpolation to the deformed configuration.
NpecSolution solve_npec_system(const ScatteringSetup& setup, const AssembledSystem& sys,
                               const FixedPointConfig& cfg, const Diffeomorphism* phi = nullptr,
                               const CVecX* initial = nullptr);

/// Transported gamma_T E at quadrature point q (base trace when transport is
/// null).
CVec3 traced_solution_value(const ScatteringSetup& setup, const CVecX& E, std::size_t q,
                            const BoundaryTransport* transport);

/// Direct solve of the primal problem with a linear response folded into the
/// matrix (oracle for the fixed-point correctness checks).
CVecX solve_linear_folded(const ScatteringSetup& setup, cplx c);

/// NPEC analogue: constraint rows E_e = dof_e(lift(c P_T gamma_T E)) on
/// Gamma, Galerkin rows elsewhere.
CVecX solve_npec_linear_folded(const ScatteringSetup& setup, cplx c);

/// Mixed (dual) NPEC fixed point; the Q unknown stays independent. Used by
/// the sensitivity pipeline so that base state, perturbed states and
/// linearization live in the same discrete family.
MixedSolution solve_npec_mixed(const ScatteringSetup& setup, const FixedPointConfig& cfg);

/// int N_f . (curl N_e): the pairing block of the mixed formulation.
SpMat assemble_curl_pairing(const EdgeSpace& space);

/// The full nonlinear residual |A_l E - F - G(E)| / |F| of a primal problem.
double primal_residual(const ScatteringSetup& setup, const AssembledSystem& linear, const CVecX& E,
                       const BoundaryTransport* transport = nullptr);

/// Mixed NPEC blocks: unknowns [E; Q], test rows [tau; nu]. `Nh` weights the
/// two mass blocks (pulled-back forms); `transport` carries the deformed
/// boundary data of the g term.
struct MixedNpecSystem {
  SpMat S;     // 2N x 2N
  CVecX F;     // [F^p_tau; 0]
  Index n = 0; // single-field dimension
};

MixedNpecSystem build_mixed_npec(const ScatteringSetup& setup, const TensorCoefficient& Nh,
                                 const BoundaryTransport* transport);

MixedSolution solve_npec_mixed_system(const ScatteringSetup& setup, const MixedNpecSystem& sys,
                                      const FixedPointConfig& cfg,
                                      const BoundaryTransport* transport);

}  // namespace maxshape
