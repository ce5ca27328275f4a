#pragma once

#include <memory>

#include "maxshape/fixed_point.hpp"
#include "maxshape/pullback.hpp"

namespace maxshape {

/// R-linear operator in split real/imaginary block form. g_z involves
/// Re<.,.>, so a complex matrix cannot represent the linearized forms in
/// general; the real 2n x 2n block always can.
class LinearizedSystem {
 public:
  /// Embeds the C-linear part A and keeps the complex dimension n.
  LinearizedSystem(const SpMat& A, Index n);

  /// Adds the boundary block sign * int g_z(x, zeta(q); gamma_T W).gamma_T V
  /// over the quadrature, at the given (row, col) complex block offsets
  /// (both 0 for primal problems; the mixed form couples tau rows with the E
  /// block).
  void add_gz_block(const EdgeSpace& space, const SurfaceQuadrature& quad,
                    const BoundaryResponse& g,
                    const std::function<CVec3(std::size_t)>& zeta, double sign,
                    Index row_offset = 0, Index col_offset = 0);

  void factorize();
  /// Solves for the complex unknown given the complex functional values.
  CVecX solve(const CVecX& rhs) const;

  Index complex_dim() const { return n_; }
  const SpMatR& matrix() const { return A_; }

 private:
  Index n_;
  std::vector<TripletR> trips_;
  SpMatR A_;
  std::shared_ptr<RealLU> lu_;
};

/// Linearized primal operator A^ at the converged state E (NIBC/NTC).
LinearizedSystem build_linearized_primal(const ScatteringSetup& setup,
                                         const AssembledSystem& linear, const CVecX& E);

/// Linearized mixed NPEC operator A^p at the converged state E.
LinearizedSystem build_linearized_mixed_npec(const ScatteringSetup& setup,
                                             const MixedNpecSystem& sys, const CVecX& E);

/// Per-point deformation data on the nonlinearity surface used by the
/// material right-hand sides: the exact t-derivatives of the transported
/// quantities (algebraic surface kit with the facet normals).
struct DeformationSurfaceData {
  std::vector<Vec3> h;
  std::vector<Mat3> J_h;
  std::vector<double> omega_dot;
  std::vector<Vec3> delta_n;
};

DeformationSurfaceData deformation_surface_data(const SurfaceQuadrature& quad,
                                                const DeformationField& h);

/// L_h of the impedance problem (all six term groups) as a functional vector
/// over the test space. `E` must be a converged solution (residual checked).
CVecX assemble_material_rhs_nibc(const ScatteringSetup& setup, const CVecX& E, double residual,
                                 const DeformationField& h);

/// L_h^tr: material-weighted volume terms plus the interface g-variations.
CVecX assemble_material_rhs_ntc(const ScatteringSetup& setup, const CVecX& E, double residual,
                                const DeformationField& h);

/// L_h^p over [tau; nu]: the Ndot-weighted volume terms and the boundary
/// g-variations with the mixed-form signs.
CVecX assemble_material_rhs_npec(const ScatteringSetup& setup, const CVecX& E, const CVecX& Q,
                                 double residual, const DeformationField& h);

/// W = A^-1 L_h (and the (W, P) pair for the mixed problem).
CVecX solve_material(LinearizedSystem& system, const CVecX& rhs);

/// Everything the sensitivity pipeline produces for one deformation.
struct MaterialDerivativeResult {
  CVecX W;
  CVecX P;  // mixed NPEC only
};

/// Discrete weak residual of P + Ndot_h Q - curl W over the interior test
/// functions (rows away from Gamma and GammaR), relative to |P| + |curl W|.
double npec_mixed_identity_residual(const ScatteringSetup& setup, const CVecX& W, const CVecX& P,
                                    const CVecX& Q, const DeformationField& h);

}  // namespace maxshape
