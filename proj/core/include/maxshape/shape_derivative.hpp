#pragma once

#include "maxshape/analytic_surface.hpp"
#include "maxshape/material_derivative.hpp"
#include "maxshape/surface_ops.hpp"

namespace maxshape {

/// L2 projection of an edge-element field onto continuous piecewise-linear
/// vectors; raw edge-element gradients are distributional across faces, so
/// the convective term (h.grad)E uses this projection. An optional region
/// restriction gives one-sided projections across the NTC interface.
class TransportTerm {
 public:
  TransportTerm(const EdgeSpace& space, const CVecX& E, int region = -1);

  CVec3 p1_value(Index tet, const Vec3& x) const;
  CMat3 p1_gradient(Index tet) const;
  /// J_h^T E_h(x) + (h . grad) E_p1(x).
  CVec3 value(Index tet, const Vec3& x, const DeformationField& h) const;

 private:
  const EdgeSpace* space_;
  CVecX E_;
  Eigen::Matrix<cplx, Eigen::Dynamic, 3> nodal_;
};

/// delta E = W - J_h^T E - (h.grad)E as an edge-interpolated DoF vector.
CVecX recover_shape_derivative(const EdgeSpace& space, const CVecX& W, const CVecX& E,
                               const DeformationField& h);

/// The deformation as the Hadamard formulas see it: h_n at the surface
/// quadrature points and vertices (computed with the analytic normal) and
/// grad_Gamma h_n reconstructed per triangle from the vertex values. The
/// boundary-data evaluation below depends on the deformation only through
/// this struct, which pins the Hadamard structure by construction.
struct HadamardData {
  std::vector<double> hn;             // per quadrature point
  std::vector<Vec3> grad_hn;          // per quadrature point (facet P1 gradient)
  std::vector<double> hn_vertex;      // indexed by mesh vertex (0 off-surface)
};

HadamardData make_hadamard_data(const ScatteringSetup& setup, const AnalyticSurface& surface,
                                const DeformationField& h);

/// Solution data on the nonlinearity surface entering the boundary formulas.
/// Jump semantics for NTC (exterior minus interior).
struct ShapeDataField {
  std::vector<CVec3> gammaT_E;
  std::vector<cplx> En;            // E.n (or the jump [n.E])
  std::vector<cplx> curl_gamma;    // curl_Gamma gamma_T E, mu-weighted jump for NTC
  std::vector<CVec3> gammaT_curlE; // gamma_T curl E (or its jump)
  std::vector<CVec3> dn_gammaT_E;  // one-sided normal derivative of gamma_T E
  std::vector<CVec3> g_val;
  std::vector<CVec3> dn_g;         // normal derivative of x -> g(x, gamma_T E(x))
  std::vector<cplx> curl_gamma_vertex;  // nodal reconstructions
  std::vector<cplx> En_vertex;
};

ShapeDataField extract_shape_data(const ScatteringSetup& setup, const CVecX& E,
                                  const TetLocator& locator, const AnalyticSurface& surface);

/// Right-hand sides of the shape-derivative boundary conditions, evaluated at
/// the surface quadrature points: `main` is the data of the impedance /
/// magnetic-trace condition, `jump` the NTC tangential-jump data [n x dE].
struct ShapeBoundaryData {
  std::vector<CVec3> main;
  std::vector<CVec3> jump;

  double main_l2(const SurfaceQuadrature& quad) const;
};

ShapeBoundaryData shape_boundary_data(const ScatteringSetup& setup, const ShapeDataField& data,
                                      const HadamardData& had, const AnalyticSurface& surface);

/// Direct solve of the linearized shape BVP with the assembled boundary data
/// (primal problems; NIBC is the acceptance case).
CVecX solve_shape_bvp(const ScatteringSetup& setup, const AssembledSystem& linear, const CVecX& E,
                      const ShapeBoundaryData& data);

struct ShapeBvpReport {
  double boundary_rel = 0.0;  // |LHS(dE) - data| / |data| in L2(Gamma)
  double volume_rel = 0.0;    // interior weak residual of curl curl - k^2
  double jump_rel = 0.0;      // NTC tangential-jump residual
  double data_norm = 0.0;
};

ShapeBvpReport verify_shape_bvp(const ScatteringSetup& setup, const CVecX& E_base,
                                const CVecX& deltaE, const ShapeBoundaryData& data);

/// NTC diagnostic: [n x delta E] computed pointwise from W minus the
/// one-sided transport terms, against the jump data.
double ntc_jump_residual(const ScatteringSetup& setup, const CVecX& W, const CVecX& E,
                         const DeformationField& h, const ShapeBoundaryData& data);

}  // namespace maxshape
