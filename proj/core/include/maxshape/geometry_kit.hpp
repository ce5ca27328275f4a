#pragma once

#include "maxshape/analytic_surface.hpp"
#include "maxshape/common.hpp"
#include "maxshape/deformation.hpp"

namespace maxshape {

/// Bulk pullback coefficients M_h = J^T J / det J and N_h = det J J^-1 J^-T.
struct BulkKit {
  Mat3 M;
  Mat3 N;
};

BulkKit bulk_coefficients(const Mat3& J, double detJ);

/// First-order variations of the bulk coefficients in the direction J_h:
/// Mdot = -(div h) Id + J_h + J_h^T, Ndot = -Mdot.
struct BulkVariation {
  Mat3 Mdot;
  Mat3 Ndot;
};

BulkVariation bulk_variation(const Mat3& J_h);

/// Per-point surface transport data for a deformed boundary.
struct SurfaceKit {
  Vec3 n_tilde;      // J^-T n / |J^-T n|
  Mat3 P_h;          // Id - n_tilde (x) n_tilde
  Mat3 JinvT;        // J^-T
  double omega;      // det J |J^-T n|
  double omega_dot;  // derivative of omega at t=0 for phi = Id + t h
  Vec3 delta_n;      // derivative of n_tilde at t=0
};

/// Algebraic variant: omega_dot = div h - n.J_h n and delta_n = -P_T J_h^T n
/// are the exact t-derivatives of the transported quantities at this point,
/// whatever normal is supplied (facet normals included). This is the variant
/// the sensitivity assembly uses.
SurfaceKit surface_kit_algebraic(const Mat3& J, double detJ, const Vec3& n, const Mat3& J_h);

/// Curvature-form variant: omega_dot = div_Gamma h_T + curvature * h_n and
/// delta_n = -grad_Gamma h_n + S h_T, evaluated with exact surface data.
/// Equivalent to the algebraic variant on the exact surface.
SurfaceKit surface_kit(const Mat3& J, double detJ, const Vec3& n, const AnalyticSurface& surface,
                       const Vec3& x, const Vec3& h_value, const Mat3& J_h);

}  // namespace maxshape
