#pragma once

#include <Eigen/SparseCholesky>
#include <functional>
#include <memory>

#include "maxshape/assembly.hpp"
#include "maxshape/deformation.hpp"
#include "maxshape/response.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

/// Discrete counterpart of the bounded lifting: boundary edge degrees of
/// freedom come from tangential interpolation of the prescribed gamma_t data,
/// interior ones from the minimal (curl-curl + mass) energy extension.
class LiftingOperator {
 public:
  LiftingOperator(const EdgeSpace& space, SurfaceTag tag);

  /// gamma_t data evaluated at surface points with the edge-averaged normal:
  /// the lifted field w satisfies dof_e(w) = (1/|e|) int (data x n).t dl on
  /// the tagged edges.
  using GammaTData = std::function<CVec3(const Vec3& x, const Vec3& n)>;

  /// Boundary interpolation only; zero elsewhere.
  CVecX boundary_dofs(const GammaTData& data) const;
  /// Same, but along the deformed edges of phi (reduces to the base formula
  /// at t = 0): data is evaluated at phi(x) and paired with J_phi t.
  CVecX boundary_dofs_deformed(const GammaTData& data_at_mapped_point,
                               const Diffeomorphism& phi) const;

  /// Minimal-energy interior extension of given boundary DoFs.
  CVecX extend(const CVecX& boundary) const;

  CVecX lift(const GammaTData& data) const { return extend(boundary_dofs(data)); }
  /// Lifts a stored tangential field (values = gamma_t w at the tagged
  /// surface quadrature points, reconstructed linearly per triangle).
  CVecX lift(const TangentialField& data) const;

  /// Boundary DoFs of the lifted response data g(., gamma_T U) evaluated
  /// along the tagged edges; `phi` (when given) moves the evaluation to the
  /// deformed configuration with the transported trace, reducing to the base
  /// formula at t = 0.
  CVecX boundary_dofs_response(const CVecX& U, const BoundaryResponse& g,
                               const Diffeomorphism* phi = nullptr) const;

  /// Appends rows e: E_e - c * dof_e(lift(c' P_T gamma_T E)) for the folded
  /// linear-response system; emits triplets (e, f, coeff) of the linear
  /// functional dof_e(lift(P_T gamma_T .)) scaled by -c plus the identity.
  void append_linear_constraint_rows(std::vector<Triplet>& trips, cplx c) const;

  double energy_norm(const CVecX& w) const;

  const std::vector<Index>& boundary_edges() const;
  const EdgeSpace& space() const { return *space_; }
  SurfaceTag tag() const { return tag_; }
  /// An adjacent tagged triangle for each boundary edge (index into the
  /// surface list) for trace evaluation along edges.
  Index edge_triangle(Index edge) const { return edge_tri_[edge]; }

 private:
  const EdgeSpace* space_;
  SurfaceTag tag_;
  SpMatR gram_;
  std::shared_ptr<Eigen::SimplicialLDLT<SpMatR>> interior_;
  std::vector<Index> reduced_of_full_;  // -1 for boundary DoFs
  std::vector<Index> full_of_reduced_;
  std::vector<Index> edge_tri_;
};

}  // namespace maxshape
