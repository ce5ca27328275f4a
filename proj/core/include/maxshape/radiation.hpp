#pragma once

#include "maxshape/assembly.hpp"
#include "maxshape/common.hpp"
#include "maxshape/spherical_harmonics.hpp"

namespace maxshape {

/// Discrete transparent-boundary operator on GammaR. The first-order
/// Silver-Mueller variant acts like the identity on tangential traces, giving
/// the boundary term ik (gamma_T u, gamma_T v)_GammaR. The spectral variant
/// couples GammaR degrees of freedom through vector spherical harmonics up to
/// `order` with Riccati-Hankel ratio coefficients and tends to the
/// Silver-Mueller operator as kR grows.
struct RadiationOperator {
  enum class Variant { SilverMuller1, SpectralDtN };

  Variant variant = Variant::SilverMuller1;
  double radius = 2.0;
  Vec3 center = Vec3::Zero();
  int order = 0;  // spectral truncation; 0 means no modes

  /// Throws UnsupportedOuterBoundary unless the quadrature lies on the sphere
  /// (spectral variant only).
  void check_boundary(const SurfaceQuadrature& quad) const;

  /// Modal coefficient of the +ik Lambda term for degree l: multiplies the
  /// L2-projection onto the corresponding tangential mode family.
  cplx primal_coefficient_te(int l, double k) const;
  cplx primal_coefficient_tm(int l, double k) const;
};

/// The +ik <Lambda gamma_t u, gamma_T v>_GammaR matrix of the primal forms.
SpMat assemble_radiation(const EdgeSpace& space, const RadiationOperator& op,
                         const SurfaceQuadrature& quad_gr, double k);

/// The (i/k) <Lambda^-1 gamma_t q, gamma_T tau>_GammaR block of the mixed
/// formulation, consistent with the primal operator above.
SpMat assemble_radiation_inverse(const EdgeSpace& space, const RadiationOperator& op,
                                 const SurfaceQuadrature& quad_gr, double k);

/// Incident-wave excitation <ik Lambda gamma_t E^i - gamma_t curl E^i, gamma_T v>.
CVecX assemble_incident_load(const EdgeSpace& space, const RadiationOperator& op,
                             const SurfaceQuadrature& quad_gr, const WaveParameters& wave);

/// Mixed-form excitation <gamma_t E^i + (i/k) Lambda^-1 gamma_t curl E^i, gamma_T tau>.
CVecX assemble_incident_load_mixed(const EdgeSpace& space, const RadiationOperator& op,
                                   const SurfaceQuadrature& quad_gr, const WaveParameters& wave);

}  // namespace maxshape
