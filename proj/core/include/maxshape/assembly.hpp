#pragma once

#include <functional>
#include <optional>
#include <string>

#include "maxshape/common.hpp"
#include "maxshape/edge_space.hpp"
#include "maxshape/quadrature.hpp"
#include "maxshape/response.hpp"

namespace maxshape {

/// Wave data of the scattering problem: wavenumber, impedance, piecewise
/// material contrast and the incident plane wave.
struct WaveParameters {
  double k = 1.0;
  cplx lambda{1.0, 0.0};
  cplx eps_r_interior{1.0, 0.0};
  double mu_r_interior = 1.0;
  Vec3 direction = Vec3::UnitZ();
  CVec3 polarization = CVec3::UnitX();

  void validate() const;
  CVec3 incident(const Vec3& x) const;
  CVec3 incident_curl(const Vec3& x) const;
  cplx eps_r(int region) const { return region == 1 ? eps_r_interior : cplx(1.0, 0.0); }
  double inv_mu_r(int region) const { return region == 1 ? 1.0 / mu_r_interior : 1.0; }
};

/// Sparse operator plus load with a label naming the assembled form.
struct AssembledSystem {
  SpMat matrix;
  CVecX load;
  std::string form;
};

using TensorCoefficient = std::function<CMat3(Index tet, const Vec3& x)>;

/// Per-quadrature-point boundary transport for pulled-back forms: the trace
/// operator applied to basis tangential components, the surface Jacobian
/// weight, and the mapped evaluation point for the response's first argument.
struct BoundaryTransport {
  std::vector<Mat3> trace_op;  // T_q, applied after gamma_T; identity at h=0
  std::vector<double> weight;  // omega_h(q); 1 at h=0
  std::vector<Vec3> xmap;      // phi_h(x_q); x_q at h=0

  static BoundaryTransport identity(const SurfaceQuadrature& quad);
};

int assembly_threads();
void set_assembly_threads(int threads);

/// curl-curl form int (curl u)^T A (curl v~); A = Id when absent.
SpMat assemble_curl_curl(const EdgeSpace& space, const TensorCoefficient& coeff = nullptr);

/// mass form int u^T A v~.
SpMat assemble_mass(const EdgeSpace& space, const TensorCoefficient& coeff = nullptr);

/// L2_t(Gamma) product of (transported) tangential traces with weight:
/// int (T gamma_T u).(T gamma_T v~) w ds.
SpMat assemble_boundary_mass(const EdgeSpace& space, const SurfaceQuadrature& quad,
                             const BoundaryTransport* transport = nullptr);

/// Load F_f = int_S data(q) . (T gamma_T N_f) w ds over a tagged surface.
CVecX assemble_surface_load(const EdgeSpace& space, const SurfaceQuadrature& quad,
                            const std::function<CVec3(std::size_t, const SurfacePoint&)>& data,
                            const BoundaryTransport* transport = nullptr);

/// Volume load int f . N_e dx.
CVecX assemble_volume_load(const EdgeSpace& space,
                           const std::function<CVec3(Index, const Vec3&)>& f);

/// Nonlinear boundary load int g(xmap(q), trace(q)) . (T gamma_T N_f) w ds.
/// `trace` supplies the tangential argument of g per quadrature point.
CVecX assemble_nonlinear_load(const EdgeSpace& space, const SurfaceQuadrature& quad,
                              const BoundaryResponse& response,
                              const std::function<CVec3(std::size_t, const SurfacePoint&)>& trace,
                              const BoundaryTransport* transport = nullptr);

/// Real symmetric H(curl) inner-product matrix (curl-curl + mass), used by
/// the lifting extension and for energy norms.
SpMatR assemble_hcurl_gram(const EdgeSpace& space);

/// Quadratic-form helpers.
double hcurl_norm(const EdgeSpace& space, const CVecX& u);
double l2_norm(const EdgeSpace& space, const CVecX& u);
double trace_l2_norm(const EdgeSpace& space, const SurfaceQuadrature& quad, const CVecX& u);
/// X(Omega)-norm: sqrt(|u|_Hcurl^2 + |gamma_T u|_L2(Gamma)^2).
double xnorm(const EdgeSpace& space, const SurfaceQuadrature& gamma_quad, const CVecX& u);

/// Cached norm matrices for repeated evaluations (FD sweeps).
struct NormPack {
  SpMat K;   // curl-curl
  SpMat M;   // mass
  SpMat B;   // tangential boundary mass on the nonlinearity surface

  double l2(const CVecX& u) const;
  double hcurl(const CVecX& u) const;
  double x(const CVecX& u) const;
};

NormPack make_norm_pack(const EdgeSpace& space, const SurfaceQuadrature& gamma_quad);

/// Matrix export in "row col re im" coordinate text format.
void dump_matrix(const SpMat& A, const std::string& path);
void dump_vector(const CVecX& v, const std::string& path);

}  // namespace maxshape
