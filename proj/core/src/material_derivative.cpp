#include "maxshape/material_derivative.hpp"

#include <cmath>

#include "maxshape/errors.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

LinearizedSystem::LinearizedSystem(const SpMat& A, Index n) : n_(n) {
  trips_.reserve(4 * A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      double re = it.value().real(), im = it.value().imag();
      if (re != 0.0) {
        trips_.emplace_back(it.row(), it.col(), re);
        trips_.emplace_back(it.row() + n_, it.col() + n_, re);
      }
      if (im != 0.0) {
        trips_.emplace_back(it.row(), it.col() + n_, -im);
        trips_.emplace_back(it.row() + n_, it.col(), im);
      }
    }
}

void LinearizedSystem::add_gz_block(const EdgeSpace& space, const SurfaceQuadrature& quad,
                                    const BoundaryResponse& g,
                                    const std::function<CVec3(std::size_t)>& zeta, double sign,
                                    Index row_offset, Index col_offset) {
  if (g.is_zero()) return;
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Index tet = p.tet_plus >= 0 ? p.tet_plus : p.tet_minus;
    Mat3 P = tangential_projector(p.n);
    CVec3 z = zeta(q);
    std::array<CVec3, 6> gz_re, gz_im;
    std::array<Vec3, 6> traced;
    std::array<Index, 6> dofs;
    for (int le = 0; le < 6; ++le) {
      traced[le] = P * space.basis_value(tet, le, p.x);
      dofs[le] = space.global_edge(tet, le);
      gz_re[le] = g.dz(p.x, z, traced[le].cast<cplx>());
      gz_im[le] = g.dz(p.x, z, IM * traced[le].cast<cplx>());
    }
    for (int e = 0; e < 6; ++e) {
      for (int f = 0; f < 6; ++f) {
        cplx G1 = sign * p.w * bdot(traced[f], gz_re[e]);  // test f, trial e (real dir)
        cplx G2 = sign * p.w * bdot(traced[f], gz_im[e]);  // trial e (imaginary dir)
        Index r = row_offset + dofs[f], c = col_offset + dofs[e];
        if (G1.real() != 0.0) trips_.emplace_back(r, c, G1.real());
        if (G2.real() != 0.0) trips_.emplace_back(r, c + n_, G2.real());
        if (G1.imag() != 0.0) trips_.emplace_back(r + n_, c, G1.imag());
        if (G2.imag() != 0.0) trips_.emplace_back(r + n_, c + n_, G2.imag());
      }
    }
  }
}

void LinearizedSystem::factorize() {
  A_.resize(2 * n_, 2 * n_);
  A_.setFromTriplets(trips_.begin(), trips_.end());
  A_.makeCompressed();
  trips_.clear();
  trips_.shrink_to_fit();
  lu_ = std::make_shared<RealLU>(A_, ErrorCode::SingularLinearizedSystem);
}

CVecX LinearizedSystem::solve(const CVecX& rhs) const {
  if (!lu_) throw Error(ErrorCode::SingularLinearizedSystem, "factorize() was not called");
  VecX b(2 * n_);
  b.head(n_) = rhs.real();
  b.tail(n_) = rhs.imag();
  VecX x = lu_->solve(b);
  CVecX w(n_);
  w.real() = x.head(n_);
  w.imag() = x.tail(n_);
  return w;
}

LinearizedSystem build_linearized_primal(const ScatteringSetup& setup,
                                         const AssembledSystem& linear, const CVecX& E) {
  LinearizedSystem sys(linear.matrix, setup.space->n_dofs());
  // A^ carries -int g_z(., gamma_T E; gamma_T W) . gamma_T V on the
  // nonlinearity surface.
  sys.add_gz_block(*setup.space, setup.g_quad, *setup.response,
                   [&](std::size_t q) { return setup.trace_at(E, q); }, -1.0);
  sys.factorize();
  return sys;
}

LinearizedSystem build_linearized_mixed_npec(const ScatteringSetup& setup,
                                             const MixedNpecSystem& sys_in, const CVecX& E) {
  LinearizedSystem sys(sys_in.S, 2 * sys_in.n);
  // +int g_z(., gamma_T E; gamma_T W) . gamma_T tau: tau rows at offset 0,
  // E columns at offset 0.
  sys.add_gz_block(*setup.space, setup.g_quad, *setup.response,
                   [&](std::size_t q) { return setup.trace_at(E, q); }, +1.0, 0, 0);
  sys.factorize();
  return sys;
}

DeformationSurfaceData deformation_surface_data(const SurfaceQuadrature& quad,
                                                const DeformationField& h) {
  DeformationSurfaceData d;
  std::size_t n = quad.points.size();
  d.h.resize(n);
  d.J_h.resize(n);
  d.omega_dot.resize(n);
  d.delta_n.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& p = quad.points[q];
    d.h[q] = h.value(p.x);
    d.J_h[q] = h.jacobian(p.x);
    d.omega_dot[q] = d.J_h[q].trace() - p.n.dot(d.J_h[q] * p.n);
    d.delta_n[q] = -tangential_projector(p.n) * (d.J_h[q].transpose() * p.n);
  }
  return d;
}

namespace {

void check_converged(double residual) {
  if (!(residual < 1e-6))
    throw Error(ErrorCode::NotConverged,
                "material RHS needs a converged base state (residual " +
                    std::to_string(residual) + ")");
}

/// Volume terms -int (curl E)^T a Mdot (curl V) + k^2 int E^T b Ndot V, with
/// per-region complex weights a, b.
void add_volume_terms(const ScatteringSetup& setup, const CVecX& E, const DeformationField& h,
                      bool weighted, CVecX& load) {
  const EdgeSpace& space = *setup.space;
  const Mesh& mesh = space.mesh();
  const WaveParameters& w = setup.wave;
  const auto& rule = tet_rule();
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    double vol = space.geom(t).volume;
    cplx a = weighted ? cplx(w.inv_mu_r(mesh.tet_region[t]), 0.0) : cplx(1.0, 0.0);
    cplx b = weighted ? w.eps_r(mesh.tet_region[t]) : cplx(1.0, 0.0);
    CVec3 curlE = space.eval_curl(E, t);
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      Mat3 J_h = h.jacobian(x);
      if (J_h.isZero(0.0)) continue;
      BulkVariation var = bulk_variation(J_h);
      double wq = qp.w * vol;
      CVec3 Ex = space.eval(E, t, x);
      CVec3 mdot_curlE = var.Mdot.cast<cplx>() * curlE;
      CVec3 ndot_E = var.Ndot.cast<cplx>() * Ex;
      for (int le = 0; le < 6; ++le) {
        Index dof = space.global_edge(t, le);
        load[dof] += wq * (-a * bdot(space.basis_curl(t, le).cast<cplx>(), mdot_curlE) +
                           w.k * w.k * b * bdot(space.basis_value(t, le, x).cast<cplx>(), ndot_E));
      }
    }
  }
}

/// Boundary variation terms shared by the three problems. `sign_g` is +1 for
/// the primal forms (their g term enters with a minus) and -1 for the mixed
/// NPEC form. `lambda_term` adds the impedance group (NIBC only).
void add_boundary_terms(const ScatteringSetup& setup, const CVecX& E,
                        const DeformationSurfaceData& d, bool lambda_term, double sign_g,
                        CVecX& load) {
  const EdgeSpace& space = *setup.space;
  const auto& quad = setup.g_quad;
  const WaveParameters& w = setup.wave;
  const BoundaryResponse& g = *setup.response;
  bool zero_g = g.is_zero();
  cplx iklambda = IM * w.k * w.lambda;
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Index tet = p.tet_plus >= 0 ? p.tet_plus : p.tet_minus;
    CVec3 Efull = space.eval(E, tet, p.x);
    CVec3 zeta = tangential_component(Efull, p.n);
    CVec3 zeta_dot = transported_trace_variation(Efull, p.n, d.delta_n[q], d.J_h[q]);
    CVec3 gval = CVec3::Zero(), gvar = CVec3::Zero();
    if (!zero_g) {
      gval = g.eval(p.x, zeta);
      gvar = g.grad_x(p.x, zeta) * d.h[q].cast<cplx>() + g.dz(p.x, zeta, zeta_dot);
    }
    Mat3 P = tangential_projector(p.n);
    for (int le = 0; le < 6; ++le) {
      Index dof = space.global_edge(tet, le);
      Vec3 Nf = space.basis_value(tet, le, p.x);
      CVec3 NfT = (P * Nf).cast<cplx>();
      CVec3 NfT_dot = transported_trace_variation(Nf.cast<cplx>(), p.n, d.delta_n[q], d.J_h[q]);
      cplx val = 0.0;
      if (lambda_term) {
        val -= iklambda * (bdot(NfT, zeta_dot) + bdot(NfT_dot, zeta) +
                           d.omega_dot[q] * bdot(NfT, zeta));
      }
      if (!zero_g) {
        val += sign_g * (bdot(NfT, gvar) + bdot(NfT_dot, gval) +
                         d.omega_dot[q] * bdot(NfT, gval));
      }
      load[dof] += p.w * val;
    }
  }
}

}  // namespace

CVecX assemble_material_rhs_nibc(const ScatteringSetup& setup, const CVecX& E, double residual,
                                 const DeformationField& h) {
  check_converged(residual);
  CVecX load = CVecX::Zero(setup.space->n_dofs());
  add_volume_terms(setup, E, h, false, load);
  DeformationSurfaceData d = deformation_surface_data(setup.g_quad, h);
  add_boundary_terms(setup, E, d, true, +1.0, load);
  return load;
}

CVecX assemble_material_rhs_ntc(const ScatteringSetup& setup, const CVecX& E, double residual,
                                const DeformationField& h) {
  check_converged(residual);
  CVecX load = CVecX::Zero(setup.space->n_dofs());
  add_volume_terms(setup, E, h, true, load);
  DeformationSurfaceData d = deformation_surface_data(setup.g_quad, h);
  add_boundary_terms(setup, E, d, false, +1.0, load);
  return load;
}

CVecX assemble_material_rhs_npec(const ScatteringSetup& setup, const CVecX& E, const CVecX& Q,
                                 double residual, const DeformationField& h) {
  check_converged(residual);
  const EdgeSpace& space = *setup.space;
  const Mesh& mesh = space.mesh();
  const WaveParameters& w = setup.wave;
  Index n = space.n_dofs();
  CVecX load = CVecX::Zero(2 * n);
  const auto& rule = tet_rule();
  // Volume: -int Q^T Ndot tau + k^2 int E^T Ndot nu.
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    double vol = space.geom(t).volume;
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      Mat3 J_h = h.jacobian(x);
      if (J_h.isZero(0.0)) continue;
      Mat3 Ndot = bulk_variation(J_h).Ndot;
      double wq = qp.w * vol;
      CVec3 Qx = space.eval(Q, t, x);
      CVec3 Ex = space.eval(E, t, x);
      CVec3 ndot_Q = Ndot.cast<cplx>() * Qx;
      CVec3 ndot_E = Ndot.cast<cplx>() * Ex;
      for (int le = 0; le < 6; ++le) {
        Index dof = space.global_edge(t, le);
        CVec3 Nf = space.basis_value(t, le, x).cast<cplx>();
        load[dof] += wq * (-bdot(Nf, ndot_Q));
        load[n + dof] += wq * (w.k * w.k * bdot(Nf, ndot_E));
      }
    }
  }
  // Boundary (tau rows only), mixed-form signs.
  DeformationSurfaceData d = deformation_surface_data(setup.g_quad, h);
  CVecX btau = CVecX::Zero(n);
  add_boundary_terms(setup, E, d, false, -1.0, btau);
  load.head(n) += btau;
  return load;
}

CVecX solve_material(LinearizedSystem& system, const CVecX& rhs) { return system.solve(rhs); }

double npec_mixed_identity_residual(const ScatteringSetup& setup, const CVecX& W, const CVecX& P,
                                    const CVecX& Q, const DeformationField& h) {
  const EdgeSpace& space = *setup.space;
  const Mesh& mesh = space.mesh();
  SpMat M = assemble_mass(space);
  SpMat D = assemble_curl_pairing(space);
  SpMat K = assemble_curl_curl(space);
  CVecX r = M * P - SpMat(D.transpose()) * W;
  const auto& rule = tet_rule();
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    double vol = space.geom(t).volume;
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      Mat3 J_h = h.jacobian(x);
      if (J_h.isZero(0.0)) continue;
      Mat3 Ndot = bulk_variation(J_h).Ndot;
      CVec3 ndot_Q = Ndot.cast<cplx>() * space.eval(Q, t, x);
      double wq = qp.w * vol;
      for (int le = 0; le < 6; ++le)
        r[space.global_edge(t, le)] += wq * bdot(space.basis_value(t, le, x).cast<cplx>(), ndot_Q);
    }
  }
  const auto& on_g = space.surface_edge_mask(SurfaceTag::Gamma);
  const auto& on_gr = space.surface_edge_mask(SurfaceTag::GammaR);
  double num = 0.0;
  for (Index e = 0; e < space.n_dofs(); ++e)
    if (!on_g[e] && !on_gr[e]) num += std::norm(r[e]);
  double p_norm = std::sqrt(std::max(0.0, cplx(P.adjoint() * (M * P)).real()));
  double curlw_norm = std::sqrt(std::max(0.0, cplx(W.adjoint() * (K * W)).real()));
  return std::sqrt(num) / std::max(p_norm + curlw_norm, 1e-300);
}

}  // namespace maxshape
