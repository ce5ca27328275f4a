#include "maxshape/pullback.hpp"

#include "maxshape/errors.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

PullbackData make_pullback_data(const ScatteringSetup& setup, const DeformationField& h, double t) {
  PullbackData pb;
  pb.phi = build_diffeomorphism(h, t, setup.space->mesh());
  if (t == 0.0) {
    pb.Mh = nullptr;
    pb.Nh = nullptr;
    pb.transport = BoundaryTransport::identity(setup.g_quad);
    return pb;
  }
  const Mesh& mesh = setup.space->mesh();
  const WaveParameters wave = setup.wave;
  bool weighted = setup.kind == ProblemKind::Ntc;
  Diffeomorphism phi = pb.phi;
  pb.Mh = [phi, weighted, wave, &mesh](Index tet, const Vec3& x) -> CMat3 {
    Mat3 J = phi.jac(x);
    BulkKit kit = bulk_coefficients(J, J.determinant());
    cplx w = weighted ? cplx(wave.inv_mu_r(mesh.tet_region[tet]), 0.0) : cplx(1.0, 0.0);
    return w * kit.M.cast<cplx>();
  };
  pb.Nh = [phi, weighted, wave, &mesh](Index tet, const Vec3& x) -> CMat3 {
    Mat3 J = phi.jac(x);
    BulkKit kit = bulk_coefficients(J, J.determinant());
    cplx w = weighted ? wave.eps_r(mesh.tet_region[tet]) : cplx(1.0, 0.0);
    return w * kit.N.cast<cplx>();
  };
  const auto& pts = setup.g_quad.points;
  pb.transport.trace_op.resize(pts.size());
  pb.transport.weight.resize(pts.size());
  pb.transport.xmap.resize(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) {
    Mat3 J = phi.jac(pts[q].x);
    SurfaceKit kit = surface_kit_algebraic(J, J.determinant(), pts[q].n, h.jacobian(pts[q].x));
    pb.transport.trace_op[q] = kit.P_h * kit.JinvT * tangential_projector(pts[q].n);
    pb.transport.weight[q] = kit.omega;
    pb.transport.xmap[q] = phi.phi(pts[q].x);
  }
  return pb;
}

AssembledSystem assemble_pulled_back_system(const ScatteringSetup& setup, const PullbackData& pb) {
  if (pb.phi.is_identity()) return assemble_linear_system(setup);
  const EdgeSpace& space = *setup.space;
  const WaveParameters& w = setup.wave;
  AssembledSystem sys;
  SpMat R = assemble_radiation(space, setup.radiation, setup.gr_quad, w.k);
  sys.matrix = assemble_curl_curl(space, pb.Mh) - w.k * w.k * assemble_mass(space, pb.Nh) + R;
  if (setup.kind == ProblemKind::Nibc) {
    SpMat B = assemble_boundary_mass(space, setup.g_quad, &pb.transport);
    sys.matrix += (IM * w.k * w.lambda) * B;
    sys.form = "A~_h";
  } else if (setup.kind == ProblemKind::Ntc) {
    sys.form = "A~_h^tr";
  } else {
    sys.form = "a~_h,pec";
  }
  // h vanishes near GammaR, so the excitation functional is invariant.
  sys.load = assemble_incident_load(space, setup.radiation, setup.gr_quad, w);
  return sys;
}

PullbackSolution pullback_solve(const ScatteringSetup& setup, const DeformationField& h, double t,
                                const FixedPointConfig& cfg, bool mixed_npec) {
  PullbackData pb = make_pullback_data(setup, h, t);
  bool base = pb.phi.is_identity();
  if (setup.kind == ProblemKind::Npec) {
    if (mixed_npec) {
      MixedNpecSystem sys = build_mixed_npec(setup, pb.Nh, base ? nullptr : &pb.transport);
      MixedSolution sol =
          solve_npec_mixed_system(setup, sys, cfg, base ? nullptr : &pb.transport);
      return PullbackSolution{sol.E, sol.Q, sol.diag};
    }
    AssembledSystem sys = assemble_pulled_back_system(setup, pb);
    NpecSolution sol = solve_npec_system(setup, sys, cfg, base ? nullptr : &pb.phi);
    return PullbackSolution{sol.E, sol.Q, sol.diag};
  }
  AssembledSystem sys = assemble_pulled_back_system(setup, pb);
  PrimalSolution sol = solve_primal_system(setup, sys, cfg, base ? nullptr : &pb.transport);
  return PullbackSolution{sol.E, CVecX(), sol.diag};
}

CVecX apply_pulled_back_form(const ScatteringSetup& setup, const PullbackData& pb, const CVecX& E) {
  AssembledSystem sys = assemble_pulled_back_system(setup, pb);
  CVecX v = sys.matrix * E;
  const BoundaryTransport* tp = pb.phi.is_identity() ? nullptr : &pb.transport;
  if (!setup.response->is_zero()) {
    // Both primal forms carry -int g . gamma_T V.
    v -= assemble_nonlinear_load(
        *setup.space, setup.g_quad, *setup.response,
        [&](std::size_t q, const SurfacePoint&) { return traced_solution_value(setup, E, q, tp); },
        tp);
  }
  return v;
}

CVecX apply_pulled_back_mixed_form(const ScatteringSetup& setup, const PullbackData& pb,
                                   const CVecX& E, const CVecX& Q) {
  const BoundaryTransport* tp = pb.phi.is_identity() ? nullptr : &pb.transport;
  MixedNpecSystem sys = build_mixed_npec(setup, pb.Nh, tp);
  CVecX eq(2 * sys.n);
  eq.head(sys.n) = E;
  eq.tail(sys.n) = Q;
  CVecX v = sys.S * eq;
  if (!setup.response->is_zero()) {
    // The mixed form carries +int g . gamma_T tau.
    v.head(sys.n) += assemble_nonlinear_load(
        *setup.space, setup.g_quad, *setup.response,
        [&](std::size_t q, const SurfacePoint&) { return traced_solution_value(setup, E, q, tp); },
        tp);
  }
  return v;
}

}  // namespace maxshape
