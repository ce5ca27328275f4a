#include "maxshape/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxshape/errors.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

const char* problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Nibc: return "nibc";
    case ProblemKind::Npec: return "npec";
    case ProblemKind::Ntc: return "ntc";
  }
  return "?";
}

void FixedPointConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorCode::ConfigError, "fixed-point tolerances must be positive");
  if (!(damping > 0.0) || damping > 1.0)
    throw Error(ErrorCode::ConfigError, "damping must be in (0, 1]");
}

std::string ContractionDiagnostics::to_csv() const {
  std::ostringstream os;
  os.precision(16);
  os << "iter,increment_norm,ratio\n";
  for (std::size_t i = 0; i < increments.size(); ++i) {
    os << (i + 1) << "," << increments[i] << ",";
    if (i >= 1) os << ratios[i - 1];
    os << "\n";
  }
  return os.str();
}

CVec3 ScatteringSetup::trace_at(const CVecX& E, std::size_t q) const {
  const auto& p = g_quad.points[q];
  Index tet = p.tet_plus >= 0 ? p.tet_plus : p.tet_minus;
  return tangential_component(space->eval(E, tet, p.x), p.n);
}

CVec3 traced_solution_value(const ScatteringSetup& setup, const CVecX& E, std::size_t q,
                            const BoundaryTransport* transport) {
  CVec3 zeta = setup.trace_at(E, q);
  if (transport) zeta = transport->trace_op[q].cast<cplx>() * zeta;
  return zeta;
}

ScatteringSetup make_setup(const EdgeSpace& space, ProblemKind kind, const WaveParameters& wave,
                           const RadiationOperator& radiation,
                           std::shared_ptr<const BoundaryResponse> response) {
  wave.validate();
  ScatteringSetup s;
  s.kind = kind;
  s.space = &space;
  s.wave = wave;
  s.radiation = radiation;
  s.response = std::move(response);
  s.g_surface = (kind == ProblemKind::Ntc) ? SurfaceTag::Interface : SurfaceTag::Gamma;
  s.g_quad = make_surface_quadrature(space.mesh(), s.g_surface);
  s.gr_quad = make_surface_quadrature(space.mesh(), SurfaceTag::GammaR);
  if (s.g_quad.points.empty())
    throw Error(ErrorCode::ConfigError, std::string("mesh has no ") +
                                            surface_tag_name(s.g_surface) + " triangles");
  return s;
}

AssembledSystem assemble_linear_system(const ScatteringSetup& setup) {
  const EdgeSpace& space = *setup.space;
  const WaveParameters& w = setup.wave;
  AssembledSystem sys;
  SpMat R = assemble_radiation(space, setup.radiation, setup.gr_quad, w.k);
  if (setup.kind == ProblemKind::Ntc) {
    const Mesh& mesh = space.mesh();
    TensorCoefficient inv_mu = [&mesh, &w](Index t, const Vec3&) -> CMat3 {
      return CMat3::Identity() * w.inv_mu_r(mesh.tet_region[t]);
    };
    TensorCoefficient eps = [&mesh, &w](Index t, const Vec3&) -> CMat3 {
      return CMat3::Identity() * w.eps_r(mesh.tet_region[t]);
    };
    sys.matrix = assemble_curl_curl(space, inv_mu) - w.k * w.k * assemble_mass(space, eps) + R;
    sys.form = "A_l^tr";
  } else {
    SpMat K = assemble_curl_curl(space);
    SpMat M = assemble_mass(space);
    sys.matrix = K - w.k * w.k * M + R;
    if (setup.kind == ProblemKind::Nibc) {
      SpMat B = assemble_boundary_mass(space, setup.g_quad);
      sys.matrix += (IM * w.k * w.lambda) * B;
      sys.form = "A_l";
    } else {
      sys.form = "a_pec";
    }
  }
  sys.load = assemble_incident_load(space, setup.radiation, setup.gr_quad, w);
  return sys;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void finalize_diag(ContractionDiagnostics& d) { d.rho_hat = median(d.ratios); }

void check_divergence(const ContractionDiagnostics& d, int window) {
  if (static_cast<int>(d.ratios.size()) < window) return;
  std::vector<double> tail(d.ratios.end() - window, d.ratios.end());
  if (median(tail) >= 1.0)
    throw Error(ErrorCode::NotContracting,
                "increment-ratio median over the last " + std::to_string(window) +
                    " iterations is >= 1");
}

/// E^{m+1} = solve(F + load(E^m)); shared by NIBC and NTC (they differ only
/// through the assembled linear operator and the tagged surface).
PrimalSolution primal_fixed_point(const ScatteringSetup& setup, const AssembledSystem& sys,
                                  const FixedPointConfig& cfg, const BoundaryTransport* transport,
                                  const CVecX* initial) {
  cfg.validate();
  const EdgeSpace& space = *setup.space;
  ComplexLU lu(sys.matrix);
  ContractionDiagnostics diag;
  diag.stability_surrogate = inverse_norm_estimate(lu);
  diag.contraction_surrogate = diag.stability_surrogate * setup.response->lipschitz_bound();

  CVecX E = initial ? *initial : CVecX(lu.solve(sys.load));
  bool zero_g = setup.response->is_zero();
  for (int m = 1; m <= cfg.max_iters; ++m) {
    CVecX rhs = sys.load;
    if (!zero_g)
      rhs += assemble_nonlinear_load(
          space, setup.g_quad, *setup.response,
          [&](std::size_t q, const SurfacePoint&) {
            return traced_solution_value(setup, E, q, transport);
          },
          transport);
    CVecX Enew = lu.solve(rhs);
    if (cfg.damping != 1.0) Enew = E + cfg.damping * (Enew - E);
    double inc = (Enew - E).norm();
    diag.increments.push_back(inc);
    if (diag.increments.size() >= 2) {
      double prev = diag.increments[diag.increments.size() - 2];
      if (prev > 0.0) diag.ratios.push_back(inc / prev);
    }
    E = Enew;
    diag.iterations = m;
    if (inc < cfg.abs_tol || inc < cfg.rel_tol * E.norm()) {
      diag.converged = true;
      break;
    }
    check_divergence(diag, cfg.divergence_window);
  }
  if (!diag.converged)
    throw Error(ErrorCode::MaxItersExceeded,
                "fixed point did not converge in " + std::to_string(cfg.max_iters) + " iterations");
  finalize_diag(diag);
  diag.residual = primal_residual(setup, sys, E, transport);
  return PrimalSolution{E, diag};
}

}  // namespace

PrimalSolution solve_primal_system(const ScatteringSetup& setup, const AssembledSystem& sys,
                                   const FixedPointConfig& cfg, const BoundaryTransport* transport,
                                   const CVecX* initial) {
  return primal_fixed_point(setup, sys, cfg, transport, initial);
}

double primal_residual(const ScatteringSetup& setup, const AssembledSystem& linear, const CVecX& E,
                       const BoundaryTransport* transport) {
  CVecX r = linear.matrix * E - linear.load;
  if (!setup.response->is_zero())
    r -= assemble_nonlinear_load(
        *setup.space, setup.g_quad, *setup.response,
        [&](std::size_t q, const SurfacePoint&) {
          return traced_solution_value(setup, E, q, transport);
        },
        transport);
  double fn = linear.load.norm();
  return fn > 0.0 ? r.norm() / fn : r.norm();
}

PrimalSolution solve_nibc(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                          const CVecX* initial) {
  return primal_fixed_point(setup, assemble_linear_system(setup), cfg, nullptr, initial);
}

PrimalSolution solve_ntc(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                         const CVecX* initial) {
  return primal_fixed_point(setup, assemble_linear_system(setup), cfg, nullptr, initial);
}

CVecX solve_linear_folded(const ScatteringSetup& setup, cplx c) {
  AssembledSystem sys = assemble_linear_system(setup);
  SpMat B = assemble_boundary_mass(*setup.space, setup.g_quad);
  SpMat A = sys.matrix - c * B;
  ComplexLU lu(A);
  return lu.solve(sys.load);
}

// ---------------------------------------------------------------------------
// NPEC (lifting form)
// ---------------------------------------------------------------------------

namespace {

struct X0Reduction {
  std::vector<Index> reduced_of_full;
  std::vector<Index> full_of_reduced;

  explicit X0Reduction(const EdgeSpace& space, SurfaceTag tag) {
    const auto& mask = space.surface_edge_mask(tag);
    reduced_of_full.assign(space.n_dofs(), -1);
    for (Index e = 0; e < space.n_dofs(); ++e)
      if (!mask[e]) {
        reduced_of_full[e] = static_cast<Index>(full_of_reduced.size());
        full_of_reduced.push_back(e);
      }
  }

  SpMat reduce(const SpMat& A) const {
    std::vector<Triplet> trips;
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it) {
        Index r = reduced_of_full[it.row()], c = reduced_of_full[it.col()];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    SpMat R(full_of_reduced.size(), full_of_reduced.size());
    R.setFromTriplets(trips.begin(), trips.end());
    R.makeCompressed();
    return R;
  }

  CVecX restrict_vec(const CVecX& v) const {
    CVecX r(full_of_reduced.size());
    for (std::size_t i = 0; i < full_of_reduced.size(); ++i) r[i] = v[full_of_reduced[i]];
    return r;
  }
};

}  // namespace

NpecSolution solve_npec(const ScatteringSetup& setup, const FixedPointConfig& cfg,
                        const CVecX* initial) {
  return solve_npec_system(setup, assemble_linear_system(setup), cfg, nullptr, initial);
}

NpecSolution solve_npec_system(const ScatteringSetup& setup, const AssembledSystem& sys,
                               const FixedPointConfig& cfg, const Diffeomorphism* phi,
                               const CVecX* initial) {
  cfg.validate();
  const EdgeSpace& space = *setup.space;
  LiftingOperator lift(space, SurfaceTag::Gamma);
  X0Reduction red(space, SurfaceTag::Gamma);
  ComplexLU lu(red.reduce(sys.matrix), ErrorCode::SingularSystem);

  ContractionDiagnostics diag;
  diag.stability_surrogate = inverse_norm_estimate(lu);
  diag.contraction_surrogate = diag.stability_surrogate * setup.response->lipschitz_bound();

  auto solve_given = [&](const CVecX& U) -> CVecX {
    CVecX w;
    if (setup.response->is_zero())
      w = CVecX::Zero(space.n_dofs());
    else
      w = lift.extend(lift.boundary_dofs_response(U, *setup.response, phi));
    CVecX rhs = red.restrict_vec(sys.load - sys.matrix * w);
    CVecX e0 = lu.solve(rhs);
    CVecX E = w;
    for (std::size_t i = 0; i < red.full_of_reduced.size(); ++i)
      E[red.full_of_reduced[i]] += e0[i];
    return E;
  };

  CVecX E = initial ? *initial : solve_given(CVecX::Zero(space.n_dofs()));
  for (int m = 1; m <= cfg.max_iters; ++m) {
    CVecX Enew = solve_given(E);
    if (cfg.damping != 1.0) Enew = E + cfg.damping * (Enew - E);
    double inc = (Enew - E).norm();
    diag.increments.push_back(inc);
    if (diag.increments.size() >= 2) {
      double prev = diag.increments[diag.increments.size() - 2];
      if (prev > 0.0) diag.ratios.push_back(inc / prev);
    }
    E = Enew;
    diag.iterations = m;
    if (inc < cfg.abs_tol || inc < cfg.rel_tol * E.norm()) {
      diag.converged = true;
      break;
    }
    check_divergence(diag, cfg.divergence_window);
  }
  if (!diag.converged)
    throw Error(ErrorCode::MaxItersExceeded, "NPEC fixed point did not converge");
  finalize_diag(diag);

  // Boundary condition check: gamma_t E = g(., gamma_T E) at Gamma DoFs.
  CVecX target = setup.response->is_zero()
                     ? CVecX(CVecX::Zero(space.n_dofs()))
                     : CVecX(lift.boundary_dofs_response(E, *setup.response, phi));
  double num = 0.0, den = std::max(E.norm(), 1e-300);
  for (Index e : lift.boundary_edges()) num += std::norm(E[e] - target[e]);
  diag.boundary_residual = std::sqrt(num) / den;

  // Interior Galerkin residual.
  CVecX r = red.restrict_vec(sys.matrix * E - sys.load);
  double fn = sys.load.norm();
  diag.residual = fn > 0.0 ? r.norm() / fn : r.norm();

  // Q = L2 projection of curl E.
  SpMat M = assemble_mass(space);
  SpMat D = assemble_curl_pairing(space);
  ComplexLU mlu(M);
  CVecX Q = mlu.solve(D * E);
  return NpecSolution{E, Q, diag};
}

CVecX solve_npec_linear_folded(const ScatteringSetup& setup, cplx c) {
  const EdgeSpace& space = *setup.space;
  AssembledSystem sys = assemble_linear_system(setup);
  LiftingOperator lift(space, SurfaceTag::Gamma);
  const auto& mask = space.surface_edge_mask(SurfaceTag::Gamma);
  std::vector<Triplet> trips;
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (SpMat::InnerIterator it(sys.matrix, k); it; ++it)
      if (!mask[it.row()]) trips.emplace_back(it.row(), it.col(), it.value());
  lift.append_linear_constraint_rows(trips, c);
  SpMat A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  CVecX rhs = sys.load;
  for (Index e : lift.boundary_edges()) rhs[e] = 0.0;
  ComplexLU lu(A);
  return lu.solve(rhs);
}

// ---------------------------------------------------------------------------
// NPEC (mixed form)
// ---------------------------------------------------------------------------

SpMat assemble_curl_pairing(const EdgeSpace& space) {
  const auto& rule = tet_rule();
  const Mesh& mesh = space.mesh();
  std::vector<Triplet> trips;
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    double vol = space.geom(t).volume;
    std::array<Vec3, 6> curls;
    std::array<Index, 6> dofs;
    for (int le = 0; le < 6; ++le) {
      curls[le] = space.basis_curl(t, le);
      dofs[le] = space.global_edge(t, le);
    }
    Eigen::Matrix<double, 6, 6> Dl = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      double w = qp.w * vol;
      for (int f = 0; f < 6; ++f) {
        Vec3 nf = space.basis_value(t, f, x);
        for (int e = 0; e < 6; ++e) Dl(f, e) += w * nf.dot(curls[e]);
      }
    }
    for (int f = 0; f < 6; ++f)
      for (int e = 0; e < 6; ++e)
        if (Dl(f, e) != 0.0) trips.emplace_back(dofs[f], dofs[e], cplx(Dl(f, e), 0.0));
  }
  SpMat D(space.n_dofs(), space.n_dofs());
  D.setFromTriplets(trips.begin(), trips.end());
  D.makeCompressed();
  return D;
}

MixedNpecSystem build_mixed_npec(const ScatteringSetup& setup, const TensorCoefficient& Nh,
                                 const BoundaryTransport* transport) {
  (void)transport;
  const EdgeSpace& space = *setup.space;
  Index n = space.n_dofs();
  SpMat Mn = assemble_mass(space, Nh);
  SpMat D = assemble_curl_pairing(space);
  SpMat Rinv = assemble_radiation_inverse(space, setup.radiation, setup.gr_quad, setup.wave.k);

  std::vector<Triplet> trips;
  auto add_block = [&](const SpMat& A, Index roff, Index coff, cplx scale) {
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it)
        trips.emplace_back(roff + it.row(), coff + it.col(), scale * it.value());
  };
  SpMat Dt = SpMat(D.transpose());
  add_block(Dt, 0, 0, cplx(-1.0, 0.0));          // tau row, E col: -int E . curl tau
  add_block(Mn, 0, n, cplx(1.0, 0.0));           // tau row, Q col
  add_block(Rinv, 0, n, cplx(1.0, 0.0));         // GammaR block on Q
  add_block(Mn, n, 0, cplx(-setup.wave.k * setup.wave.k, 0.0));  // nu row, E col
  add_block(D, n, n, cplx(1.0, 0.0));            // nu row, Q col

  MixedNpecSystem sys;
  sys.n = n;
  sys.S.resize(2 * n, 2 * n);
  sys.S.setFromTriplets(trips.begin(), trips.end());
  sys.S.makeCompressed();
  sys.F = CVecX::Zero(2 * n);
  sys.F.head(n) = assemble_incident_load_mixed(space, setup.radiation, setup.gr_quad, setup.wave);
  return sys;
}

MixedSolution solve_npec_mixed_system(const ScatteringSetup& setup, const MixedNpecSystem& sys,
                                      const FixedPointConfig& cfg,
                                      const BoundaryTransport* transport) {
  cfg.validate();
  const EdgeSpace& space = *setup.space;
  Index n = sys.n;
  ComplexLU lu(sys.S);
  ContractionDiagnostics diag;
  diag.stability_surrogate = inverse_norm_estimate(lu);
  diag.contraction_surrogate = diag.stability_surrogate * setup.response->lipschitz_bound();

  auto g_load = [&](const CVecX& EQ) -> CVecX {
    CVecX rhs = sys.F;
    if (!setup.response->is_zero()) {
      CVecX E = EQ.head(n);
      // Mixed form carries +int g . gamma_T tau, so it moves to the RHS with
      // a minus sign.
      CVecX gl = assemble_nonlinear_load(
          space, setup.g_quad, *setup.response,
          [&](std::size_t q, const SurfacePoint& pt) -> CVec3 {
            Index tet = pt.tet_plus >= 0 ? pt.tet_plus : pt.tet_minus;
            CVec3 full = space.eval(E, tet, pt.x);
            CVec3 zeta = tangential_component(full, pt.n);
            if (transport) zeta = transport->trace_op[q].cast<cplx>() * zeta;
            return zeta;
          },
          transport);
      rhs.head(n) -= gl;
    }
    return rhs;
  };

  CVecX EQ = lu.solve(sys.F);
  for (int m = 1; m <= cfg.max_iters; ++m) {
    CVecX next = lu.solve(g_load(EQ));
    if (cfg.damping != 1.0) next = EQ + cfg.damping * (next - EQ);
    double inc = (next - EQ).norm();
    diag.increments.push_back(inc);
    if (diag.increments.size() >= 2) {
      double prev = diag.increments[diag.increments.size() - 2];
      if (prev > 0.0) diag.ratios.push_back(inc / prev);
    }
    EQ = next;
    diag.iterations = m;
    if (inc < cfg.abs_tol || inc < cfg.rel_tol * EQ.norm()) {
      diag.converged = true;
      break;
    }
    check_divergence(diag, cfg.divergence_window);
  }
  if (!diag.converged)
    throw Error(ErrorCode::MaxItersExceeded, "mixed NPEC fixed point did not converge");
  finalize_diag(diag);
  CVecX r = sys.S * EQ - g_load(EQ);
  double fn = sys.F.norm();
  diag.residual = fn > 0.0 ? r.norm() / fn : r.norm();
  return MixedSolution{EQ.head(n), EQ.tail(n), diag};
}

MixedSolution solve_npec_mixed(const ScatteringSetup& setup, const FixedPointConfig& cfg) {
  MixedNpecSystem sys = build_mixed_npec(setup, nullptr, nullptr);
  return solve_npec_mixed_system(setup, sys, cfg, nullptr);
}

}  // namespace maxshape
