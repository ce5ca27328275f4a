#include "maxshape/shape_derivative.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "maxshape/errors.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

// ---------------------------------------------------------------------------
// TransportTerm
// ---------------------------------------------------------------------------

TransportTerm::TransportTerm(const EdgeSpace& space, const CVecX& E, int region)
    : space_(&space), E_(E) {
  const Mesh& mesh = space.mesh();
  Index nv = mesh.n_vertices();
  const auto& rule = tet_rule();
  std::vector<TripletR> trips;
  Eigen::Matrix<cplx, Eigen::Dynamic, 3> rhs(nv, 3);
  rhs.setZero();
  std::vector<char> used(nv, 0);
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    if (region >= 0 && mesh.tet_region[t] != region) continue;
    double vol = space.geom(t).volume;
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      CVec3 ev = space.eval(E, t, x);
      double w = qp.w * vol;
      for (int i = 0; i < 4; ++i) {
        Index vi = mesh.tets[t][i];
        used[vi] = 1;
        double phi_i = qp.bary[i];
        rhs.row(vi) += w * phi_i * ev.transpose();
        for (int j = 0; j < 4; ++j)
          trips.emplace_back(vi, mesh.tets[t][j], w * phi_i * qp.bary[j]);
      }
    }
  }
  // Unused vertices (other region) get a unit diagonal and zero rhs.
  for (Index v = 0; v < nv; ++v)
    if (!used[v]) trips.emplace_back(v, v, 1.0);
  SpMatR M1(nv, nv);
  M1.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMatR> ldlt(M1);
  if (ldlt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem, "P1 mass factorization failed");
  nodal_.resize(nv, 3);
  for (int c = 0; c < 3; ++c) {
    VecX re = ldlt.solve(VecX(rhs.col(c).real()));
    VecX im = ldlt.solve(VecX(rhs.col(c).imag()));
    for (Index v = 0; v < nv; ++v) nodal_(v, c) = cplx(re[v], im[v]);
  }
}

CVec3 TransportTerm::p1_value(Index tet, const Vec3& x) const {
  const Mesh& mesh = space_->mesh();
  auto l = space_->barycentric(tet, x);
  CVec3 v = CVec3::Zero();
  for (int i = 0; i < 4; ++i) v += l[i] * nodal_.row(mesh.tets[tet][i]).transpose();
  return v;
}

CMat3 TransportTerm::p1_gradient(Index tet) const {
  const Mesh& mesh = space_->mesh();
  const TetGeom& g = space_->geom(tet);
  CMat3 J = CMat3::Zero();  // J_ij = d E_i / d x_j
  for (int i = 0; i < 4; ++i) {
    CVec3 val = nodal_.row(mesh.tets[tet][i]).transpose();
    J += val * g.grad_lambda[i].transpose().cast<cplx>();
  }
  return J;
}

CVec3 TransportTerm::value(Index tet, const Vec3& x, const DeformationField& h) const {
  CVec3 jhte = h.jacobian(x).transpose().cast<cplx>() * space_->eval(E_, tet, x);
  return jhte + p1_gradient(tet) * h.value(x).cast<cplx>();
}

CVecX recover_shape_derivative(const EdgeSpace& space, const CVecX& W, const CVecX& E,
                               const DeformationField& h) {
  TransportTerm transport(space, E);
  const Mesh& mesh = space.mesh();
  // One adjacent tet per edge for interpolation.
  std::vector<Index> edge_tet(space.n_dofs(), -1);
  for (Index t = 0; t < mesh.n_tets(); ++t)
    for (int le = 0; le < 6; ++le)
      if (edge_tet[mesh.tet_edges[t][le]] < 0) edge_tet[mesh.tet_edges[t][le]] = t;
  CVecX dofs(space.n_dofs());
  for (Index e = 0; e < space.n_dofs(); ++e) {
    Index t = edge_tet[e];
    dofs[e] = space.interpolate_edge(e, [&](const Vec3& x) -> CVec3 {
      return space.eval(W, t, x) - transport.value(t, x, h);
    });
  }
  return dofs;
}

// ---------------------------------------------------------------------------
// Hadamard data and the boundary formulas
// ---------------------------------------------------------------------------

namespace {

/// h.n evaluated distributively over deformation sums so that declared
/// sphere-tangential parts contribute an exact zero.
double normal_speed(const DeformationField& h, const Vec3& x, const Vec3& n) {
  if (h.sphere_tangential) return 0.0;
  if (!h.summands.empty()) {
    double s = 0.0;
    for (const auto& [c, part] : h.summands) s += c * normal_speed(*part, x, n);
    return s;
  }
  return h.value(x).dot(n);
}

}  // namespace

HadamardData make_hadamard_data(const ScatteringSetup& setup, const AnalyticSurface& surface,
                                const DeformationField& h) {
  const Mesh& mesh = setup.space->mesh();
  const auto& quad = setup.g_quad;
  const auto& tris = mesh.surface(setup.g_surface);
  HadamardData had;
  had.hn.resize(quad.points.size());
  had.grad_hn.resize(quad.points.size());
  had.hn_vertex.assign(mesh.n_vertices(), 0.0);
  std::vector<char> seen(mesh.n_vertices(), 0);
  for (const auto& tri : tris)
    for (Index v : tri.v)
      if (!seen[v]) {
        seen[v] = 1;
        had.hn_vertex[v] = normal_speed(h, mesh.vertices[v], surface.normal(mesh.vertices[v]));
      }
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    had.hn[q] = normal_speed(h, p.x, surface.normal(p.x));
    const auto& tri = tris[p.tri];
    TriOps ops = TriOps::from(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                              mesh.vertices[tri.v[2]]);
    had.grad_hn[q] = ops.surface_gradient(std::array<double, 3>{
        had.hn_vertex[tri.v[0]], had.hn_vertex[tri.v[1]], had.hn_vertex[tri.v[2]]});
  }
  return had;
}

namespace {

/// One-sided samples along +n (into the domain carrying the field).
struct NormalSampler {
  const EdgeSpace& space;
  const TetLocator& locator;
  double step;
  Vec3 x0;
  Vec3 n;
  Index tet0;

  /// f evaluated at x0, x0 + d n, x0 + 2d n; extrapolated derivative
  /// (-3 f0 + 4 f1 - f2) / (2d).
  template <typename F>
  CVec3 derivative(const F& f) const {
    Index t1 = locator.locate(x0 + step * n);
    Index t2 = locator.locate(x0 + 2.0 * step * n);
    if (t1 < 0 || t2 < 0)
      throw Error(ErrorCode::EvaluationOutOfDomain, "normal-derivative sample left the mesh");
    CVec3 f0 = f(tet0, x0);
    CVec3 f1 = f(t1, x0 + step * n);
    CVec3 f2 = f(t2, x0 + 2.0 * step * n);
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step);
  }
};

double facet_size(const Mesh& mesh, const SurfaceTri& tri) {
  double s = 0.0;
  for (int e = 0; e < 3; ++e)
    s += (mesh.vertices[tri.v[e]] - mesh.vertices[tri.v[(e + 1) % 3]]).norm();
  return s / 3.0;
}

}  // namespace

ShapeDataField extract_shape_data(const ScatteringSetup& setup, const CVecX& E,
                                  const TetLocator& locator, const AnalyticSurface& surface) {
  const EdgeSpace& space = *setup.space;
  const Mesh& mesh = space.mesh();
  const auto& quad = setup.g_quad;
  const auto& tris = mesh.surface(setup.g_surface);
  const WaveParameters& w = setup.wave;
  bool ntc = setup.kind == ProblemKind::Ntc;
  const BoundaryResponse& g = *setup.response;

  ShapeDataField d;
  std::size_t nq = quad.points.size();
  d.gammaT_E.resize(nq);
  d.En.resize(nq);
  d.curl_gamma.resize(nq);
  d.gammaT_curlE.resize(nq);
  d.dn_gammaT_E.resize(nq);
  d.g_val.resize(nq);
  d.dn_g.resize(nq);

  std::vector<cplx> curl_gamma_tri(tris.size()), en_tri(tris.size(), 0.0);
  for (std::size_t q = 0; q < nq; ++q) {
    const auto& p = quad.points[q];
    Vec3 n = surface.normal(p.x);
    Index tp = p.tet_plus;
    CVec3 Efull = space.eval(E, tp, p.x);
    CVec3 zeta = tangential_component(Efull, n);
    d.gammaT_E[q] = zeta;
    CVec3 curl_p = space.eval_curl(E, tp);
    d.gammaT_curlE[q] = tangential_component(curl_p, n);
    cplx curl_gamma_plus = bdot(n, curl_p);
    cplx en_plus = bdot(n, Efull);
    if (!ntc) {
      d.En[q] = en_plus;
      d.curl_gamma[q] = curl_gamma_plus;
    } else {
      Index tm = p.tet_minus;
      CVec3 Em = space.eval(E, tm, p.x);
      CVec3 curl_m = space.eval_curl(E, tm);
      d.En[q] = en_plus - bdot(n, Em);  // [n.E]
      // [mu^-1 curl_Gamma gamma_T E]; the surface curl itself is single-
      // valued, the weight jumps.
      d.curl_gamma[q] =
          w.inv_mu_r(mesh.tet_region[tp]) * curl_gamma_plus -
          w.inv_mu_r(mesh.tet_region[tm]) * bdot(n, curl_m);
      d.gammaT_curlE[q] -= tangential_component(curl_m, n);  // jump
    }

    double step = 0.5 * facet_size(mesh, tris[p.tri]);
    NormalSampler sampler{space, locator, step, p.x, n, tp};
    d.dn_gammaT_E[q] = sampler.derivative([&](Index t, const Vec3& x) -> CVec3 {
      return tangential_component(space.eval(E, t, x), n);
    });
    if (!g.is_zero()) {
      d.g_val[q] = g.eval(p.x, zeta);
      double gstep = std::min(step, 0.45 * g.tube_radius());
      NormalSampler gs{space, locator, gstep, p.x, n, tp};
      d.dn_g[q] = gs.derivative([&](Index t, const Vec3& x) -> CVec3 {
        return g.eval(x, tangential_component(space.eval(E, t, x), n));
      });
    } else {
      d.g_val[q] = CVec3::Zero();
      d.dn_g[q] = CVec3::Zero();
    }
    curl_gamma_tri[p.tri] += d.curl_gamma[q] / 3.0;
    en_tri[p.tri] += d.En[q] / 3.0;
  }
  d.curl_gamma_vertex = average_to_vertices(mesh, setup.g_surface, curl_gamma_tri, cplx(0.0));
  d.En_vertex = average_to_vertices(mesh, setup.g_surface, en_tri, cplx(0.0));
  return d;
}

double ShapeBoundaryData::main_l2(const SurfaceQuadrature& quad) const {
  double s = 0.0;
  for (std::size_t q = 0; q < main.size(); ++q) s += quad.points[q].w * main[q].squaredNorm();
  return std::sqrt(s);
}

ShapeBoundaryData shape_boundary_data(const ScatteringSetup& setup, const ShapeDataField& data,
                                      const HadamardData& had, const AnalyticSurface& surface) {
  const Mesh& mesh = setup.space->mesh();
  const auto& quad = setup.g_quad;
  const auto& tris = mesh.surface(setup.g_surface);
  const WaveParameters& w = setup.wave;
  const BoundaryResponse& g = *setup.response;
  bool has_g = !g.is_zero();
  cplx iklambda = IM * w.k * w.lambda;

  ShapeBoundaryData out;
  out.main.assign(quad.points.size(), CVec3::Zero());
  if (setup.kind == ProblemKind::Ntc) out.jump.assign(quad.points.size(), CVec3::Zero());

  // Facet-wise Curl_Gamma(h_n psi) terms from nodal reconstructions.
  std::vector<CVec3> curl_term(tris.size(), CVec3::Zero());  // Curl_G(h_n curl_G gamma_T E)
  std::vector<CVec3> curl_en(tris.size(), CVec3::Zero());    // Curl_G(h_n E_n or [n.E])
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& tri = tris[f];
    TriOps ops = TriOps::from(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                              mesh.vertices[tri.v[2]]);
    std::array<cplx, 3> psi1, psi2;
    for (int i = 0; i < 3; ++i) {
      double hv = had.hn_vertex[tri.v[i]];
      psi1[i] = hv * data.curl_gamma_vertex[tri.v[i]];
      psi2[i] = hv * data.En_vertex[tri.v[i]];
    }
    curl_term[f] = ops.surface_vector_curl(psi1);
    curl_en[f] = ops.surface_vector_curl(psi2);
  }

  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Vec3 x = p.x;
    double hn = had.hn[q];
    Vec3 ghn = had.grad_hn[q];
    Mat3 S = surface.shape_operator(x);
    double curv = surface.additive_curvature(x);
    CVec3 val = CVec3::Zero();
    if (setup.kind == ProblemKind::Nibc) {
      val -= curl_term[p.tri];
      val -= hn * w.k * w.k * data.gammaT_E[q];
      val -= iklambda * (data.En[q] * ghn.cast<cplx>() +
                         hn * (data.dn_gammaT_E[q] - S.cast<cplx>() * data.gammaT_E[q]));
      val -= iklambda * hn * curv * data.gammaT_E[q];
      if (has_g) {
        val += hn * (data.dn_g[q] - S.cast<cplx>() * data.g_val[q]);
        val += hn * curv * data.g_val[q];
        val += g.dz(x, data.gammaT_E[q], data.En[q] * ghn.cast<cplx>());
      }
    } else if (setup.kind == ProblemKind::Npec) {
      val -= curl_en[p.tri];
      val -= hn * data.gammaT_curlE[q];
      if (has_g) {
        val += hn * (data.dn_g[q] - S.cast<cplx>() * data.g_val[q]);
        val += hn * curv * data.g_val[q];
        val += g.dz(x, data.gammaT_E[q], data.En[q] * ghn.cast<cplx>());
      }
    } else {  // Ntc
      val -= curl_term[p.tri];  // -Curl_G(h_n [mu^-1 curl_G gamma_T E])
      cplx eps_jump = cplx(1.0, 0.0) - w.eps_r(1);  // [eps_r] = eps^+ - eps^-
      val -= hn * w.k * w.k * eps_jump * data.gammaT_E[q];
      if (has_g) {
        val += hn * (data.dn_g[q] - S.cast<cplx>() * data.g_val[q]);
        val += hn * curv * data.g_val[q];
        val += g.dz(x, data.gammaT_E[q], data.En[q] * ghn.cast<cplx>());
      }
      out.jump[q] = -curl_en[p.tri] - hn * data.gammaT_curlE[q];
    }
    out.main[q] = val;
  }
  return out;
}

CVecX solve_shape_bvp(const ScatteringSetup& setup, const AssembledSystem& linear, const CVecX& E,
                      const ShapeBoundaryData& data) {
  LinearizedSystem sys = build_linearized_primal(setup, linear, E);
  CVecX rhs = assemble_surface_load(
      *setup.space, setup.g_quad,
      [&](std::size_t q, const SurfacePoint&) -> CVec3 { return data.main[q]; });
  return sys.solve(rhs);
}

ShapeBvpReport verify_shape_bvp(const ScatteringSetup& setup, const CVecX& E_base,
                                const CVecX& deltaE, const ShapeBoundaryData& data) {
  const EdgeSpace& space = *setup.space;
  const WaveParameters& w = setup.wave;
  const BoundaryResponse& g = *setup.response;
  ShapeBvpReport rep;
  rep.data_norm = data.main_l2(setup.g_quad);

  double num = 0.0;
  for (std::size_t q = 0; q < setup.g_quad.points.size(); ++q) {
    const auto& p = setup.g_quad.points[q];
    Index tp = p.tet_plus;
    CVec3 lhs;
    CVec3 gz = g.is_zero() ? CVec3(CVec3::Zero())
                           : g.dz(p.x, setup.trace_at(E_base, q), setup.trace_at(deltaE, q));
    if (setup.kind == ProblemKind::Npec) {
      lhs = tangential_trace(space.eval(deltaE, tp, p.x), p.n) - gz;
    } else if (setup.kind == ProblemKind::Ntc) {
      const Mesh& mesh = space.mesh();
      lhs = w.inv_mu_r(mesh.tet_region[tp]) *
                tangential_trace(space.eval_curl(deltaE, tp), p.n) -
            w.inv_mu_r(mesh.tet_region[p.tet_minus]) *
                tangential_trace(space.eval_curl(deltaE, p.tet_minus), p.n) -
            gz;
    } else {
      lhs = tangential_trace(space.eval_curl(deltaE, tp), p.n) +
            IM * w.k * w.lambda * tangential_component(space.eval(deltaE, tp, p.x), p.n) - gz;
    }
    num += p.w * (lhs - data.main[q]).squaredNorm();
  }
  rep.boundary_rel = std::sqrt(num) / std::max(rep.data_norm, 1e-300);

  // Interior weak residual of curl curl - k^2 (material-weighted for NTC).
  SpMat K, M;
  if (setup.kind == ProblemKind::Ntc) {
    const Mesh& mesh = space.mesh();
    K = assemble_curl_curl(space, [&](Index t, const Vec3&) -> CMat3 {
      return CMat3::Identity() * w.inv_mu_r(mesh.tet_region[t]);
    });
    M = assemble_mass(space, [&](Index t, const Vec3&) -> CMat3 {
      return CMat3::Identity() * w.eps_r(mesh.tet_region[t]);
    });
  } else {
    K = assemble_curl_curl(space);
    M = assemble_mass(space);
  }
  CVecX r = K * deltaE - w.k * w.k * (M * deltaE);
  const auto& on_g = space.surface_edge_mask(setup.g_surface);
  const auto& on_gr = space.surface_edge_mask(SurfaceTag::GammaR);
  double rnum = 0.0;
  for (Index e = 0; e < space.n_dofs(); ++e)
    if (!on_g[e] && !on_gr[e]) rnum += std::norm(r[e]);
  rep.volume_rel = std::sqrt(rnum) / std::max(r.norm(), 1e-300);
  return rep;
}

double ntc_jump_residual(const ScatteringSetup& setup, const CVecX& W, const CVecX& E,
                         const DeformationField& h, const ShapeBoundaryData& data) {
  const EdgeSpace& space = *setup.space;
  TransportTerm plus(space, E, 0), minus(space, E, 1);
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < setup.g_quad.points.size(); ++q) {
    const auto& p = setup.g_quad.points[q];
    // [n x dE] = -n x [transport] since W has a continuous tangential trace.
    CVec3 dE_p = space.eval(W, p.tet_plus, p.x) - plus.value(p.tet_plus, p.x, h);
    CVec3 dE_m = space.eval(W, p.tet_minus, p.x) - minus.value(p.tet_minus, p.x, h);
    CVec3 jump = tangential_trace(dE_p - dE_m, p.n);
    num += p.w * (jump - data.jump[q]).squaredNorm();
    den += p.w * data.jump[q].squaredNorm();
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace maxshape
