#include "maxshape/radiation.hpp"

#include <cmath>

#include "maxshape/errors.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

void RadiationOperator::check_boundary(const SurfaceQuadrature& quad) const {
  if (variant != Variant::SpectralDtN) return;
  for (const auto& p : quad.points) {
    double r = (p.x - center).norm();
    if (std::abs(r - radius) > 0.2 * radius)
      throw Error(ErrorCode::UnsupportedOuterBoundary,
                  "spectral DtN needs a spherical outer boundary of radius " +
                      std::to_string(radius));
  }
}

cplx RadiationOperator::primal_coefficient_te(int l, double k) const {
  cplx z = riccati_hankel2_ratio(l, k * radius);
  return -k * z;
}

cplx RadiationOperator::primal_coefficient_tm(int l, double k) const {
  cplx z = riccati_hankel2_ratio(l, k * radius);
  return k / z;
}

namespace {

struct ModeBasis {
  // Trace vectors b[m](f) = int_GammaR Y_m . gamma_T N_f ds for the U and V
  // families, plus the complex projections of a given incident trace field.
  std::vector<VecX> bu, bv;
  std::vector<int> degree;
};

ModeBasis build_mode_basis(const EdgeSpace& space, const RadiationOperator& op,
                           const SurfaceQuadrature& quad) {
  ModeBasis mb;
  RealSphericalHarmonics sh(op.order);
  int nm = sh.n_modes();
  mb.bu.assign(nm, VecX::Zero(space.n_dofs()));
  mb.bv.assign(nm, VecX::Zero(space.n_dofs()));
  mb.degree.resize(nm);
  for (int m = 0; m < nm; ++m) mb.degree[m] = sh.mode_degree(m);
  for (const auto& p : quad.points) {
    Index tet = p.tet_plus;
    Mat3 P = tangential_projector(p.n);
    std::array<Vec3, 6> traced;
    std::array<Index, 6> dofs;
    for (int le = 0; le < 6; ++le) {
      traced[le] = P * space.basis_value(tet, le, p.x);
      dofs[le] = space.global_edge(tet, le);
    }
    Vec3 xc = p.x - op.center;
    for (int m = 0; m < nm; ++m) {
      Vec3 u = sh.mode_u(m, xc, op.radius);
      Vec3 v = sh.mode_v(m, xc, op.radius);
      for (int le = 0; le < 6; ++le) {
        mb.bu[m][dofs[le]] += p.w * u.dot(traced[le]);
        mb.bv[m][dofs[le]] += p.w * v.dot(traced[le]);
      }
    }
  }
  return mb;
}

SpMat rank_one_sum(Index n, const ModeBasis& mb,
                   const std::function<cplx(int l)>& coef_u,
                   const std::function<cplx(int l)>& coef_v) {
  // Dense among GammaR DoFs, assembled sparsely through the mode vectors.
  std::vector<Triplet> trips;
  for (std::size_t m = 0; m < mb.bu.size(); ++m) {
    for (const auto& [vec, coef] :
         {std::pair<const VecX*, cplx>{&mb.bu[m], coef_u(mb.degree[m])},
          std::pair<const VecX*, cplx>{&mb.bv[m], coef_v(mb.degree[m])}}) {
      std::vector<Index> nz;
      for (Index i = 0; i < vec->size(); ++i)
        if ((*vec)[i] != 0.0) nz.push_back(i);
      for (Index i : nz)
        for (Index j : nz) trips.emplace_back(i, j, coef * (*vec)[i] * (*vec)[j]);
    }
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

}  // namespace

SpMat assemble_radiation(const EdgeSpace& space, const RadiationOperator& op,
                         const SurfaceQuadrature& quad_gr, double k) {
  if (op.variant == RadiationOperator::Variant::SilverMuller1) {
    SpMat B = assemble_boundary_mass(space, quad_gr);
    return SpMat((IM * k) * B);
  }
  op.check_boundary(quad_gr);
  if (op.order <= 0) return SpMat(space.n_dofs(), space.n_dofs());
  ModeBasis mb = build_mode_basis(space, op, quad_gr);
  return rank_one_sum(
      space.n_dofs(), mb, [&](int l) { return op.primal_coefficient_tm(l, k); },
      [&](int l) { return op.primal_coefficient_te(l, k); });
}

SpMat assemble_radiation_inverse(const EdgeSpace& space, const RadiationOperator& op,
                                 const SurfaceQuadrature& quad_gr, double k) {
  if (op.variant == RadiationOperator::Variant::SilverMuller1) {
    SpMat B = assemble_boundary_mass(space, quad_gr);
    return SpMat((-IM / k) * B);
  }
  op.check_boundary(quad_gr);
  if (op.order <= 0) return SpMat(space.n_dofs(), space.n_dofs());
  ModeBasis mb = build_mode_basis(space, op, quad_gr);
  auto zl = [&](int l) { return riccati_hankel2_ratio(l, k * op.radius); };
  // (i/k) <Lambda^-1 gamma_t q, gamma_T tau> with Lambda^-1 gamma_t q =
  // -C gamma_T q, C diagonal over the mode families.
  return rank_one_sum(
      space.n_dofs(), mb, [&](int l) { return (-IM / k) * (-IM / zl(l)); },
      [&](int l) { return (-IM / k) * (IM * zl(l)); });
}

CVecX assemble_incident_load(const EdgeSpace& space, const RadiationOperator& op,
                             const SurfaceQuadrature& quad_gr, const WaveParameters& wave) {
  wave.validate();
  double k = wave.k;
  if (op.variant == RadiationOperator::Variant::SilverMuller1) {
    // <ik gamma_T E^i - gamma_t curl E^i, gamma_T v>.
    return assemble_surface_load(space, quad_gr, [&](std::size_t, const SurfacePoint& p) -> CVec3 {
      CVec3 ei = wave.incident(p.x);
      CVec3 ci = wave.incident_curl(p.x);
      return IM * k * tangential_component(ei, p.n) - tangential_trace(ci, p.n);
    });
  }
  op.check_boundary(quad_gr);
  // Modal part ik Lambda gamma_t E^i plus the plain -gamma_t curl E^i term.
  CVecX load = assemble_surface_load(space, quad_gr, [&](std::size_t, const SurfacePoint& p) -> CVec3 {
    return -tangential_trace(wave.incident_curl(p.x), p.n);
  });
  if (op.order <= 0) return load;
  RealSphericalHarmonics sh(op.order);
  ModeBasis mb = build_mode_basis(space, op, quad_gr);
  // Projections of gamma_T E^i on the modes.
  std::vector<cplx> cu(sh.n_modes(), 0.0), cv(sh.n_modes(), 0.0);
  for (const auto& p : quad_gr.points) {
    CVec3 eit = tangential_component(wave.incident(p.x), p.n);
    Vec3 xc = p.x - op.center;
    for (int m = 0; m < sh.n_modes(); ++m) {
      cu[m] += p.w * bdot(sh.mode_u(m, xc, op.radius), eit);
      cv[m] += p.w * bdot(sh.mode_v(m, xc, op.radius), eit);
    }
  }
  for (int m = 0; m < sh.n_modes(); ++m) {
    int l = sh.mode_degree(m);
    load += op.primal_coefficient_tm(l, k) * cu[m] * mb.bu[m].cast<cplx>();
    load += op.primal_coefficient_te(l, k) * cv[m] * mb.bv[m].cast<cplx>();
  }
  return load;
}

CVecX assemble_incident_load_mixed(const EdgeSpace& space, const RadiationOperator& op,
                                   const SurfaceQuadrature& quad_gr, const WaveParameters& wave) {
  wave.validate();
  double k = wave.k;
  if (op.variant == RadiationOperator::Variant::SilverMuller1) {
    // <gamma_t E^i - (i/k) gamma_T curl E^i, gamma_T tau>.
    return assemble_surface_load(space, quad_gr, [&](std::size_t, const SurfacePoint& p) -> CVec3 {
      CVec3 ei = wave.incident(p.x);
      CVec3 ci = wave.incident_curl(p.x);
      return tangential_trace(ei, p.n) - (IM / k) * tangential_component(ci, p.n);
    });
  }
  op.check_boundary(quad_gr);
  CVecX load = assemble_surface_load(space, quad_gr, [&](std::size_t, const SurfacePoint& p) -> CVec3 {
    return tangential_trace(wave.incident(p.x), p.n);
  });
  if (op.order <= 0) return load;
  RealSphericalHarmonics sh(op.order);
  ModeBasis mb = build_mode_basis(space, op, quad_gr);
  auto zl = [&](int l) { return riccati_hankel2_ratio(l, k * op.radius); };
  std::vector<cplx> cu(sh.n_modes(), 0.0), cv(sh.n_modes(), 0.0);
  for (const auto& p : quad_gr.points) {
    CVec3 cit = tangential_component(wave.incident_curl(p.x), p.n);
    Vec3 xc = p.x - op.center;
    for (int m = 0; m < sh.n_modes(); ++m) {
      cu[m] += p.w * bdot(sh.mode_u(m, xc, op.radius), cit);
      cv[m] += p.w * bdot(sh.mode_v(m, xc, op.radius), cit);
    }
  }
  // (i/k) Lambda^-1 gamma_t curl E^i = -(i/k) C gamma_T curl E^i.
  for (int m = 0; m < sh.n_modes(); ++m) {
    int l = sh.mode_degree(m);
    load += (-IM / k) * (-IM / zl(l)) * cu[m] * mb.bu[m].cast<cplx>();
    load += (-IM / k) * (IM * zl(l)) * cv[m] * mb.bv[m].cast<cplx>();
  }
  return load;
}

}  // namespace maxshape
