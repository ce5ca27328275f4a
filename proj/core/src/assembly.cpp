#include "maxshape/assembly.hpp"

#include <cmath>
#include <fstream>

#include "maxshape/errors.hpp"
#include "maxshape/parallel.hpp"
#include "maxshape/traces.hpp"

namespace maxshape {

namespace {
int g_threads = 1;
}

int assembly_threads() { return g_threads; }
void set_assembly_threads(int threads) { g_threads = threads < 1 ? 1 : threads; }

void WaveParameters::validate() const {
  if (!(k > 0.0)) throw Error(ErrorCode::ConfigError, "wavenumber must be positive");
  if (!(lambda.real() > 0.0)) throw Error(ErrorCode::ConfigError, "Re lambda must be positive");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw Error(ErrorCode::ConfigError, "incident direction must be a unit vector");
  if (std::abs(bdot(direction, polarization)) > 1e-12)
    throw Error(ErrorCode::PolarizationNotTransverse, "p . d must vanish");
}

CVec3 WaveParameters::incident(const Vec3& x) const {
  return polarization * std::exp(IM * (k * direction.dot(x)));
}

CVec3 WaveParameters::incident_curl(const Vec3& x) const {
  return IM * k * cross(direction, polarization) * std::exp(IM * (k * direction.dot(x)));
}

BoundaryTransport BoundaryTransport::identity(const SurfaceQuadrature& quad) {
  BoundaryTransport t;
  t.trace_op.assign(quad.points.size(), Mat3::Identity());
  t.weight.assign(quad.points.size(), 1.0);
  t.xmap.resize(quad.points.size());
  for (std::size_t q = 0; q < quad.points.size(); ++q) t.xmap[q] = quad.points[q].x;
  return t;
}

namespace {

/// Element-loop assembly into chunk-local triplet buffers, merged in chunk
/// order so the result does not depend on the thread count.
template <typename EmitFn>
SpMat assemble_from_tets(const EdgeSpace& space, Index n, const EmitFn& emit) {
  std::vector<std::vector<Triplet>> buffers(64);
  parallel_chunks(static_cast<std::size_t>(space.mesh().n_tets()), g_threads,
                  [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                    auto& buf = buffers[chunk];
                    for (std::size_t t = lo; t < hi; ++t) emit(static_cast<Index>(t), buf);
                  });
  std::vector<Triplet> all;
  for (auto& b : buffers) all.insert(all.end(), b.begin(), b.end());
  SpMat A(n, n);
  A.setFromTriplets(all.begin(), all.end());
  A.makeCompressed();
  return A;
}

}  // namespace

SpMat assemble_curl_curl(const EdgeSpace& space, const TensorCoefficient& coeff) {
  const auto& rule = tet_rule();
  const Mesh& mesh = space.mesh();
  return assemble_from_tets(space, space.n_dofs(), [&](Index t, std::vector<Triplet>& buf) {
    double vol = space.geom(t).volume;
    if (!(vol > 0.0)) throw Error(ErrorCode::QuadratureFailure, "nonpositive tet volume");
    std::array<Vec3, 6> curls;
    std::array<Index, 6> dofs;
    for (int le = 0; le < 6; ++le) {
      curls[le] = space.basis_curl(t, le);
      dofs[le] = space.global_edge(t, le);
    }
    Eigen::Matrix<cplx, 6, 6> K = Eigen::Matrix<cplx, 6, 6>::Zero();
    if (!coeff) {
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) K(a, b) = vol * curls[a].dot(curls[b]);
    } else {
      for (const auto& qp : rule) {
        Vec3 x = qp.point(mesh, t);
        CMat3 A = coeff(t, x);
        double w = qp.w * vol;
        for (int a = 0; a < 6; ++a) {
          CVec3 Ac = A * curls[a].cast<cplx>();
          for (int b = 0; b < 6; ++b) K(b, a) += w * bdot(curls[b], Ac);
        }
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (K(a, b) != 0.0) buf.emplace_back(dofs[a], dofs[b], K(a, b));
  });
}

SpMat assemble_mass(const EdgeSpace& space, const TensorCoefficient& coeff) {
  const auto& rule = tet_rule();
  const Mesh& mesh = space.mesh();
  return assemble_from_tets(space, space.n_dofs(), [&](Index t, std::vector<Triplet>& buf) {
    double vol = space.geom(t).volume;
    std::array<Index, 6> dofs;
    for (int le = 0; le < 6; ++le) dofs[le] = space.global_edge(t, le);
    Eigen::Matrix<cplx, 6, 6> M = Eigen::Matrix<cplx, 6, 6>::Zero();
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      std::array<Vec3, 6> vals;
      for (int le = 0; le < 6; ++le) vals[le] = space.basis_value(t, le, x);
      double w = qp.w * vol;
      if (!coeff) {
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) M(b, a) += w * vals[a].dot(vals[b]);
      } else {
        CMat3 A = coeff(t, x);
        for (int a = 0; a < 6; ++a) {
          CVec3 Av = A * vals[a].cast<cplx>();
          for (int b = 0; b < 6; ++b) M(b, a) += w * bdot(vals[b], Av);
        }
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (M(a, b) != 0.0) buf.emplace_back(dofs[a], dofs[b], M(a, b));
  });
}

namespace {

/// Tangential traces of the adjacent tet's basis functions at one surface
/// quadrature point. Only the three face edges contribute, but projecting all
/// six is simpler and the off-face ones vanish identically.
struct FaceBasis {
  std::array<CVec3, 6> traced;  // T gamma_T N_e (complexified for convenience)
  std::array<Index, 6> dofs;
};

FaceBasis face_basis(const EdgeSpace& space, const SurfacePoint& p, const Mat3& T) {
  FaceBasis fb;
  Index tet = p.tet_plus >= 0 ? p.tet_plus : p.tet_minus;
  Mat3 P = tangential_projector(p.n);
  Mat3 TP = T * P;
  for (int le = 0; le < 6; ++le) {
    fb.dofs[le] = space.global_edge(tet, le);
    fb.traced[le] = (TP * space.basis_value(tet, le, p.x)).cast<cplx>();
  }
  return fb;
}

}  // namespace

SpMat assemble_boundary_mass(const EdgeSpace& space, const SurfaceQuadrature& quad,
                             const BoundaryTransport* transport) {
  std::vector<Triplet> trips;
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Mat3 T = transport ? transport->trace_op[q] : Mat3::Identity();
    double w = p.w * (transport ? transport->weight[q] : 1.0);
    FaceBasis fb = face_basis(space, p, T);
    for (int a = 0; a < 6; ++a) {
      if (fb.traced[a].isZero(1e-300)) continue;
      for (int b = 0; b < 6; ++b) {
        cplx v = w * bdot(fb.traced[a], fb.traced[b]);
        if (v != 0.0) trips.emplace_back(fb.dofs[b], fb.dofs[a], v);
      }
    }
  }
  SpMat A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

CVecX assemble_surface_load(const EdgeSpace& space, const SurfaceQuadrature& quad,
                            const std::function<CVec3(std::size_t, const SurfacePoint&)>& data,
                            const BoundaryTransport* transport) {
  CVecX load = CVecX::Zero(space.n_dofs());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Mat3 T = transport ? transport->trace_op[q] : Mat3::Identity();
    double w = p.w * (transport ? transport->weight[q] : 1.0);
    CVec3 d = data(q, p);
    FaceBasis fb = face_basis(space, p, T);
    for (int a = 0; a < 6; ++a) load[fb.dofs[a]] += w * bdot(d, fb.traced[a]);
  }
  return load;
}

CVecX assemble_volume_load(const EdgeSpace& space,
                           const std::function<CVec3(Index, const Vec3&)>& f) {
  const auto& rule = tet_rule();
  const Mesh& mesh = space.mesh();
  CVecX load = CVecX::Zero(space.n_dofs());
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    double vol = space.geom(t).volume;
    for (const auto& qp : rule) {
      Vec3 x = qp.point(mesh, t);
      CVec3 fv = f(t, x);
      double w = qp.w * vol;
      for (int le = 0; le < 6; ++le)
        load[space.global_edge(t, le)] += w * bdot(space.basis_value(t, le, x).cast<cplx>(), fv);
    }
  }
  return load;
}

CVecX assemble_nonlinear_load(const EdgeSpace& space, const SurfaceQuadrature& quad,
                              const BoundaryResponse& response,
                              const std::function<CVec3(std::size_t, const SurfacePoint&)>& trace,
                              const BoundaryTransport* transport) {
  if (response.is_zero()) return CVecX::Zero(space.n_dofs());
  CVecX load = CVecX::Zero(space.n_dofs());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const auto& p = quad.points[q];
    Mat3 T = transport ? transport->trace_op[q] : Mat3::Identity();
    double w = p.w * (transport ? transport->weight[q] : 1.0);
    Vec3 xq = transport ? transport->xmap[q] : p.x;
    CVec3 g = response.eval(xq, trace(q, p));
    FaceBasis fb = face_basis(space, p, T);
    for (int a = 0; a < 6; ++a) load[fb.dofs[a]] += w * bdot(g, fb.traced[a]);
  }
  return load;
}

SpMatR assemble_hcurl_gram(const EdgeSpace& space) {
  SpMat K = assemble_curl_curl(space);
  SpMat M = assemble_mass(space);
  SpMat S = K + M;
  SpMatR G(S.rows(), S.cols());
  std::vector<TripletR> trips;
  trips.reserve(S.nonZeros());
  for (int k = 0; k < S.outerSize(); ++k)
    for (SpMat::InnerIterator it(S, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value().real());
  G.setFromTriplets(trips.begin(), trips.end());
  G.makeCompressed();
  return G;
}

namespace {

double quad_form(const SpMat& A, const CVecX& u) {
  cplx v = u.adjoint() * (A * u);
  return std::max(0.0, v.real());
}

}  // namespace

double hcurl_norm(const EdgeSpace& space, const CVecX& u) {
  SpMat K = assemble_curl_curl(space);
  SpMat M = assemble_mass(space);
  return std::sqrt(quad_form(K, u) + quad_form(M, u));
}

double l2_norm(const EdgeSpace& space, const CVecX& u) {
  SpMat M = assemble_mass(space);
  return std::sqrt(quad_form(M, u));
}

double trace_l2_norm(const EdgeSpace& space, const SurfaceQuadrature& quad, const CVecX& u) {
  double s = 0.0;
  for (const auto& p : quad.points) {
    Index tet = p.tet_plus >= 0 ? p.tet_plus : p.tet_minus;
    CVec3 v = tangential_component(space.eval(u, tet, p.x), p.n);
    s += p.w * v.squaredNorm();
  }
  return std::sqrt(s);
}

double xnorm(const EdgeSpace& space, const SurfaceQuadrature& gamma_quad, const CVecX& u) {
  double h = hcurl_norm(space, u);
  double t = trace_l2_norm(space, gamma_quad, u);
  return std::sqrt(h * h + t * t);
}

double NormPack::l2(const CVecX& u) const { return std::sqrt(quad_form(M, u)); }
double NormPack::hcurl(const CVecX& u) const { return std::sqrt(quad_form(K, u) + quad_form(M, u)); }
double NormPack::x(const CVecX& u) const {
  return std::sqrt(quad_form(K, u) + quad_form(M, u) + quad_form(B, u));
}

NormPack make_norm_pack(const EdgeSpace& space, const SurfaceQuadrature& gamma_quad) {
  NormPack n;
  n.K = assemble_curl_curl(space);
  n.M = assemble_mass(space);
  n.B = assemble_boundary_mass(space, gamma_quad);
  return n;
}

void dump_matrix(const SpMat& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value().real() << " " << it.value().imag()
          << "\n";
}

void dump_vector(const CVecX& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << i << " " << v[i].real() << " " << v[i].imag() << "\n";
}

}  // namespace maxshape
