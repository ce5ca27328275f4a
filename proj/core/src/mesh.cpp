#include "maxshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "maxshape/errors.hpp"

namespace maxshape {

namespace {

using VKey = std::uint64_t;

VKey edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<VKey>(a) << 32) | static_cast<VKey>(b);
}

struct FaceKey {
  std::array<Index, 3> v;
  bool operator<(const FaceKey& o) const { return v < o.v; }
};

FaceKey face_key(Index a, Index b, Index c) {
  std::array<Index, 3> k = {a, b, c};
  std::sort(k.begin(), k.end());
  return {k};
}

Vec3 raw_normal(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  return (p1 - p0).cross(p2 - p0);
}

}  // namespace

const char* surface_tag_name(SurfaceTag tag) {
  switch (tag) {
    case SurfaceTag::Gamma: return "gamma";
    case SurfaceTag::GammaR: return "gammaR";
    case SurfaceTag::Interface: return "interface";
  }
  return "?";
}

TetGeom TetGeom::from(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  Mat3 A;
  A.col(0) = p1 - p0;
  A.col(1) = p2 - p0;
  A.col(2) = p3 - p0;
  double det = A.determinant();
  TetGeom g;
  g.volume = det / 6.0;
  Mat3 Ainv = A.inverse();
  // Rows of A^-1 are the gradients of lambda_1..lambda_3.
  for (int i = 0; i < 3; ++i) g.grad_lambda[i + 1] = Ainv.row(i).transpose();
  g.grad_lambda[0] = -(g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]);
  return g;
}

const std::vector<SurfaceTri>& Mesh::surface(SurfaceTag tag) const {
  switch (tag) {
    case SurfaceTag::Gamma: return gamma;
    case SurfaceTag::GammaR: return gamma_r;
    case SurfaceTag::Interface: return interface;
  }
  return gamma;
}

std::vector<SurfaceTri>& Mesh::surface(SurfaceTag tag) {
  switch (tag) {
    case SurfaceTag::Gamma: return gamma;
    case SurfaceTag::GammaR: return gamma_r;
    case SurfaceTag::Interface: return interface;
  }
  return gamma;
}

Vec3 Mesh::tet_centroid(Index t) const {
  return 0.25 * (tet_vertex(t, 0) + tet_vertex(t, 1) + tet_vertex(t, 2) + tet_vertex(t, 3));
}

TetGeom Mesh::tet_geom(Index t) const {
  return TetGeom::from(tet_vertex(t, 0), tet_vertex(t, 1), tet_vertex(t, 2), tet_vertex(t, 3));
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (Index t = 0; t < n_tets(); ++t) v += std::abs(tet_volume(t));
  return v;
}

double Mesh::mean_edge_length() const {
  double s = 0.0;
  for (const auto& e : edges) s += (vertices[e[0]] - vertices[e[1]]).norm();
  return edges.empty() ? 0.0 : s / static_cast<double>(edges.size());
}

void Mesh::finalize() {
  if (tet_region.size() != tets.size()) tet_region.assign(tets.size(), 0);

  // Ensure positive volumes; swap two vertices otherwise.
  for (auto& t : tets) {
    if (TetGeom::from(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]).volume < 0.0)
      std::swap(t[2], t[3]);
  }

  // Edge table, globally oriented lower index -> higher index.
  edges.clear();
  tet_edges.assign(tets.size(), {});
  std::unordered_map<VKey, Index> edge_ids;
  edge_ids.reserve(tets.size() * 4);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    for (int le = 0; le < 6; ++le) {
      Index a = tets[t][kTetEdges[le][0]];
      Index b = tets[t][kTetEdges[le][1]];
      VKey key = edge_key(a, b);
      auto it = edge_ids.find(key);
      Index id;
      if (it == edge_ids.end()) {
        id = static_cast<Index>(edges.size());
        edges.push_back({std::min(a, b), std::max(a, b)});
        edge_ids.emplace(key, id);
      } else {
        id = it->second;
      }
      tet_edges[t][le] = id;
    }
  }

  // Face -> adjacent tets.
  std::map<FaceKey, std::array<Index, 2>> face_tets;
  static constexpr int kTetFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  for (std::size_t t = 0; t < tets.size(); ++t) {
    for (const auto& f : kTetFaces) {
      FaceKey key = face_key(tets[t][f[0]], tets[t][f[1]], tets[t][f[2]]);
      auto it = face_tets.find(key);
      if (it == face_tets.end())
        face_tets[key] = {static_cast<Index>(t), -1};
      else
        it->second[1] = static_cast<Index>(t);
    }
  }

  auto orient = [&](SurfaceTri& tri, SurfaceTag tag) {
    const Vec3 p0 = vertices[tri.v[0]], p1 = vertices[tri.v[1]], p2 = vertices[tri.v[2]];
    Vec3 nr = raw_normal(p0, p1, p2);
    tri.area = 0.5 * nr.norm();
    if (tri.area < 1e-14) throw Error(ErrorCode::DegenerateTriangle, "surface triangle has ~zero area");
    Vec3 n = nr.normalized();
    auto it = face_tets.find(face_key(tri.v[0], tri.v[1], tri.v[2]));
    if (it == face_tets.end())
      throw Error(ErrorCode::IoError, "surface triangle is not a face of any tet");
    Index ta = it->second[0], tb = it->second[1];
    Vec3 fc = (p0 + p1 + p2) / 3.0;
    if (tag == SurfaceTag::Interface) {
      if (tb < 0) throw Error(ErrorCode::IoError, "interface triangle must separate two tets");
      Index t_in = (tet_region[ta] == 1) ? ta : tb;
      Index t_ex = (tet_region[ta] == 1) ? tb : ta;
      if (tet_region[t_in] != 1 || tet_region[t_ex] != 0)
        throw Error(ErrorCode::IoError, "interface triangle does not separate regions");
      tri.tet_minus = t_in;
      tri.tet_plus = t_ex;
      if (n.dot(tet_centroid(t_ex) - fc) < 0.0) n = -n;
    } else {
      if (tb >= 0) throw Error(ErrorCode::IoError, "boundary triangle has two adjacent tets");
      tri.tet_plus = ta;
      tri.tet_minus = -1;
      // Gamma: normal points from the obstacle into the domain (toward the tet).
      // GammaR: normal points out of the computational domain (away from it).
      double s = n.dot(tet_centroid(ta) - fc);
      if (tag == SurfaceTag::Gamma ? (s < 0.0) : (s > 0.0)) n = -n;
    }
    tri.normal = n;
  };

  for (auto& tri : gamma) orient(tri, SurfaceTag::Gamma);
  for (auto& tri : gamma_r) orient(tri, SurfaceTag::GammaR);
  for (auto& tri : interface) orient(tri, SurfaceTag::Interface);
}

void Mesh::validate() const {
  std::map<FaceKey, int> tagged;
  auto check = [&](const std::vector<SurfaceTri>& tris, SurfaceTag tag) {
    for (const auto& tri : tris) {
      if (std::abs(tri.normal.norm() - 1.0) > 1e-12)
        throw Error(ErrorCode::DegenerateNormal, "surface normal is not unit length");
      if (tri.tet_plus < 0 && tri.tet_minus < 0)
        throw Error(ErrorCode::IoError, "surface triangle lacks an adjacent tet");
      auto key = face_key(tri.v[0], tri.v[1], tri.v[2]);
      if (tagged.count(key))
        throw Error(ErrorCode::IoError, std::string("face tagged twice: second tag ") + surface_tag_name(tag));
      tagged[key] = 1;
    }
  };
  check(gamma, SurfaceTag::Gamma);
  check(gamma_r, SurfaceTag::GammaR);
  check(interface, SurfaceTag::Interface);
  for (const auto& e : edges)
    if (e[0] >= e[1]) throw Error(ErrorCode::IoError, "edge not globally oriented");
  for (std::size_t t = 0; t < tets.size(); ++t)
    if (tet_volume(static_cast<Index>(t)) <= 0.0)
      throw Error(ErrorCode::NonInvertible, "tet with nonpositive volume");
}

// ---------------------------------------------------------------------------
// Built-in generators
// ---------------------------------------------------------------------------

namespace {

struct SurfaceMesh {
  std::vector<Vec3> verts;  // on the unit sphere (or cube surface)
  std::vector<std::array<Index, 3>> tris;
};

SurfaceMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh s;
  auto add = [&](double x, double y, double z) { s.verts.push_back(Vec3(x, y, z).normalized()); };
  add(-1, t, 0); add(1, t, 0); add(-1, -t, 0); add(1, -t, 0);
  add(0, -1, t); add(0, 1, t); add(0, -1, -t); add(0, 1, -t);
  add(t, 0, -1); add(t, 0, 1); add(-t, 0, -1); add(-t, 0, 1);
  s.tris = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
            {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
            {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
            {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int lvl = 0; lvl < subdivisions; ++lvl) {
    std::unordered_map<VKey, Index> midpoint;
    auto mid = [&](Index a, Index b) {
      VKey key = edge_key(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Index id = static_cast<Index>(s.verts.size());
      s.verts.push_back((0.5 * (s.verts[a] + s.verts[b])).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<Index, 3>> next;
    next.reserve(s.tris.size() * 4);
    for (const auto& f : s.tris) {
      Index ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    s.tris = std::move(next);
  }
  // Outward orientation.
  for (auto& f : s.tris) {
    Vec3 c = (s.verts[f[0]] + s.verts[f[1]] + s.verts[f[2]]) / 3.0;
    if (raw_normal(s.verts[f[0]], s.verts[f[1]], s.verts[f[2]]).dot(c) < 0.0)
      std::swap(f[1], f[2]);
  }
  return s;
}

/// Triangulation of the cube surface [-1,1]^3 with an n x n quad grid per face.
SurfaceMesh cube_surface(int n) {
  SurfaceMesh s;
  std::map<std::array<long, 3>, Index> seen;
  auto add = [&](const Vec3& p) {
    std::array<long, 3> key = {std::lround(p.x() * 1e7), std::lround(p.y() * 1e7), std::lround(p.z() * 1e7)};
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    Index id = static_cast<Index>(s.verts.size());
    s.verts.push_back(p);
    seen.emplace(key, id);
    return id;
  };
  // axis = face normal direction, sign = +-1; (u, v) span the face.
  for (int axis = 0; axis < 3; ++axis)
    for (int sign = -1; sign <= 1; sign += 2)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto corner = [&](int di, int dj) {
            double u = -1.0 + 2.0 * (i + di) / n;
            double v = -1.0 + 2.0 * (j + dj) / n;
            Vec3 p;
            p[axis] = sign;
            p[(axis + 1) % 3] = u;
            p[(axis + 2) % 3] = v;
            return add(p);
          };
          Index v00 = corner(0, 0), v10 = corner(1, 0), v11 = corner(1, 1), v01 = corner(0, 1);
          s.tris.push_back({v00, v10, v11});
          s.tris.push_back({v00, v11, v01});
        }
  for (auto& f : s.tris) {
    Vec3 c = (s.verts[f[0]] + s.verts[f[1]] + s.verts[f[2]]) / 3.0;
    if (raw_normal(s.verts[f[0]], s.verts[f[1]], s.verts[f[2]]).dot(c) < 0.0) std::swap(f[1], f[2]);
  }
  return s;
}

/// Splits the prism over triangle (a,b,c) between two consecutive layers into
/// three tets. Sorting the column base by global index makes the induced quad
/// diagonals consistent across neighboring prisms.
void emit_prism(std::vector<std::array<Index, 4>>& tets, Index a, Index b, Index c, Index off) {
  std::array<Index, 3> s = {a, b, c};
  std::sort(s.begin(), s.end());
  Index u = s[0], v = s[1], w = s[2];
  tets.push_back({u, v, w, w + off});
  tets.push_back({u, v, w + off, v + off});
  tets.push_back({u, v + off, w + off, u + off});
}

}  // namespace

Mesh build_shell_mesh(double r_in, double r_out, int level) {
  SurfaceMesh sph = icosphere(level);
  int layers = 1 << level;
  Index nv = static_cast<Index>(sph.verts.size());

  Mesh m;
  for (int l = 0; l <= layers; ++l) {
    double r = r_in + (r_out - r_in) * l / layers;
    for (const auto& u : sph.verts) m.vertices.push_back(r * u);
  }
  for (int l = 0; l < layers; ++l) {
    Index base = l * nv;
    for (const auto& f : sph.tris) emit_prism(m.tets, base + f[0], base + f[1], base + f[2], nv);
  }
  m.tet_region.assign(m.tets.size(), 0);
  for (const auto& f : sph.tris) {
    m.gamma.push_back({{f[0], f[1], f[2]}, Vec3::Zero(), 0.0, -1, -1});
    Index base = layers * nv;
    m.gamma_r.push_back({{base + f[0], base + f[1], base + f[2]}, Vec3::Zero(), 0.0, -1, -1});
  }
  m.finalize();
  return m;
}

Mesh build_ball_mesh(double r_interface, double r_out, int level) {
  SurfaceMesh sph = icosphere(level);
  int li = 1 << level;  // layers from center to the interface
  int lo = 1 << level;  // layers from the interface to the outer sphere
  Index nv = static_cast<Index>(sph.verts.size());

  Mesh m;
  m.vertices.push_back(Vec3::Zero());  // center
  for (int l = 1; l <= li; ++l) {
    double r = r_interface * l / li;
    for (const auto& u : sph.verts) m.vertices.push_back(r * u);
  }
  for (int l = 1; l <= lo; ++l) {
    double r = r_interface + (r_out - r_interface) * l / lo;
    for (const auto& u : sph.verts) m.vertices.push_back(r * u);
  }
  auto layer_base = [&](int l) { return static_cast<Index>(1 + static_cast<Index>(l - 1) * nv); };

  // Innermost shell: cones from the center.
  for (const auto& f : sph.tris)
    m.tets.push_back({0, layer_base(1) + f[0], layer_base(1) + f[1], layer_base(1) + f[2]});
  std::size_t inner_cones = m.tets.size();
  for (int l = 1; l < li + lo; ++l) {
    Index base = layer_base(l);
    for (const auto& f : sph.tris) emit_prism(m.tets, base + f[0], base + f[1], base + f[2], nv);
  }
  m.tet_region.assign(m.tets.size(), 0);
  std::size_t interior_tets = inner_cones + static_cast<std::size_t>(li - 1) * sph.tris.size() * 3;
  for (std::size_t t = 0; t < interior_tets; ++t) m.tet_region[t] = 1;

  Index ib = layer_base(li);
  Index ob = layer_base(li + lo);
  for (const auto& f : sph.tris) {
    m.interface.push_back({{ib + f[0], ib + f[1], ib + f[2]}, Vec3::Zero(), 0.0, -1, -1});
    m.gamma_r.push_back({{ob + f[0], ob + f[1], ob + f[2]}, Vec3::Zero(), 0.0, -1, -1});
  }
  m.finalize();
  return m;
}

Mesh build_cube_hole_mesh(double r_in, double half_width, int level) {
  int n = 2 << level;  // quads per cube face edge
  SurfaceMesh cube = cube_surface(n);
  int layers = 2 << level;
  Index nv = static_cast<Index>(cube.verts.size());

  Mesh m;
  for (int l = 0; l <= layers; ++l) {
    double s = static_cast<double>(l) / layers;
    for (const auto& p : cube.verts) {
      Vec3 dir = p.normalized();
      Vec3 on_sphere = r_in * dir;
      Vec3 on_cube = half_width * p;
      m.vertices.push_back((1.0 - s) * on_sphere + s * on_cube);
    }
  }
  for (int l = 0; l < layers; ++l) {
    Index base = l * nv;
    for (const auto& f : cube.tris) emit_prism(m.tets, base + f[0], base + f[1], base + f[2], nv);
  }
  m.tet_region.assign(m.tets.size(), 0);
  for (const auto& f : cube.tris) {
    m.gamma.push_back({{f[0], f[1], f[2]}, Vec3::Zero(), 0.0, -1, -1});
    Index base = layers * nv;
    m.gamma_r.push_back({{base + f[0], base + f[1], base + f[2]}, Vec3::Zero(), 0.0, -1, -1});
  }
  m.finalize();
  return m;
}

// ---------------------------------------------------------------------------
// Plain-text mesh format
// ---------------------------------------------------------------------------

Mesh read_mesh(std::istream& in) {
  Mesh m;
  std::string line;
  std::string section;
  SurfaceTag tag = SurfaceTag::Gamma;
  long remaining = 0;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "VERTICES" || first == "TETS" || first == "TRIS") {
      section = first;
      if (first == "TRIS") {
        std::string tname;
        if (!(ls >> tname)) throw Error(ErrorCode::IoError, "TRIS section missing tag");
        if (tname == "gamma") tag = SurfaceTag::Gamma;
        else if (tname == "gammaR") tag = SurfaceTag::GammaR;
        else if (tname == "interface") tag = SurfaceTag::Interface;
        else throw Error(ErrorCode::IoError, "unknown surface tag " + tname);
      }
      if (!(ls >> remaining)) throw Error(ErrorCode::IoError, "section missing count");
      continue;
    }
    if (section == "VERTICES") {
      Vec3 p;
      p.x() = std::stod(first);
      if (!(ls >> p.y() >> p.z())) throw Error(ErrorCode::IoError, "bad vertex line");
      m.vertices.push_back(p);
    } else if (section == "TETS") {
      std::array<Index, 4> t;
      t[0] = std::stoll(first);
      if (!(ls >> t[1] >> t[2] >> t[3])) throw Error(ErrorCode::IoError, "bad tet line");
      int region = 0;
      ls >> region;
      m.tets.push_back(t);
      m.tet_region.push_back(region);
    } else if (section == "TRIS") {
      std::array<Index, 3> f;
      f[0] = std::stoll(first);
      if (!(ls >> f[1] >> f[2])) throw Error(ErrorCode::IoError, "bad triangle line");
      m.surface(tag).push_back({f, Vec3::Zero(), 0.0, -1, -1});
    } else {
      throw Error(ErrorCode::IoError, "content before a section header");
    }
  }
  m.finalize();
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "VERTICES " << mesh.vertices.size() << "\n";
  for (const auto& p : mesh.vertices) out << p.x() << " " << p.y() << " " << p.z() << "\n";
  out << "TETS " << mesh.tets.size() << "\n";
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& tt = mesh.tets[t];
    out << tt[0] << " " << tt[1] << " " << tt[2] << " " << tt[3] << " " << mesh.tet_region[t] << "\n";
  }
  auto dump = [&](const std::vector<SurfaceTri>& tris, const char* name) {
    if (tris.empty()) return;
    out << "TRIS " << name << " " << tris.size() << "\n";
    for (const auto& f : tris) out << f.v[0] << " " << f.v[1] << " " << f.v[2] << "\n";
  };
  dump(mesh.gamma, "gamma");
  dump(mesh.gamma_r, "gammaR");
  dump(mesh.interface, "interface");
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_mesh(mesh, out);
}

// ---------------------------------------------------------------------------
// TetLocator
// ---------------------------------------------------------------------------

TetLocator::TetLocator(const Mesh& mesh, int cells_per_axis) : mesh_(mesh), n_(cells_per_axis) {
  lo_ = Vec3::Constant(1e300);
  hi_ = Vec3::Constant(-1e300);
  for (const auto& p : mesh.vertices) {
    lo_ = lo_.cwiseMin(p);
    hi_ = hi_.cwiseMax(p);
  }
  Vec3 pad = 1e-9 * (hi_ - lo_).norm() * Vec3::Ones() + Vec3::Constant(1e-12);
  lo_ -= pad;
  hi_ += pad;
  cells_.assign(static_cast<std::size_t>(n_) * n_ * n_, {});
  for (Index t = 0; t < mesh.n_tets(); ++t) {
    Vec3 tlo = Vec3::Constant(1e300), thi = Vec3::Constant(-1e300);
    for (int i = 0; i < 4; ++i) {
      tlo = tlo.cwiseMin(mesh.tet_vertex(t, i));
      thi = thi.cwiseMax(mesh.tet_vertex(t, i));
    }
    int ix0 = cell_of(tlo.x(), lo_.x(), hi_.x()), ix1 = cell_of(thi.x(), lo_.x(), hi_.x());
    int iy0 = cell_of(tlo.y(), lo_.y(), hi_.y()), iy1 = cell_of(thi.y(), lo_.y(), hi_.y());
    int iz0 = cell_of(tlo.z(), lo_.z(), hi_.z()), iz1 = cell_of(thi.z(), lo_.z(), hi_.z());
    for (int ix = ix0; ix <= ix1; ++ix)
      for (int iy = iy0; iy <= iy1; ++iy)
        for (int iz = iz0; iz <= iz1; ++iz)
          cells_[(static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz].push_back(t);
  }
}

int TetLocator::cell_of(double v, double lo, double hi) const {
  int c = static_cast<int>((v - lo) / (hi - lo) * n_);
  return std::clamp(c, 0, n_ - 1);
}

Index TetLocator::locate(const Vec3& x, double tol) const {
  auto inside = [&](Index t) {
    const Vec3 p0 = mesh_.tet_vertex(t, 0);
    Mat3 A;
    A.col(0) = mesh_.tet_vertex(t, 1) - p0;
    A.col(1) = mesh_.tet_vertex(t, 2) - p0;
    A.col(2) = mesh_.tet_vertex(t, 3) - p0;
    Vec3 lam = A.partialPivLu().solve(x - p0);
    double l0 = 1.0 - lam.sum();
    return lam.minCoeff() >= -tol && l0 >= -tol;
  };
  int ix = cell_of(x.x(), lo_.x(), hi_.x());
  int iy = cell_of(x.y(), lo_.y(), hi_.y());
  int iz = cell_of(x.z(), lo_.z(), hi_.z());
  for (int dx = 0; dx <= 2; ++dx)
    for (int dy = 0; dy <= 2; ++dy)
      for (int dz = 0; dz <= 2; ++dz) {
        int jx = ix + (dx == 2 ? -1 : dx), jy = iy + (dy == 2 ? -1 : dy), jz = iz + (dz == 2 ? -1 : dz);
        if (jx < 0 || jy < 0 || jz < 0 || jx >= n_ || jy >= n_ || jz >= n_) continue;
        for (Index t : cells_[(static_cast<std::size_t>(jx) * n_ + jy) * n_ + jz])
          if (inside(t)) return t;
      }
  for (Index t = 0; t < mesh_.n_tets(); ++t)
    if (inside(t)) return t;
  return -1;
}

}  // namespace maxshape
