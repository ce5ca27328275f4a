#include "maxshape/traces.hpp"

#include <cmath>

namespace maxshape {

double TangentialField::l2_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += quad->points[i].w * values[i].squaredNorm();
  return std::sqrt(s);
}

double TangentialField::max_normal_component() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    m = std::max(m, std::abs(bdot(quad->points[i].n, values[i])));
  return m;
}

TangentialField make_tangential_field(const SurfaceQuadrature& quad,
                                      const std::function<CVec3(const SurfacePoint&)>& f) {
  TangentialField t;
  t.quad = &quad;
  t.values.reserve(quad.points.size());
  for (const auto& p : quad.points) t.values.push_back(f(p));
  return t;
}

}  // namespace maxshape
