#include "elastmix/piola.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "elastmix/error.hpp"

namespace elastmix {

CellGeometry CellGeometry::from_points(const std::array<Point, 3>& p) {
  CellGeometry g;
  g.origin = p[0];
  g.jacobian.col(0) = p[1] - p[0];
  g.jacobian.col(1) = p[2] - p[0];
  g.det = g.jacobian.determinant();
  const double h = std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
  if (!(std::abs(g.det) >= 1e-14 * h * h))
    throw Error(ErrorCode::DegenerateCell, "degenerate cell in Piola map");
  g.inverse = g.jacobian.inverse();
  return g;
}

Eigen::MatrixX2d piola_map(const CellGeometry& g, const Eigen::MatrixX2d& reference_values) {
  return reference_values * (g.jacobian.transpose() / g.det);
}

}  // namespace elastmix
