#pragma once

#include <array>

#include <Eigen/Core>

#include "elastmix/mesh.hpp"

namespace elastmix {

/// Affine map x = origin + J * xhat from the reference triangle onto a cell.
struct CellGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double det = 0.0;

  /// Throws Error(DegenerateCell) when |det J| < 1e-14 h_T^2.
  static CellGeometry from_points(const std::array<Point, 3>& p);
  static CellGeometry of_cell(const Mesh& mesh, std::size_t c) {
    return from_points(mesh.cell_points(c));
  }

  Eigen::Vector2d map(double xhat, double yhat) const {
    return origin + jacobian * Eigen::Vector2d(xhat, yhat);
  }
  Eigen::Vector2d pullback_point(const Eigen::Vector2d& x) const { return inverse * (x - origin); }
  double area() const { return 0.5 * std::abs(det); }
};

/// Contravariant Piola transform of reference vector values (rows):
/// phi = J phihat / det J.
Eigen::MatrixX2d piola_map(const CellGeometry& g, const Eigen::MatrixX2d& reference_values);
inline Eigen::Vector2d piola_map(const CellGeometry& g, const Eigen::Vector2d& v) {
  return g.jacobian * v / g.det;
}
/// div phi = divhat phihat / det J.
inline Eigen::VectorXd piola_divergence(const CellGeometry& g, const Eigen::VectorXd& ref_div) {
  return ref_div / g.det;
}
/// Inverse transform used to pull a physical field back: phihat = det J J^{-1} phi.
inline Eigen::Vector2d piola_pullback(const CellGeometry& g, const Eigen::Vector2d& v) {
  return g.det * (g.inverse * v);
}

}  // namespace elastmix
