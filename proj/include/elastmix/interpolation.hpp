#pragma once

#include <functional>

#include <Eigen/Core>

#include "elastmix/dof_map.hpp"
#include "elastmix/mesh.hpp"
#include "elastmix/piola.hpp"
#include "elastmix/reference_element.hpp"

namespace elastmix {

using TensorFunction = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Raviart-Thomas interpolant of a tensor field, row by row: every edge and
/// interior moment of the pulled-back rows is reproduced.
Eigen::VectorXd rt_interpolate(const Mesh& mesh, int k, const TensorFunction& tau);

/// L2-orthogonal projection of a vector field onto discontinuous P_k,
/// solved cell by cell against the local mass matrix.
Eigen::VectorXd l2_project(const Mesh& mesh, int k, const VectorFunction& v);

/// Point evaluation of discrete fields given by coefficient vectors.
class FieldEvaluator {
 public:
  FieldEvaluator(const Mesh& mesh, int k);

  const DofMap& dofs() const { return dofs_; }

  /// rho_h at the reference point (xhat, yhat) of `cell`.
  Eigen::Matrix2d rho(const Eigen::VectorXd& rho_coeffs, int cell, double xhat, double yhat) const;
  /// Row-wise divergence of rho_h.
  Eigen::Vector2d div_rho(const Eigen::VectorXd& rho_coeffs, int cell, double xhat,
                          double yhat) const;
  /// u_h at the reference point of `cell`.
  Eigen::Vector2d u(const Eigen::VectorXd& u_coeffs, int cell, double xhat, double yhat) const;

 private:
  const Mesh* mesh_;
  DofMap dofs_;
  ReferenceElement rt_;
  ScalarBasis pk_;
};

}  // namespace elastmix
