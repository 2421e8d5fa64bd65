#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "elastmix/dof_map.hpp"
#include "elastmix/material.hpp"
#include "elastmix/mesh.hpp"

namespace elastmix {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Quadrature degree used by every assembly routine: 2(k+1) + 2.
inline constexpr int assembly_quadrature_degree(int k) { return 2 * (k + 1) + 2; }

/// Scale of the displacement basis: q_l = phat_l / sqrt(2), so each q_l has
/// unit mean square on every cell and the mass matrix is |T| times identity.
inline constexpr double kDisplacementBasisScale = 0.70710678118654752440;

/// a(xi, tau) = (1/mu) int xi:tau - (lambda+mu)/(mu(n lambda+(n+1)mu)) int tr xi tr tau.
/// Throws for the limit material.
SparseMatrix assemble_a_original(const Mesh& mesh, int k, const MaterialParams& material);

/// a(xi, tau) = (1/mu) int xi^d:tau^d + 1/(n(n lambda+(n+1)mu)) int tr xi tr tau,
/// with the trace term dropped for lambda = infinity.
SparseMatrix assemble_a_deviatoric(const Mesh& mesh, int k, const MaterialParams& material);

/// b(tau, v) = int v . div tau; rows are displacement DOFs.
SparseMatrix assemble_b(const Mesh& mesh, int k);

/// (u, v) on the discontinuous P_k vector space.
SparseMatrix assemble_mass(const Mesh& mesh, int k);

/// c^T x = int tr(tau_h) for the tensor field with coefficients x.
Eigen::VectorXd trace_constraint(const Mesh& mesh, int k);

struct AssembledSystem {
  std::shared_ptr<const Mesh> mesh;
  int k = 0;
  MaterialParams material;
  DofMap dofs;
  SparseMatrix A;  // n_rho x n_rho
  SparseMatrix B;  // n_u x n_rho
  SparseMatrix M;  // n_u x n_u
  Eigen::VectorXd c;
};

/// Assembles every block; A uses the deviatoric form (valid for all materials).
AssembledSystem assemble_system(std::shared_ptr<const Mesh> mesh, int k,
                                const MaterialParams& material);

}  // namespace elastmix
