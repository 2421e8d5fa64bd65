#pragma once

#include <span>
#include <vector>

#include "elastmix/mesh.hpp"
#include "elastmix/reference_element.hpp"

namespace elastmix {

/// Global numbering for the tensor RT space and the vector P_k space.
///
/// Scalar RT DOFs: edge e, moment m -> e (k+1) + m; interior DOF j of
/// cell c -> E (k+1) + c k(k+1) + j. The tensor unknown is stored row by
/// row: rho DOF = row * n_scalar + scalar DOF. Displacement DOFs:
/// component * C dim(P_k) + c dim(P_k) + l.
///
/// The cell-local RT basis maps onto the global one up to a sign: the
/// Legendre moment m on an edge traversed against its global direction
/// flips by (-1)^(m+1) (normal and parameter both reverse).
class DofMap {
 public:
  DofMap() = default;
  DofMap(const Mesh& mesh, int k);

  int order() const { return k_; }
  int rt_local() const { return rt_local_; }
  int pk_local() const { return pk_local_; }
  int num_cells() const { return num_cells_; }

  int n_scalar() const { return n_scalar_; }
  int n_rho() const { return 2 * n_scalar_; }
  int n_u() const { return 2 * num_cells_ * pk_local_; }

  std::span<const int> cell_scalar_dofs(int c) const {
    return {scalar_dofs_.data() + static_cast<std::size_t>(c) * rt_local_,
            static_cast<std::size_t>(rt_local_)};
  }
  std::span<const double> cell_signs(int c) const {
    return {signs_.data() + static_cast<std::size_t>(c) * rt_local_,
            static_cast<std::size_t>(rt_local_)};
  }
  int rho_dof(int row, int scalar) const { return row * n_scalar_ + scalar; }
  int u_dof(int component, int cell, int l) const {
    return component * num_cells_ * pk_local_ + cell * pk_local_ + l;
  }

 private:
  int k_ = 0;
  int rt_local_ = 0;
  int pk_local_ = 0;
  int num_cells_ = 0;
  int n_scalar_ = 0;
  std::vector<int> scalar_dofs_;
  std::vector<double> signs_;
};

}  // namespace elastmix
