#include "elastmix/dof_map.hpp"

namespace elastmix {

DofMap::DofMap(const Mesh& mesh, int k)
    : k_(k),
      rt_local_(rt_dimension(k)),
      pk_local_(pk_dimension(k)),
      num_cells_(static_cast<int>(mesh.num_cells())) {
  const int per_edge = k + 1;
  const int interior = k * (k + 1);
  const int n_edges = static_cast<int>(mesh.num_edges());
  n_scalar_ = n_edges * per_edge + num_cells_ * interior;
  scalar_dofs_.resize(static_cast<std::size_t>(num_cells_) * rt_local_);
  signs_.resize(scalar_dofs_.size());
  for (int c = 0; c < num_cells_; ++c) {
    const auto& ce = mesh.cell_edges()[c];
    const auto& cs = mesh.edge_signs()[c];
    int j = 0;
    const std::size_t base = static_cast<std::size_t>(c) * rt_local_;
    for (int i = 0; i < 3; ++i) {
      for (int m = 0; m < per_edge; ++m, ++j) {
        scalar_dofs_[base + j] = ce[i] * per_edge + m;
        signs_[base + j] = (cs[i] > 0 || m % 2 == 1) ? 1.0 : -1.0;
      }
    }
    for (int l = 0; l < interior; ++l, ++j) {
      scalar_dofs_[base + j] = n_edges * per_edge + c * interior + l;
      signs_[base + j] = 1.0;
    }
  }
}

}  // namespace elastmix
