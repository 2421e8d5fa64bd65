#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "elastmix/mesh.hpp"

namespace elastmix {

/// Cellwise P_k displacement sampled at the vertices and averaged over the
/// adjacent cells. Returns a num_vertices x 2 matrix.
Eigen::MatrixX2d vertex_average(const Mesh& mesh, int k, const Eigen::VectorXd& u);

/// Legacy ASCII UNSTRUCTURED_GRID with point data "u" (VECTORS) and
/// "magnitude" (SCALARS).
void write_vtk(std::ostream& out, const Mesh& mesh, int k, const Eigen::VectorXd& u,
               const std::string& title);
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, int k,
               const Eigen::VectorXd& u, const std::string& title);

}  // namespace elastmix
