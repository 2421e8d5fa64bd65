#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "elastmix/assembly.hpp"

namespace elastmix {

/// Coordinate-format ASCII ("%%MatrixMarket matrix coordinate real ..."),
/// 1-based "i j value" entries. Symmetric output keeps the lower triangle.
/// Each line of `comment` becomes a '%' line after the banner.
void write_matrix_market(std::ostream& out, const SparseMatrix& m, bool symmetric,
                         const std::string& comment = {});
void write_matrix_market(std::ostream& out, const Eigen::VectorXd& v,
                         const std::string& comment = {});
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m, bool symmetric,
                         const std::string& comment = {});
void write_matrix_market(const std::filesystem::path& path, const Eigen::VectorXd& v,
                         const std::string& comment = {});

/// Reads either flavour back; symmetric files are expanded to full storage.
SparseMatrix read_matrix_market(std::istream& in);

}  // namespace elastmix
