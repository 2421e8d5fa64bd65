#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace elastmix {

using Point = Eigen::Vector2d;

enum class DomainKind { UnitSquare, LShape, Disk, Imported };

struct DomainSpec {
  DomainKind kind = DomainKind::UnitSquare;
  std::filesystem::path file;  // only read for DomainKind::Imported

  static DomainSpec unit_square() { return {DomainKind::UnitSquare, {}}; }
  static DomainSpec l_shape() { return {DomainKind::LShape, {}}; }
  static DomainSpec disk() { return {DomainKind::Disk, {}}; }
  static DomainSpec imported(std::filesystem::path p) {
    return {DomainKind::Imported, std::move(p)};
  }
};

std::string to_string(DomainKind kind);
/// Accepts "square", "lshape", "disk" (and the enum spellings).
DomainKind parse_domain_kind(const std::string& name);

enum class GridDiagonal { Rising, Falling, Alternating };

/// Diagonal used to split grid square (ix, iy). Alternating uses the rising
/// diagonal when ix + iy is even and the falling one otherwise, which keeps
/// the square mesh invariant under the symmetries of the square.
inline constexpr GridDiagonal kGridDiagonal = GridDiagonal::Alternating;

/// Conforming triangulation with globally oriented edges.
///
/// Local edge i of a cell joins local vertices (i+1)%3 and (i+2)%3, so it
/// lies opposite vertex i. Global edges run from the lower to the higher
/// vertex index; `edge_signs` is +1 where the counter-clockwise local
/// traversal agrees with that direction.
class Mesh {
 public:
  Mesh() = default;

  /// Builds topology from raw geometry and validates every invariant.
  /// Throws Error(NonConforming | InvertedCell | DegenerateCell | InvalidArgument).
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
       int refinement = 1);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }
  const std::vector<std::array<int, 3>>& edge_signs() const { return edge_signs_; }
  const std::vector<bool>& boundary_edge() const { return boundary_edge_; }
  /// Cells adjacent to each edge; the second entry is -1 on the boundary.
  const std::vector<std::array<int, 2>>& edge_cells() const { return edge_cells_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_boundary_edges() const;

  int refinement() const { return refinement_; }
  /// Largest cell diameter.
  double h() const { return h_; }

  double cell_area(std::size_t c) const;
  double cell_diameter(std::size_t c) const;
  /// Smallest interior angle over the mesh, in degrees.
  double min_angle_degrees() const;
  double total_area() const;

  std::array<Point, 3> cell_points(std::size_t c) const {
    const auto& t = cells_[c];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  }

 private:
  void build_topology();
  void check_hanging_nodes() const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> edge_signs_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<bool> boundary_edge_;
  int refinement_ = 1;
  double h_ = 0.0;
};

/// Meshes of the built-in domains at refinement N:
///  - UnitSquare: N x N grid of (0,1)^2, each square split by one diagonal.
///  - LShape: (-1,1)^2 minus [-1,0]^2 with N subdivisions per unit length.
///  - Disk: N concentric rings at radius j/N holding 8j vertices each,
///    plus a centre fan; boundary vertices lie on the unit circle.
Mesh generate_mesh(const DomainSpec& spec, int N);

/// ASCII format: "mesh 2 tri", "vertices n" + n lines "x y",
/// "cells m" + m lines "i j k" (0-based). Lines starting with # are skipped.
Mesh read_mesh(std::istream& in);
Mesh import_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh, const std::string& comment = {});
void export_mesh(const std::filesystem::path& path, const Mesh& mesh,
                 const std::string& comment = {});

}  // namespace elastmix
