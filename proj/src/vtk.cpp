#include "elastmix/vtk.hpp"

#include <fstream>
#include <ostream>

#include "elastmix/error.hpp"
#include "elastmix/interpolation.hpp"
#include "elastmix/report_io.hpp"

namespace elastmix {

Eigen::MatrixX2d vertex_average(const Mesh& mesh, int k, const Eigen::VectorXd& u) {
  const FieldEvaluator eval(mesh, k);
  if (u.size() != eval.dofs().n_u())
    throw Error(ErrorCode::DimensionMismatch, "vertex_average: coefficient vector has wrong size");
  static const double ref[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  Eigen::MatrixX2d sum = Eigen::MatrixX2d::Zero(mesh.num_vertices(), 2);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(mesh.num_vertices());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const int v = mesh.cells()[c][i];
      sum.row(v) += eval.u(u, static_cast<int>(c), ref[i][0], ref[i][1]).transpose();
      ++count[v];
    }
  }
  for (Eigen::Index v = 0; v < sum.rows(); ++v)
    if (count[v] > 0) sum.row(v) /= count[v];
  return sum;
}

void write_vtk(std::ostream& out, const Mesh& mesh, int k, const Eigen::VectorXd& u,
               const std::string& title) {
  const Eigen::MatrixX2d vals = vertex_average(mesh, k, u);
  const auto nv = mesh.num_vertices();
  const auto nc = mesh.num_cells();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& p : mesh.vertices())
    out << format_double(p.x()) << ' ' << format_double(p.y()) << " 0\n";
  out << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (const auto& c : mesh.cells()) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) out << "5\n";
  out << "POINT_DATA " << nv << "\nVECTORS u double\n";
  for (std::size_t v = 0; v < nv; ++v)
    out << format_double(vals(v, 0)) << ' ' << format_double(vals(v, 1)) << " 0\n";
  out << "SCALARS magnitude double 1\nLOOKUP_TABLE default\n";
  for (std::size_t v = 0; v < nv; ++v) out << format_double(vals.row(v).norm()) << '\n';
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, int k,
               const Eigen::VectorXd& u, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_vtk(out, mesh, k, u, title);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace elastmix
