#include <string>
#include <vector>

#include "elastmix/error.hpp"
#include "elastmix/interpolation.hpp"
#include "elastmix/spectral.hpp"

namespace elastmix {

PencilProblem build_pencil(const AssembledSystem& system, int nev, double shift,
                           ArnoldiOptions options) {
  const auto n_rho = static_cast<int>(system.A.rows());
  const auto n_u = static_cast<int>(system.M.rows());
  if (system.A.cols() != n_rho || system.B.rows() != n_u || system.B.cols() != n_rho ||
      system.M.cols() != n_u || system.c.size() != n_rho)
    throw Error(ErrorCode::DimensionMismatch,
                "inconsistent block sizes: A " + std::to_string(system.A.rows()) + "x" +
                    std::to_string(system.A.cols()) + ", B " + std::to_string(system.B.rows()) +
                    "x" + std::to_string(system.B.cols()) + ", M " +
                    std::to_string(system.M.rows()) + "x" + std::to_string(system.M.cols()) +
                    ", c " + std::to_string(system.c.size()));
  if (nev < 1) throw Error(ErrorCode::InvalidArgument, "nev must be positive");

  PencilProblem p;
  p.n_rho = n_rho;
  p.n_u = n_u;
  p.nev = nev;
  p.shift = shift;
  p.arnoldi = options;
  p.A = system.A;
  p.B = system.B;
  p.M = system.M;
  p.c = system.c;
  if (system.mesh)
    p.identity = rt_interpolate(*system.mesh, system.k,
                                [](const Eigen::Vector2d&) { return Eigen::Matrix2d::Identity().eval(); });
  const int n = p.size();
  const int mult = n_rho + n_u;

  std::vector<Eigen::Triplet<double, int>> kt, mt;
  kt.reserve(system.A.nonZeros() + 2 * system.B.nonZeros() + 2 * n_rho);
  for (int col = 0; col < system.A.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(system.A, col); it; ++it)
      kt.emplace_back(it.row(), it.col(), it.value());
  for (int col = 0; col < system.B.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(system.B, col); it; ++it) {
      kt.emplace_back(n_rho + it.row(), it.col(), it.value());
      kt.emplace_back(it.col(), n_rho + it.row(), it.value());
    }
  for (int i = 0; i < n_rho; ++i) {
    if (system.c[i] == 0.0) continue;
    kt.emplace_back(mult, i, system.c[i]);
    kt.emplace_back(i, mult, system.c[i]);
  }
  for (int col = 0; col < system.M.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(system.M, col); it; ++it)
      mt.emplace_back(n_rho + it.row(), n_rho + it.col(), -it.value());

  p.K.resize(n, n);
  p.K.setFromTriplets(kt.begin(), kt.end());
  p.K.makeCompressed();
  p.Mhat.resize(n, n);
  p.Mhat.setFromTriplets(mt.begin(), mt.end());
  p.Mhat.makeCompressed();
  return p;
}

Eigen::VectorXd EigenSolution::vector(std::size_t i) const {
  Eigen::VectorXd z(rho.rows() + u.rows() + 1);
  z << rho.col(i), u.col(i), multiplier[i];
  return z;
}

EigenSolution solve_material(std::shared_ptr<const Mesh> mesh, int k,
                             const MaterialParams& material, int nev, double shift,
                             ArnoldiOptions options) {
  const auto system = assemble_system(std::move(mesh), k, material);
  return solve_eigen(build_pencil(system, nev, shift, options));
}

EigenSolution solve_limit_eigen(std::shared_ptr<const Mesh> mesh, int k, double mu, int nev,
                                double shift, ArnoldiOptions options) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  MaterialParams m = build_lame(3.0 * mu, 0.5);
  m.mu = mu;
  return solve_material(std::move(mesh), k, m, nev, shift, options);
}

}  // namespace elastmix
