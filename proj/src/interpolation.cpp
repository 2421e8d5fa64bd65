#include "elastmix/interpolation.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "elastmix/assembly.hpp"
#include "elastmix/quadrature.hpp"

namespace elastmix {

Eigen::VectorXd rt_interpolate(const Mesh& mesh, int k, const TensorFunction& tau) {
  const ReferenceElement rt(k);
  const DofMap dofs(mesh, k);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs.n_rho());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::of_cell(mesh, c);
    const auto sd = dofs.cell_scalar_dofs(static_cast<int>(c));
    const auto sg = dofs.cell_signs(static_cast<int>(c));
    for (int r = 0; r < 2; ++r) {
      const Eigen::VectorXd d = rt.apply_dofs([&](double xh, double yh) -> Eigen::Vector2d {
        const Eigen::Vector2d row = tau(g.map(xh, yh)).row(r).transpose();
        return piola_pullback(g, row);
      });
      for (int j = 0; j < rt.dimension(); ++j) x[dofs.rho_dof(r, sd[j])] = sg[j] * d[j];
    }
  }
  return x;
}

Eigen::VectorXd l2_project(const Mesh& mesh, int k, const VectorFunction& v) {
  const ScalarBasis pk(k);
  const DofMap dofs(mesh, k);
  const auto rule = quadrature(kMaxQuadratureDegree);
  const Eigen::MatrixXd tab = pk.tabulate(rule) * kDisplacementBasisScale;
  const int np = dofs.pk_local();
  Eigen::VectorXd x(dofs.n_u());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::of_cell(mesh, c);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(np, np);
    Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(np, 2);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(g.det);
      mass += w * tab.row(q).transpose() * tab.row(q);
      rhs += w * tab.row(q).transpose() * v(g.map(rule.x(q), rule.y(q))).transpose();
    }
    const Eigen::MatrixX2d sol = mass.llt().solve(rhs);
    for (int comp = 0; comp < 2; ++comp)
      for (int l = 0; l < np; ++l) x[dofs.u_dof(comp, static_cast<int>(c), l)] = sol(l, comp);
  }
  return x;
}

FieldEvaluator::FieldEvaluator(const Mesh& mesh, int k)
    : mesh_(&mesh), dofs_(mesh, k), rt_(k), pk_(k) {}

Eigen::Matrix2d FieldEvaluator::rho(const Eigen::VectorXd& coeffs, int cell, double xh,
                                    double yh) const {
  const auto g = CellGeometry::of_cell(*mesh_, cell);
  const Eigen::MatrixX2d phi = piola_map(g, rt_.eval(xh, yh));
  const auto sd = dofs_.cell_scalar_dofs(cell);
  const auto sg = dofs_.cell_signs(cell);
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < rt_.dimension(); ++j)
      out.row(r) += sg[j] * coeffs[dofs_.rho_dof(r, sd[j])] * phi.row(j);
  return out;
}

Eigen::Vector2d FieldEvaluator::div_rho(const Eigen::VectorXd& coeffs, int cell, double xh,
                                        double yh) const {
  const auto g = CellGeometry::of_cell(*mesh_, cell);
  const Eigen::VectorXd div = piola_divergence(g, rt_.divergence(xh, yh));
  const auto sd = dofs_.cell_scalar_dofs(cell);
  const auto sg = dofs_.cell_signs(cell);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < rt_.dimension(); ++j)
      out[r] += sg[j] * coeffs[dofs_.rho_dof(r, sd[j])] * div[j];
  return out;
}

Eigen::Vector2d FieldEvaluator::u(const Eigen::VectorXd& coeffs, int cell, double xh,
                                  double yh) const {
  const Eigen::VectorXd q = pk_.eval(xh, yh) * kDisplacementBasisScale;
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int comp = 0; comp < 2; ++comp)
    for (int l = 0; l < pk_.dimension(); ++l) out[comp] += coeffs[dofs_.u_dof(comp, cell, l)] * q[l];
  return out;
}

}  // namespace elastmix
