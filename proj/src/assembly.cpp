#include "elastmix/assembly.hpp"

#include <cmath>
#include <vector>

#include "elastmix/error.hpp"
#include "elastmix/piola.hpp"
#include "elastmix/quadrature.hpp"
#include "elastmix/reference_element.hpp"

namespace elastmix {

namespace {

using Triplet = Eigen::Triplet<double, int>;

// Reference tables shared by all cells of one assembly pass.
struct ElementTables {
  explicit ElementTables(int k)
      : rt(k), pk(k), rule(quadrature(assembly_quadrature_degree(k))),
        rt_tab(rt.tabulate(rule)), pk_tab(pk.tabulate(rule) * kDisplacementBasisScale) {}

  ReferenceElement rt;
  ScalarBasis pk;
  QuadratureRule rule;
  ReferenceElement::Tabulation rt_tab;
  Eigen::MatrixXd pk_tab;  // nq x dim(P_k), already scaled
};

void check_order(int k) {
  if (k < 0 || k > kMaxOrder)
    throw Error(ErrorCode::Unsupported, "polynomial order " + std::to_string(k) + " is not supported");
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& trips) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

// Scatters a symmetric local tensor block (local index r * dim + j).
void scatter_rho_rho(const DofMap& dofs, int c, const Eigen::MatrixXd& local,
                     std::vector<Triplet>& trips) {
  const int dim = dofs.rt_local();
  const auto sd = dofs.cell_scalar_dofs(c);
  const auto sg = dofs.cell_signs(c);
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < dim; ++j)
      for (int s = 0; s < 2; ++s)
        for (int l = 0; l < dim; ++l) {
          const double v = local(r * dim + j, s * dim + l);
          if (v == 0.0) continue;
          trips.emplace_back(dofs.rho_dof(r, sd[j]), dofs.rho_dof(s, sd[l]), sg[j] * sg[l] * v);
        }
}

enum class AForm { Original, Deviatoric };

SparseMatrix assemble_a(const Mesh& mesh, int k, const MaterialParams& material, AForm form) {
  check_order(k);
  if (!(material.mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  const ElementTables tab(k);
  const DofMap dofs(mesh, k);
  const int dim = dofs.rt_local();
  const double inv_mu = 1.0 / material.mu;
  std::vector<Triplet> trips;
  trips.reserve(mesh.num_cells() * 4 * dim * dim);

  Eigen::MatrixXd local(2 * dim, 2 * dim);
  Eigen::MatrixXd dev(2 * dim, 4);
  Eigen::VectorXd tr(2 * dim);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::of_cell(mesh, c);
    local.setZero();
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double w = tab.rule.weights[q] * std::abs(g.det);
      const Eigen::MatrixX2d phi = piola_map(g, tab.rt_tab.values[q]);
      if (form == AForm::Original) {
        // tau:sigma couples equal rows only; tr tau picks component r of row r.
        const Eigen::MatrixXd gram = phi * phi.transpose();
        local.topLeftCorner(dim, dim) += w * inv_mu * gram;
        local.bottomRightCorner(dim, dim) += w * inv_mu * gram;
        tr.head(dim) = phi.col(0);
        tr.tail(dim) = phi.col(1);
        local -= w * material.original_trace_coefficient() * tr * tr.transpose();
      } else {
        // Flattened deviators (t11, t12, t21, t22) of each tensor basis function.
        for (int r = 0; r < 2; ++r) {
          for (int j = 0; j < dim; ++j) {
            Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
            t.row(r) = phi.row(j);
            const double trace = t.trace();
            t -= 0.5 * trace * Eigen::Matrix2d::Identity();
            dev.row(r * dim + j) << t(0, 0), t(0, 1), t(1, 0), t(1, 1);
            tr[r * dim + j] = trace;
          }
        }
        local += w * inv_mu * dev * dev.transpose();
        const double coef = material.deviatoric_trace_coefficient();
        if (coef != 0.0) local += w * coef * tr * tr.transpose();
      }
    }
    const Eigen::MatrixXd sym = 0.5 * (local + local.transpose());
    scatter_rho_rho(dofs, static_cast<int>(c), sym, trips);
  }
  return from_triplets(dofs.n_rho(), dofs.n_rho(), trips);
}

}  // namespace

SparseMatrix assemble_a_original(const Mesh& mesh, int k, const MaterialParams& material) {
  if (material.limit)
    throw Error(ErrorCode::InvalidArgument,
                "assemble_a_original is undefined for the limit material (lambda = infinity)");
  return assemble_a(mesh, k, material, AForm::Original);
}

SparseMatrix assemble_a_deviatoric(const Mesh& mesh, int k, const MaterialParams& material) {
  return assemble_a(mesh, k, material, AForm::Deviatoric);
}

SparseMatrix assemble_b(const Mesh& mesh, int k) {
  check_order(k);
  const ElementTables tab(k);
  const DofMap dofs(mesh, k);
  const int dim = dofs.rt_local();
  const int np = dofs.pk_local();
  std::vector<Triplet> trips;
  trips.reserve(mesh.num_cells() * 2 * dim * np);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::of_cell(mesh, c);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(np, dim);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double w = tab.rule.weights[q] * std::abs(g.det);
      const Eigen::VectorXd div = piola_divergence(g, tab.rt_tab.divergence.row(q).transpose());
      local += w * tab.pk_tab.row(q).transpose() * div.transpose();
    }
    const auto sd = dofs.cell_scalar_dofs(static_cast<int>(c));
    const auto sg = dofs.cell_signs(static_cast<int>(c));
    for (int comp = 0; comp < 2; ++comp)
      for (int l = 0; l < np; ++l)
        for (int j = 0; j < dim; ++j) {
          const double v = local(l, j);
          if (v == 0.0) continue;
          trips.emplace_back(dofs.u_dof(comp, static_cast<int>(c), l), dofs.rho_dof(comp, sd[j]),
                             sg[j] * v);
        }
  }
  return from_triplets(dofs.n_u(), dofs.n_rho(), trips);
}

SparseMatrix assemble_mass(const Mesh& mesh, int k) {
  check_order(k);
  const ElementTables tab(k);
  const DofMap dofs(mesh, k);
  const int np = dofs.pk_local();
  std::vector<Triplet> trips;
  trips.reserve(mesh.num_cells() * 2 * np * np);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::of_cell(mesh, c);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(np, np);
    for (std::size_t q = 0; q < tab.rule.size(); ++q)
      local += tab.rule.weights[q] * std::abs(g.det) * tab.pk_tab.row(q).transpose() * tab.pk_tab.row(q);
    local = 0.5 * (local + local.transpose()).eval();
    for (int comp = 0; comp < 2; ++comp)
      for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b)
          trips.emplace_back(dofs.u_dof(comp, static_cast<int>(c), a),
                             dofs.u_dof(comp, static_cast<int>(c), b), local(a, b));
  }
  return from_triplets(dofs.n_u(), dofs.n_u(), trips);
}

Eigen::VectorXd trace_constraint(const Mesh& mesh, int k) {
  check_order(k);
  const ElementTables tab(k);
  const DofMap dofs(mesh, k);
  const int dim = dofs.rt_local();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs.n_rho());
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto g = CellGeometry::of_cell(mesh, cell);
    Eigen::MatrixX2d integral = Eigen::MatrixX2d::Zero(dim, 2);
    for (std::size_t q = 0; q < tab.rule.size(); ++q)
      integral += tab.rule.weights[q] * std::abs(g.det) * piola_map(g, tab.rt_tab.values[q]);
    const auto sd = dofs.cell_scalar_dofs(static_cast<int>(cell));
    const auto sg = dofs.cell_signs(static_cast<int>(cell));
    for (int r = 0; r < 2; ++r)
      for (int j = 0; j < dim; ++j) c[dofs.rho_dof(r, sd[j])] += sg[j] * integral(j, r);
  }
  return c;
}

AssembledSystem assemble_system(std::shared_ptr<const Mesh> mesh, int k,
                                const MaterialParams& material) {
  if (!mesh) throw Error(ErrorCode::InvalidArgument, "assemble_system needs a mesh");
  AssembledSystem sys;
  sys.mesh = mesh;
  sys.k = k;
  sys.material = material;
  sys.A = assemble_a_deviatoric(*mesh, k, material);
  sys.B = assemble_b(*mesh, k);
  sys.M = assemble_mass(*mesh, k);
  sys.c = trace_constraint(*mesh, k);
  sys.dofs = DofMap(*mesh, k);
  return sys;
}

}  // namespace elastmix
