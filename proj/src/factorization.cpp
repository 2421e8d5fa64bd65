#include "elastmix/factorization.hpp"

#include <cmath>
#include <vector>

#include <Eigen/LU>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "elastmix/error.hpp"

namespace elastmix {

struct SparseFactorization::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseFactorization::SparseFactorization(const SparseMatrix& matrix)
    : impl_(std::make_unique<Impl>()), n_(matrix.rows()) {
  if (matrix.rows() != matrix.cols())
    throw Error(ErrorCode::DimensionMismatch, "factorization needs a square matrix");
  SparseMatrix m = matrix;
  m.makeCompressed();
  impl_->lu.compute(m);
  if (impl_->lu.info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationFailed,
                "sparse factorization failed (" + impl_->lu.lastErrorMessage() +
                    "); the shifted pencil may be singular, try perturbing the shift");
}

SparseFactorization::~SparseFactorization() = default;
SparseFactorization::SparseFactorization(SparseFactorization&&) noexcept = default;
SparseFactorization& SparseFactorization::operator=(SparseFactorization&&) noexcept = default;

Eigen::VectorXd SparseFactorization::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (!x.allFinite())
    throw Error(ErrorCode::FactorizationFailed, "solve produced non-finite values (singular matrix)");
  return x;
}

std::string SparseFactorization::backend() { return "eigen-sparselu"; }

SparseMatrix block_diagonal_inverse(const SparseMatrix& M) {
  const auto n = static_cast<int>(M.rows());
  if (M.cols() != n) throw Error(ErrorCode::DimensionMismatch, "block inverse needs a square matrix");
  std::vector<Eigen::Triplet<double, int>> trips;
  int start = 0;
  while (start < n) {
    // A block ends where no column so far reaches below it.
    int end = start + 1;
    for (int col = start; col < end; ++col)
      for (SparseMatrix::InnerIterator it(M, col); it; ++it) {
        if (it.row() < start)
          throw Error(ErrorCode::InvalidArgument, "matrix is not block diagonal");
        end = std::max(end, static_cast<int>(it.row()) + 1);
      }
    const Eigen::MatrixXd block = Eigen::MatrixXd(M.block(start, start, end - start, end - start));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (!lu.isInvertible()) throw Error(ErrorCode::FactorizationFailed, "singular mass block");
    const Eigen::MatrixXd inv = lu.inverse();
    for (int j = 0; j < inv.cols(); ++j)
      for (int i = 0; i < inv.rows(); ++i) trips.emplace_back(start + i, start + j, inv(i, j));
    start = end;
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

struct CondensedPencilSolver::Impl {
  int n_rho = 0, n_u = 0;
  double sigma = 1.0, gamma = 0.0;
  int pin = 0;
  SparseMatrix B, Minv;
  Eigen::VectorXd c, q, r;
  Eigen::Matrix2d border_inverse;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
};

CondensedPencilSolver::CondensedPencilSolver(const SparseMatrix& A, const SparseMatrix& B,
                                             const SparseMatrix& M, const Eigen::VectorXd& c,
                                             double sigma, const Eigen::VectorXd& kernel_hint)
    : impl_(std::make_unique<Impl>()) {
  auto& d = *impl_;
  d.n_rho = static_cast<int>(A.rows());
  d.n_u = static_cast<int>(M.rows());
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "condensed solver needs sigma > 0");
  if (A.cols() != d.n_rho || B.rows() != d.n_u || B.cols() != d.n_rho || c.size() != d.n_rho)
    throw Error(ErrorCode::DimensionMismatch, "condensed solver: inconsistent block sizes");
  d.sigma = sigma;
  d.B = B;
  d.c = c;
  d.Minv = block_diagonal_inverse(M);

  SparseMatrix S = A + SparseMatrix(B.transpose() * d.Minv * B) / sigma;
  const Eigen::VectorXd& hint = kernel_hint.size() == d.n_rho ? kernel_hint : c;
  hint.cwiseAbs().maxCoeff(&d.pin);
  d.gamma = S.coeff(d.pin, d.pin);
  S.coeffRef(d.pin, d.pin) += d.gamma;
  S.prune(0.0);
  d.llt.compute(S);
  if (d.llt.info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationFailed, "Cholesky factorization of the condensed matrix failed");

  d.q = d.llt.solve(c);
  d.r = d.llt.solve(Eigen::VectorXd::Unit(d.n_rho, d.pin));
  Eigen::Matrix2d border;
  border << 1.0 - d.gamma * d.r[d.pin], d.q[d.pin], d.gamma * c.dot(d.r), -c.dot(d.q);
  Eigen::FullPivLU<Eigen::Matrix2d> lu(border);
  if (!lu.isInvertible())
    throw Error(ErrorCode::FactorizationFailed, "bordered system is singular (trace constraint)");
  d.border_inverse = lu.inverse();
}

CondensedPencilSolver::~CondensedPencilSolver() = default;

Eigen::VectorXd CondensedPencilSolver::solve(const Eigen::VectorXd& rhs) const {
  const auto& d = *impl_;
  if (rhs.size() != d.n_rho + d.n_u + 1)
    throw Error(ErrorCode::DimensionMismatch, "condensed solver: right-hand side has wrong size");
  const auto f = rhs.head(d.n_rho);
  const Eigen::VectorXd g = rhs.segment(d.n_rho, d.n_u);
  const double s = rhs[d.n_rho + d.n_u];

  const Eigen::VectorXd p = d.llt.solve(f + d.B.transpose() * (d.Minv * g) / d.sigma);
  const Eigen::Vector2d ay = d.border_inverse * Eigen::Vector2d(p[d.pin], s - d.c.dot(p));
  Eigen::VectorXd z(rhs.size());
  auto x = z.head(d.n_rho);
  x = p - ay[1] * d.q + d.gamma * ay[0] * d.r;
  z.segment(d.n_rho, d.n_u) = d.Minv * (d.B * x - g) / d.sigma;
  z[d.n_rho + d.n_u] = ay[1];
  if (!z.allFinite())
    throw Error(ErrorCode::FactorizationFailed, "solve produced non-finite values (singular matrix)");
  return z;
}

}  // namespace elastmix
