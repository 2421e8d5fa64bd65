#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "elastmix/assembly.hpp"

namespace elastmix {

class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const = 0;
};

/// Sparse LU of a square (possibly indefinite) matrix with a fill-reducing
/// ordering (Eigen SparseLU with COLAMD).
class SparseFactorization : public LinearSolver {
 public:
  /// Throws Error(FactorizationFailed) when the matrix is numerically singular.
  explicit SparseFactorization(const SparseMatrix& matrix);
  ~SparseFactorization() override;
  SparseFactorization(SparseFactorization&&) noexcept;
  SparseFactorization& operator=(SparseFactorization&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const override;
  Eigen::Index size() const { return n_; }
  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Eigen::Index n_ = 0;
};

/// Solver for the bordered saddle-point matrix
///   [[A, B^T, c], [B, -sigma M, 0], [c^T, 0, 0]],  sigma > 0,
/// through the condensed matrix S = A + B^T M^{-1} B / sigma, which is
/// symmetric positive semidefinite with at most the kernel spanned by
/// `kernel_hint`. S plus a one-entry diagonal update at the largest entry
/// of the hint is Cholesky-factored; the border is recovered exactly with
/// a 2x2 correction. M must be block diagonal.
class CondensedPencilSolver : public LinearSolver {
 public:
  CondensedPencilSolver(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix& M,
                        const Eigen::VectorXd& c, double sigma, const Eigen::VectorXd& kernel_hint);
  ~CondensedPencilSolver() override;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Block-diagonal inverse of a matrix whose nonzero pattern splits into
/// disjoint dense diagonal blocks.
SparseMatrix block_diagonal_inverse(const SparseMatrix& M);

}  // namespace elastmix
