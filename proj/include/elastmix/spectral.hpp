#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "elastmix/assembly.hpp"
#include "elastmix/material.hpp"
#include "elastmix/mesh.hpp"

namespace elastmix {

struct ArnoldiOptions {
  int subspace = 0;          // Krylov dimension; 0 picks max(2 nev + 10, 20)
  double tolerance = 1e-12;  // relative Ritz residual for acceptance
  int max_restarts = 500;
  int max_deflation_passes = 8;
  std::uint64_t seed = 0x5eed2024ULL;
};

/// Bordered saddle-point pencil K z = kappa Mhat z with
///   K    = [[A, B^T, c], [B, 0, 0], [c^T, 0, 0]],
///   Mhat = diag(0, -M, 0).
/// The last row/column enforces int tr(rho) = 0 through a multiplier.
struct PencilProblem {
  SparseMatrix K;
  SparseMatrix Mhat;
  SparseMatrix A;  // blocks of K, kept for the condensed solver
  SparseMatrix B;
  SparseMatrix M;  // displacement mass block (positive)
  Eigen::VectorXd c;
  Eigen::VectorXd identity;  // RT interpolant of the identity tensor, if known
  int n_rho = 0;
  int n_u = 0;
  int nev = 4;
  double shift = 0.0;
  ArnoldiOptions arnoldi;

  int size() const { return n_rho + n_u + 1; }
};

PencilProblem build_pencil(const AssembledSystem& system, int nev, double shift = 0.0,
                           ArnoldiOptions options = {});

struct EigenSolution {
  std::vector<double> eigenvalues;  // kappa_h, ascending
  std::vector<double> frequencies;  // sqrt(kappa_h)
  Eigen::MatrixXd rho;              // n_rho x nev
  Eigen::MatrixXd u;                // n_u x nev, M-orthonormal columns
  Eigen::VectorXd multiplier;       // nev
  std::vector<double> residuals;    // ||K z - kappa Mhat z||_2 / ||z||_2
  std::vector<int> cluster;         // equal ids mark a multiplicity cluster
  int operator_applications = 0;
  int restarts = 0;

  std::size_t size() const { return eigenvalues.size(); }
  /// Full pencil vector z = (rho, u, multiplier) of mode i.
  Eigen::VectorXd vector(std::size_t i) const;
};

/// Relative gap below which neighbouring eigenvalues form one cluster.
inline constexpr double kClusterTolerance = 1e-6;

/// Shift-invert Krylov-Schur iteration on (K - theta Mhat)^{-1} Mhat in the
/// M-semi-inner product, followed by explicitly deflated passes that recover
/// any copies of repeated eigenvalues the first pass missed. Returns the nev
/// eigenvalues above the shift closest to it.
///
/// All eigenvalues are positive, so for shift <= 0 the answer is the nev
/// smallest ones and the iteration runs with a negative internal shift
/// theta, where the displacement block can be eliminated and the rest
/// Cholesky-factored. A positive shift is used as given with a sparse LU.
EigenSolution solve_eigen(const PencilProblem& problem);

/// Limit problem lambda = infinity: the trace term of a(.,.) is dropped.
EigenSolution solve_limit_eigen(std::shared_ptr<const Mesh> mesh, int k, double mu, int nev,
                                double shift = 0.0, ArnoldiOptions options = {});

/// Convenience: mesh + material -> assembled system -> eigenpairs.
EigenSolution solve_material(std::shared_ptr<const Mesh> mesh, int k,
                             const MaterialParams& material, int nev, double shift = 0.0,
                             ArnoldiOptions options = {});

}  // namespace elastmix
