#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "elastmix/error.hpp"
#include "elastmix/factorization.hpp"
#include "elastmix/spectral.hpp"

namespace elastmix {

namespace {

// Ritz values below this fraction of the largest one are treated as images
// of infinite pencil eigenvalues.
constexpr double kInfiniteFilter = 1e-10;

// Explicit zeros change the fill-reducing ordering, so they are pruned.
SparseMatrix shifted(const PencilProblem& p, double theta) {
  SparseMatrix s = theta == 0.0 ? p.K : SparseMatrix(p.K - theta * p.Mhat);
  s.prune(0.0);
  return s;
}

bool has_blocks(const PencilProblem& p) {
  return p.A.rows() == p.n_rho && p.B.rows() == p.n_u && p.c.size() == p.n_rho;
}

std::unique_ptr<LinearSolver> make_solver(const PencilProblem& p, double theta) {
  if (theta < 0.0 && has_blocks(p)) {
    try {
      return std::make_unique<CondensedPencilSolver>(p.A, p.B, p.M, p.c, -theta, p.identity);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FactorizationFailed) throw;
    }
  }
  return std::make_unique<SparseFactorization>(shifted(p, theta));
}

// y = (K - theta Mhat)^{-1} Mhat x together with the M-semi-inner product
// on the displacement block. Mhat only sees the displacement block, so
// every image lies in the range of the operator and is fixed by its
// displacement part.
class ShiftInvertOperator {
 public:
  ShiftInvertOperator(const PencilProblem& p, double theta)
      : n_rho_(p.n_rho), n_u_(p.n_u), theta_(theta), M_(p.M), solver_(make_solver(p, theta)) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& x) {
    ++applications;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(x.size());
    rhs.segment(n_rho_, n_u_) = -(M_ * x.segment(n_rho_, n_u_));
    return solver_->solve(rhs);
  }

  double theta() const { return theta_; }
  Eigen::VectorXd m_times_u(const Eigen::VectorXd& x) const { return M_ * x.segment(n_rho_, n_u_); }
  double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.segment(n_rho_, n_u_).dot(M_ * y.segment(n_rho_, n_u_));
  }
  double norm(const Eigen::VectorXd& x) const { return std::sqrt(std::max(inner(x, x), 0.0)); }

  // Projections V^T M w for the columns of V (displacement rows only).
  Eigen::VectorXd project(const Eigen::MatrixXd& V, int cols, const Eigen::VectorXd& w) const {
    const Eigen::VectorXd mw = m_times_u(w);
    return V.middleRows(n_rho_, n_u_).leftCols(cols).transpose() * mw;
  }

  int n_rho() const { return n_rho_; }
  int n_u() const { return n_u_; }
  int applications = 0;

 private:
  int n_rho_;
  int n_u_;
  double theta_;
  const SparseMatrix& M_;
  std::unique_ptr<LinearSolver> solver_;
};

// Deterministic start vector: uniform in [-1, 1) from a fixed seed with
// the constraint component zeroed.
Eigen::VectorXd start_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  x[n - 1] = 0.0;
  return x;
}

constexpr double kInitialSigma = 1.0;

double lowest_eigenvalue_estimate(ShiftInvertOperator& op, int n, std::uint64_t seed) {
  Eigen::VectorXd x = op.apply(start_vector(n, seed));
  double nu = 0.0;
  for (int it = 0; it < 6; ++it) {
    const double nx = op.norm(x);
    if (!(nx > 0.0)) return -1.0;
    x /= nx;
    const Eigen::VectorXd y = op.apply(x);
    nu = op.inner(x, y);
    x = y;
  }
  return nu > 0.0 ? op.theta() + 1.0 / nu : -1.0;
}

struct RitzSet {
  std::vector<double> values;  // descending
  Eigen::MatrixXd vectors;     // columns
};

// Removes the components of w along the locked (M-orthonormal) vectors.
void deflate(const ShiftInvertOperator& op, const Eigen::MatrixXd& locked, Eigen::VectorXd& w) {
  if (locked.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass)
    w -= locked * op.project(locked, static_cast<int>(locked.cols()), w);
}

// Krylov-Schur iteration for the `want` largest eigenvalues of the operator
// restricted to the M-orthogonal complement of `locked`.
RitzSet krylov_schur(ShiftInvertOperator& op, const Eigen::MatrixXd& locked, int want, int m,
                     const ArnoldiOptions& opt, std::uint64_t seed, int& restarts) {
  const int n = op.n_rho() + op.n_u() + 1;
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);

  auto fresh_vector = [&](int cols, std::uint64_t s) -> Eigen::VectorXd {
    for (int attempt = 0; attempt < 5; ++attempt) {
      Eigen::VectorXd v = op.apply(start_vector(n, s + 7919ULL * attempt));
      deflate(op, locked, v);
      for (int pass = 0; pass < 2; ++pass) v -= V.leftCols(cols) * op.project(V, cols, v);
      const double nv = op.norm(v);
      if (nv > 1e-300) return v / nv;
    }
    throw Error(ErrorCode::NotConverged, "could not generate a new Krylov direction");
  };

  V.col(0) = fresh_vector(0, seed);
  int start = 0;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    for (int j = start; j < m; ++j) {
      Eigen::VectorXd w = op.apply(V.col(j));
      deflate(op, locked, w);
      Eigen::VectorXd h = op.project(V, j + 1, w);
      w -= V.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = op.project(V, j + 1, w);
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      H.col(j).head(j + 1) = h;
      const double beta = op.norm(w);
      if (beta <= 1e-14 * h.norm()) {
        // Invariant subspace: continue with a new orthogonal direction.
        H(j + 1, j) = 0.0;
        if (j + 1 < m)
          V.col(j + 1) = fresh_vector(j + 1, seed + 104729ULL * (j + 1) + restart);
        else
          V.col(m).setZero();
      } else {
        H(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
      }
    }

    const Eigen::MatrixXd S = 0.5 * (H.topRows(m) + H.topRows(m).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    // Descending order: largest operator eigenvalues are closest to the shift.
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd Y = es.eigenvectors().rowwise().reverse();
    const Eigen::RowVectorXd coupling = H.row(m) * Y;

    const double scale = std::max(std::abs(theta[0]), 1e-300);
    int converged = 0;
    while (converged < want &&
           std::abs(coupling[converged]) <= opt.tolerance * std::max(std::abs(theta[converged]), kInfiniteFilter * scale))
      ++converged;
    if (converged >= want) {
      RitzSet out;
      out.vectors = V.leftCols(m) * Y.leftCols(want);
      out.values.assign(theta.data(), theta.data() + want);
      return out;
    }
    if (restart == opt.max_restarts) break;

    ++restarts;
    const int keep = std::min(m - 1, std::max(want + converged, want + (m - want) / 2));
    const Eigen::MatrixXd kept = V.leftCols(m) * Y.leftCols(keep);
    const Eigen::VectorXd residual = V.col(m);
    V.setZero();
    V.leftCols(keep) = kept;
    V.col(keep) = residual;
    H.setZero();
    for (int i = 0; i < keep; ++i) H(i, i) = theta[i];
    H.row(keep).head(keep) = coupling.head(keep);
    start = keep;
  }
  throw Error(ErrorCode::NotConverged,
              "Krylov-Schur did not converge within " + std::to_string(opt.max_restarts) +
                  " restarts");
}

}  // namespace

EigenSolution solve_eigen(const PencilProblem& problem) {
  const int n = problem.size();
  const int nev = problem.nev;
  if (problem.K.rows() != n || problem.K.cols() != n || problem.Mhat.rows() != n ||
      problem.M.rows() != problem.n_u)
    throw Error(ErrorCode::DimensionMismatch, "pencil blocks have inconsistent sizes");
  if (nev < 1) throw Error(ErrorCode::InvalidArgument, "nev must be positive");
  if (nev > problem.n_u)
    throw Error(ErrorCode::InsufficientModes,
                "requested " + std::to_string(nev) + " modes but the displacement space has dimension " +
                    std::to_string(problem.n_u));

  const auto& opt = problem.arnoldi;
  auto op_ptr = std::make_unique<ShiftInvertOperator>(
      problem, problem.shift == 0.0 && has_blocks(problem) ? -kInitialSigma : problem.shift);
  int warmup_applications = 0;
  if (problem.shift == 0.0 && has_blocks(problem)) {
    // Inverse iteration estimates the lowest eigenvalue; the internal shift
    // is moved to a tenth of it when the first guess is far off.
    const double kappa = lowest_eigenvalue_estimate(*op_ptr, problem.size(), opt.seed);
    if (kappa > 0.0 && (kInitialSigma < 0.01 * kappa || kInitialSigma > 0.5 * kappa)) {
      warmup_applications = op_ptr->applications;
      op_ptr = std::make_unique<ShiftInvertOperator>(problem, -0.1 * kappa);
    }
  }
  ShiftInvertOperator& op = *op_ptr;
  op.applications += warmup_applications;
  int m = opt.subspace > 0 ? opt.subspace : std::max(2 * nev + 10, 20);
  m = std::min(m, problem.n_u);
  if (m <= nev) m = std::min(problem.n_u, nev + 1);
  int restarts = 0;

  // First pass, then deflated passes asking for the single largest
  // remaining eigenvalue until nothing above the current nev-th one is left.
  Eigen::MatrixXd locked(n, 0);
  std::vector<double> locked_values;
  auto lock = [&](const RitzSet& r) {
    const auto old = locked.cols();
    locked.conservativeResize(Eigen::NoChange, old + static_cast<Eigen::Index>(r.values.size()));
    locked.rightCols(r.values.size()) = r.vectors;
    locked_values.insert(locked_values.end(), r.values.begin(), r.values.end());
  };
  // A full-dimension subspace is exactly invariant, so all of it may be kept.
  const int first_want = m == problem.n_u ? std::min(nev, m) : std::min(nev, std::max(m - 1, 1));
  lock(krylov_schur(op, locked, first_want, m, opt, opt.seed, restarts));
  for (int pass = 1; pass <= opt.max_deflation_passes; ++pass) {
    const int remaining = problem.n_u - static_cast<int>(locked.cols());
    if (remaining <= 0) break;
    const int mm = std::min(m, remaining);
    std::vector<double> sorted = locked_values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const bool have_nev = static_cast<int>(sorted.size()) >= nev;
    const RitzSet extra = krylov_schur(op, locked, 1, mm, opt, opt.seed + 1000003ULL * pass, restarts);
    if (have_nev && extra.values[0] <= sorted[nev - 1] * (1.0 + 1e-10)) break;
    lock(extra);
  }

  // Order by operator eigenvalue, drop images of infinite eigenvalues and
  // anything below the shift.
  std::vector<int> order(locked_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return locked_values[a] > locked_values[b]; });
  const double top = locked_values.empty() ? 0.0 : locked_values[order[0]];
  std::vector<int> accepted;
  for (int idx : order)
    if (locked_values[idx] > kInfiniteFilter * top && static_cast<int>(accepted.size()) < nev)
      accepted.push_back(idx);
  if (static_cast<int>(accepted.size()) < nev)
    throw Error(ErrorCode::InsufficientModes,
                "found " + std::to_string(accepted.size()) + " finite modes, wanted " +
                    std::to_string(nev));

  // Purify with one more operator application, then M-orthonormalise.
  Eigen::MatrixXd Z(n, nev);
  std::vector<double> kappa(nev);
  for (int i = 0; i < nev; ++i) {
    const double nu = locked_values[accepted[i]];
    Z.col(i) = op.apply(locked.col(accepted[i])) / nu;
    kappa[i] = op.theta() + 1.0 / nu;
  }
  for (int i = 0; i < nev; ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) Z.col(i) -= op.inner(Z.col(j), Z.col(i)) * Z.col(j);
    Z.col(i) /= op.norm(Z.col(i));
  }

  std::vector<int> asc(nev);
  std::iota(asc.begin(), asc.end(), 0);
  std::stable_sort(asc.begin(), asc.end(), [&](int a, int b) { return kappa[a] < kappa[b]; });

  EigenSolution sol;
  sol.rho.resize(problem.n_rho, nev);
  sol.u.resize(problem.n_u, nev);
  sol.multiplier.resize(nev);
  for (int i = 0; i < nev; ++i) {
    const Eigen::VectorXd z = Z.col(asc[i]);
    const double kap = kappa[asc[i]];
    sol.eigenvalues.push_back(kap);
    sol.frequencies.push_back(std::sqrt(kap));
    sol.rho.col(i) = z.head(problem.n_rho);
    sol.u.col(i) = z.segment(problem.n_rho, problem.n_u);
    sol.multiplier[i] = z[n - 1];
    const Eigen::VectorXd r = problem.K * z - kap * (problem.Mhat * z);
    sol.residuals.push_back(r.norm() / z.norm());
    const bool same = i > 0 && std::abs(kap - sol.eigenvalues[i - 1]) <= kClusterTolerance * std::abs(kap);
    sol.cluster.push_back(i == 0 ? 0 : (same ? sol.cluster.back() : sol.cluster.back() + 1));
  }
  for (double k : sol.eigenvalues)
    if (!(k > 0.0))
      throw Error(ErrorCode::InsufficientModes, "non-positive eigenvalue " + std::to_string(k));
  sol.operator_applications = op.applications;
  sol.restarts = restarts;
  return sol;
}

}  // namespace elastmix
