#include <doctest.h>

#include <cmath>
#include <memory>

#include "elastmix/assembly.hpp"
#include "elastmix/error.hpp"
#include "elastmix/factorization.hpp"
#include "elastmix/spectral.hpp"

using namespace elastmix;

namespace {

std::shared_ptr<const Mesh> square(int N) {
  return std::make_shared<const Mesh>(generate_mesh(DomainSpec::unit_square(), N));
}

// Reference values carry five decimals.
void check_reference(const EigenSolution& s, const std::vector<double>& expect) {
  REQUIRE(s.size() >= expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(s.frequencies[i] - expect[i]) < 1.5e-5);
  }
}

void check_invariants(const PencilProblem& p, const EigenSolution& s) {
  const double kscale = p.K.norm() / p.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    CAPTURE(i);
    CHECK(s.eigenvalues[i] > 0.0);
    CHECK(s.frequencies[i] == doctest::Approx(std::sqrt(s.eigenvalues[i])).epsilon(1e-15));
    if (i > 0) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
    const Eigen::VectorXd z = s.vector(i);
    const Eigen::VectorXd r = p.K * z - s.eigenvalues[i] * (p.Mhat * z);
    CHECK(r.norm() <= 1e-8 * kscale * z.norm());
    CHECK(std::abs(p.c.dot(s.rho.col(i))) <= 1e-8 * s.rho.col(i).norm());
    CHECK(std::abs(s.multiplier[i]) <= 1e-8 * z.norm());
  }
  const Eigen::MatrixXd G = s.u.transpose() * p.M * s.u;
  CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() <= 1e-8);
}

int count_in_window(const EigenSolution& s, double lo, double hi) {
  int n = 0;
  for (double w : s.frequencies) n += (w >= lo && w <= hi);
  return n;
}

}  // namespace

TEST_CASE("pencil structure") {
  const auto sys = assemble_system(square(2), 0, build_lame(1.0, 0.35));
  const auto p = build_pencil(sys, 4);
  CHECK(p.size() == sys.dofs.n_rho() + sys.dofs.n_u() + 1);
  CHECK(p.K.rows() == p.size());
  CHECK(Eigen::MatrixXd(p.K - SparseMatrix(p.K.transpose())).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd Mh(p.Mhat);
  CHECK(Mh.topRows(p.n_rho).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Mh.bottomRows(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Mh.block(p.n_rho, p.n_rho, p.n_u, p.n_u) + Eigen::MatrixXd(sys.M)).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd K(p.K);
  CHECK((K.block(0, p.n_rho + p.n_u, p.n_rho, 1) - sys.c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(K.block(p.n_rho, p.n_rho, p.n_u + 1, p.n_u + 1).cwiseAbs().maxCoeff() == 0.0);

  const SparseFactorization f(p.K);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(p.size(), -1.0, 2.0);
  CHECK((p.K * f.solve(b) - b).norm() < 1e-10 * b.norm());

  auto bad = sys;
  bad.c.conservativeResize(bad.c.size() - 1);
  CHECK_THROWS_AS(build_pencil(bad, 4), Error);
  CHECK_THROWS_AS(build_pencil(sys, 0), Error);
}

TEST_CASE("condensed solver matches the bordered LU") {
  for (double nu : {0.35, 0.5}) {
    const auto sys = assemble_system(square(3), 1, build_lame(1.0, nu));
    const auto p = build_pencil(sys, 4);
    const double sigma = 2.5;
    const CondensedPencilSolver cond(p.A, p.B, p.M, p.c, sigma, p.identity);
    const SparseFactorization lu(SparseMatrix(p.K + sigma * p.Mhat));
    Eigen::VectorXd b(p.size());
    for (int i = 0; i < p.size(); ++i) b[i] = std::sin(1.0 + i);
    const Eigen::VectorXd x1 = cond.solve(b), x2 = lu.solve(b);
    CAPTURE(nu);
    CHECK((x1 - x2).norm() < 1e-10 * x2.norm());
  }
}

TEST_CASE("block diagonal inverse") {
  const auto M = assemble_mass(generate_mesh(DomainSpec::disk(), 2), 2);
  const Eigen::MatrixXd prod = Eigen::MatrixXd(block_diagonal_inverse(M)) * Eigen::MatrixXd(M);
  CHECK((prod - Eigen::MatrixXd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("square lowest frequencies") {
  const auto s = solve_material(square(40), 0, build_lame(1.0, 0.35), 4);
  check_reference(s, {4.19038, 4.19038, 4.37189, 5.92825});
  CHECK(s.cluster[0] == s.cluster[1]);
  CHECK(s.cluster[1] != s.cluster[2]);
}

TEST_CASE("square k=1 nearly incompressible") {
  const auto s = solve_material(square(20), 1, build_lame(1.0, 0.49), 4);
  check_reference(s, {4.18857, 5.51760, 5.51760, 6.54340});
  CHECK(s.cluster == std::vector<int>{0, 1, 1, 2});
}

TEST_CASE("limit problem") {
  const auto s = solve_limit_eigen(square(40), 0, 1.0 / 3.0, 4);
  check_reference(s, {4.17650, 5.53828, 5.53828});
  CHECK(s.cluster[1] == s.cluster[2]);
  const auto v = solve_material(square(40), 0, build_lame(1.0, 0.5), 4);
  CHECK(v.eigenvalues == s.eigenvalues);
}

TEST_CASE("disk limit problem") {
  auto mesh = std::make_shared<const Mesh>(generate_mesh(DomainSpec::disk(), 40));
  const auto s = solve_limit_eigen(mesh, 1, 1.0 / 3.0, 1);
  // different disk meshes: compare to a relative 2e-5
  CHECK(std::abs(s.frequencies[0] - 2.21232) < 2e-5 * 2.21232);
}

TEST_CASE("eigenpair invariants") {
  for (auto spec : {DomainSpec::unit_square(), DomainSpec::l_shape(), DomainSpec::disk()})
    for (int k = 0; k <= 2; ++k)
      for (double nu : {0.3, 0.5}) {
        CAPTURE(k);
        CAPTURE(nu);
        auto mesh = std::make_shared<const Mesh>(generate_mesh(spec, 6));
        const auto p = build_pencil(assemble_system(mesh, k, build_lame(1.0, nu)), 6);
        const auto s = solve_eigen(p);
        REQUIRE(s.size() == 6);
        check_invariants(p, s);
      }
}

TEST_CASE("positive shift uses the indefinite factorization") {
  const auto sys = assemble_system(square(8), 1, build_lame(1.0, 0.35));
  const auto s0 = solve_eigen(build_pencil(sys, 4));
  const auto p = build_pencil(sys, 4, 20.0);
  const auto s1 = solve_eigen(p);
  check_invariants(p, s1);
  for (double kappa : s1.eigenvalues) CHECK(kappa > 20.0);
  // eigenvalues just above 20 agree with an unshifted run that reaches them
  const auto s2 = solve_eigen(build_pencil(sys, 8));
  for (double kappa : s1.eigenvalues) {
    double best = 1e300;
    for (double ref : s2.eigenvalues) best = std::min(best, std::abs(ref - kappa));
    if (kappa < s2.eigenvalues.back()) CHECK(best < 1e-9 * kappa);
  }
  CHECK(s0.eigenvalues[0] == doctest::Approx(s2.eigenvalues[0]).epsilon(1e-12));
}

TEST_CASE("repeated runs are bitwise identical") {
  const auto sys = assemble_system(square(10), 1, build_lame(1.0, 0.49));
  const auto a = solve_eigen(build_pencil(sys, 5));
  const auto b = solve_eigen(build_pencil(sys, 5));
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.rho == b.rho);
  CHECK(a.u == b.u);
}

TEST_CASE("mode count in the window does not depend on N") {
  std::vector<int> counts;
  for (int N : {16, 24, 32, 40}) {
    const auto s = solve_material(square(N), 0, build_lame(1.0, 0.35), 10);
    REQUIRE(s.frequencies.back() > 7.0);
    counts.push_back(count_in_window(s, 4.0, 7.0));
  }
  for (int c : counts) CHECK(c == counts.front());
  CHECK(counts.front() > 0);
}

TEST_CASE("lambda sweep approaches the limit") {
  auto mesh = square(8);
  const double limit = solve_limit_eigen(mesh, 0, 1.0 / 3.0, 1).frequencies[0];
  std::vector<double> gaps;
  for (double nu : {0.49, 0.499, 0.4999}) {
    auto mat = build_lame(1.0, nu);
    mat.mu = 1.0 / 3.0;
    gaps.push_back(std::abs(solve_material(mesh, 0, mat, 1).frequencies[0] - limit));
  }
  CHECK(gaps[0] / gaps[1] == doctest::Approx(10.0).epsilon(0.5));
  CHECK(gaps[1] / gaps[2] == doctest::Approx(10.0).epsilon(0.5));
}
