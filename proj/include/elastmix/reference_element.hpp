#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "elastmix/quadrature.hpp"

namespace elastmix {

inline constexpr int kMaxOrder = 2;

/// Bivariate monomial x^a y^b.
struct Monomial {
  int a = 0;
  int b = 0;
};

/// Monomials of total degree <= degree, ordered by degree then by
/// descending power of x: 1, x, y, x^2, xy, y^2, ...
std::vector<Monomial> monomials(int degree);

inline constexpr int pk_dimension(int k) { return (k + 1) * (k + 2) / 2; }
inline constexpr int rt_dimension(int k) { return (k + 1) * (k + 3); }

/// Shifted Legendre polynomial of degree m on [0, 1].
double legendre01(int m, double s);

/// L2-orthonormal basis of P_k on the reference triangle, obtained by
/// Gram-Schmidt on `monomials(k)` (so the leading coefficient is positive).
class ScalarBasis {
 public:
  explicit ScalarBasis(int k);

  int order() const { return k_; }
  int dimension() const { return static_cast<int>(coeffs_.cols()); }
  /// Values of every basis function at (x, y).
  Eigen::VectorXd eval(double x, double y) const;
  /// Row q holds the basis values at quadrature point q.
  Eigen::MatrixXd tabulate(const QuadratureRule& rule) const;
  /// Monomial coefficients; column j is basis function j.
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

 private:
  int k_;
  std::vector<Monomial> mono_;
  Eigen::MatrixXd coeffs_;
};

ScalarBasis reference_pk_basis(int k);

/// A vector field on the reference triangle.
using VectorField = std::function<Eigen::Vector2d(double x, double y)>;

enum class DofKind { EdgeMoment, InteriorMoment };

struct DofDescriptor {
  DofKind kind;
  int edge = -1;       // local edge (opposite local vertex) for edge moments
  int moment = 0;      // Legendre degree, or interior test-function index
  int component = -1;  // interior moments: 0 for (p, 0), 1 for (0, p)
};

/// Raviart-Thomas element RT_k on the reference triangle.
///
/// Degrees of freedom, in order:
///  - for each local edge i = 0, 1, 2 and m = 0..k: the flux moment
///    int_e (phi . n) L_m(s) ds, with n the outward unit normal and s running
///    from local vertex (i+1)%3 to (i+2)%3;
///  - for c = 0, 1 and each orthonormal q_l in P_{k-1}: int_T phi . (q_l e_c).
/// The basis is the dual of these functionals.
class ReferenceElement {
 public:
  explicit ReferenceElement(int k);

  int order() const { return k_; }
  int dimension() const { return dim_; }
  int edge_dofs_per_edge() const { return k_ + 1; }
  int interior_dofs() const { return k_ * (k_ + 1); }
  const std::vector<DofDescriptor>& dofs() const { return dofs_; }

  /// dim x 2 matrix of basis values at (x, y).
  Eigen::MatrixX2d eval(double x, double y) const;
  Eigen::VectorXd divergence(double x, double y) const;

  /// Applies every DOF functional to a reference-space field.
  Eigen::VectorXd apply_dofs(const VectorField& f) const;

  /// Condition number of the DOF/spanning-set matrix used to build the basis.
  double vandermonde_condition() const { return condition_; }

  struct Tabulation {
    std::vector<Eigen::MatrixX2d> values;  // per quadrature point, dim x 2
    Eigen::MatrixXd divergence;            // nq x dim
  };
  Tabulation tabulate(const QuadratureRule& rule) const;

 private:
  // Spanning set of RT_k: (m, 0), (0, m) for monomials m of degree <= k,
  // then m (x, y) for monomials of degree exactly k.
  struct SpanFunction {
    int kind;  // 0: (m,0), 1: (0,m), 2: m*(x,y)
    Monomial m;
  };
  Eigen::Vector2d eval_span(const SpanFunction& f, double x, double y) const;
  double div_span(const SpanFunction& f, double x, double y) const;

  int k_;
  int dim_;
  std::vector<SpanFunction> span_;
  std::vector<DofDescriptor> dofs_;
  Eigen::MatrixXd coeffs_;  // column j: basis j in the spanning set
  double condition_ = 0.0;
  ScalarBasis interior_test_;
  LineRule edge_rule_;
  QuadratureRule cell_rule_;
};

ReferenceElement reference_rt_basis(int k);

}  // namespace elastmix
