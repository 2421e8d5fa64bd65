#include "elastmix/reference_element.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "elastmix/error.hpp"

namespace elastmix {

namespace {

void check_order(int k) {
  if (k < 0 || k > kMaxOrder)
    throw Error(ErrorCode::Unsupported,
                "polynomial order " + std::to_string(k) + " is not supported (0..2)");
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double eval_monomial(const Monomial& m, double x, double y) { return ipow(x, m.a) * ipow(y, m.b); }

constexpr double kMaxVandermondeCondition = 1e8;

}  // namespace

std::vector<Monomial> monomials(int degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  return out;
}

double legendre01(int m, double s) {
  const double x = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = x;
  if (m == 0) return p0;
  for (int n = 2; n <= m; ++n) {
    const double pn = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = pn;
  }
  return p1;
}

// ---------------------------------------------------------------------------

ScalarBasis::ScalarBasis(int k) : k_(k), mono_(monomials(k)) {
  check_order(k);
  const auto rule = quadrature(2 * k);
  const int n = static_cast<int>(mono_.size());
  // Gram matrix of the monomials, then orthonormalise via Cholesky:
  // with G = L L^T the columns of L^{-T} are exactly the Gram-Schmidt output.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = eval_monomial(mono_[i], rule.x(q), rule.y(q));
    G.noalias() += rule.weights[q] * v * v.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  const Eigen::MatrixXd L = llt.matrixL();
  coeffs_ = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd ScalarBasis::eval(double x, double y) const {
  Eigen::VectorXd m(mono_.size());
  for (std::size_t i = 0; i < mono_.size(); ++i) m[i] = eval_monomial(mono_[i], x, y);
  return coeffs_.transpose() * m;
}

Eigen::MatrixXd ScalarBasis::tabulate(const QuadratureRule& rule) const {
  Eigen::MatrixXd t(rule.size(), dimension());
  for (std::size_t q = 0; q < rule.size(); ++q) t.row(q) = eval(rule.x(q), rule.y(q)).transpose();
  return t;
}

ScalarBasis reference_pk_basis(int k) { return ScalarBasis(k); }

// ---------------------------------------------------------------------------

ReferenceElement::ReferenceElement(int k)
    : k_(k),
      dim_(rt_dimension(k)),
      interior_test_(k > 0 ? k - 1 : 0),
      edge_rule_(gauss_legendre(6)),
      cell_rule_(quadrature(kMaxQuadratureDegree)) {
  check_order(k);
  for (const auto& m : monomials(k)) span_.push_back({0, m});
  for (const auto& m : monomials(k)) span_.push_back({1, m});
  for (const auto& m : monomials(k))
    if (m.a + m.b == k) span_.push_back({2, m});

  for (int e = 0; e < 3; ++e)
    for (int m = 0; m <= k; ++m) dofs_.push_back({DofKind::EdgeMoment, e, m, -1});
  if (k > 0)
    for (int c = 0; c < 2; ++c)
      for (int l = 0; l < interior_test_.dimension(); ++l)
        dofs_.push_back({DofKind::InteriorMoment, -1, l, c});

  if (static_cast<int>(span_.size()) != dim_ || static_cast<int>(dofs_.size()) != dim_)
    throw Error(ErrorCode::SingularConstruction, "RT dimension bookkeeping mismatch");

  Eigen::MatrixXd V(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const auto& f = span_[j];
    V.col(j) = apply_dofs([&](double x, double y) { return eval_span(f, x, y); });
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const auto& s = svd.singularValues();
  condition_ = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
  if (!(condition_ < kMaxVandermondeCondition))
    throw Error(ErrorCode::SingularConstruction,
                "RT_" + std::to_string(k) + " Vandermonde matrix is ill-conditioned (cond = " +
                    std::to_string(condition_) + ")");
  coeffs_ = V.fullPivLu().inverse();
}

Eigen::Vector2d ReferenceElement::eval_span(const SpanFunction& f, double x, double y) const {
  const double m = eval_monomial(f.m, x, y);
  switch (f.kind) {
    case 0: return {m, 0.0};
    case 1: return {0.0, m};
    default: return {m * x, m * y};
  }
}

double ReferenceElement::div_span(const SpanFunction& f, double x, double y) const {
  const int a = f.m.a, b = f.m.b;
  switch (f.kind) {
    case 0: return a == 0 ? 0.0 : a * ipow(x, a - 1) * ipow(y, b);
    case 1: return b == 0 ? 0.0 : b * ipow(x, a) * ipow(y, b - 1);
    default: return (a + b + 2) * ipow(x, a) * ipow(y, b);
  }
}

Eigen::VectorXd ReferenceElement::apply_dofs(const VectorField& f) const {
  static const Eigen::Vector2d verts[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  Eigen::VectorXd out(dim_);
  int i = 0;
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d p = verts[(e + 1) % 3];
    const Eigen::Vector2d q = verts[(e + 2) % 3];
    const double len = (q - p).norm();
    const Eigen::Vector2d n((q - p).y() / len, -(q - p).x() / len);
    for (int m = 0; m <= k_; ++m) {
      double acc = 0.0;
      for (std::size_t g = 0; g < edge_rule_.points.size(); ++g) {
        const double s = edge_rule_.points[g];
        const Eigen::Vector2d x = p + s * (q - p);
        acc += edge_rule_.weights[g] * f(x.x(), x.y()).dot(n) * legendre01(m, s);
      }
      out[i++] = acc * len;
    }
  }
  if (k_ > 0) {
    const int nt = interior_test_.dimension();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(2 * nt);
    for (std::size_t g = 0; g < cell_rule_.size(); ++g) {
      const Eigen::Vector2d v = f(cell_rule_.x(g), cell_rule_.y(g));
      const Eigen::VectorXd t = interior_test_.eval(cell_rule_.x(g), cell_rule_.y(g));
      acc.head(nt) += cell_rule_.weights[g] * v.x() * t;
      acc.tail(nt) += cell_rule_.weights[g] * v.y() * t;
    }
    out.tail(2 * nt) = acc;
  }
  return out;
}

Eigen::MatrixX2d ReferenceElement::eval(double x, double y) const {
  Eigen::MatrixX2d span_vals(dim_, 2);
  for (int j = 0; j < dim_; ++j) span_vals.row(j) = eval_span(span_[j], x, y).transpose();
  return coeffs_.transpose() * span_vals;
}

Eigen::VectorXd ReferenceElement::divergence(double x, double y) const {
  Eigen::VectorXd d(dim_);
  for (int j = 0; j < dim_; ++j) d[j] = div_span(span_[j], x, y);
  return coeffs_.transpose() * d;
}

ReferenceElement::Tabulation ReferenceElement::tabulate(const QuadratureRule& rule) const {
  Tabulation t;
  t.values.reserve(rule.size());
  t.divergence.resize(rule.size(), dim_);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    t.values.push_back(eval(rule.x(q), rule.y(q)));
    t.divergence.row(q) = divergence(rule.x(q), rule.y(q)).transpose();
  }
  return t;
}

ReferenceElement reference_rt_basis(int k) { return ReferenceElement(k); }

}  // namespace elastmix
