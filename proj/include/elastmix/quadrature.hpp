#pragma once

#include <array>
#include <vector>

namespace elastmix {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1).
struct QuadratureRule {
  std::vector<std::array<double, 3>> barycentric;  // (1-x-y, x, y)
  std::vector<double> weights;                     // sum to 1/2
  int degree = 0;                                  // exactness degree

  std::size_t size() const { return weights.size(); }
  double x(std::size_t q) const { return barycentric[q][1]; }
  double y(std::size_t q) const { return barycentric[q][2]; }
};

inline constexpr int kMaxQuadratureDegree = 8;

/// Fully symmetric rule with positive weights, exact at least to `degree`
/// (degrees 3 and 7 are served by the next rule up). Throws for degree > 8.
QuadratureRule quadrature(int degree);

/// Gauss-Legendre points and weights on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int npoints);

}  // namespace elastmix
