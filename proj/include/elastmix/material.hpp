#pragma once

#include <limits>

namespace elastmix {

/// Lame parameters of an isotropic plane material. `limit` marks the
/// incompressible case nu = 1/2 where lambda is infinite.
struct MaterialParams {
  double E = 1.0;
  double nu = 0.0;
  double lambda = 0.0;
  double mu = 0.5;
  bool limit = false;
  int dim = 2;

  /// Coefficient of int tr(xi) tr(tau) in the deviatoric form of a(.,.):
  /// 1 / (n (n lambda + (n+1) mu)), and exactly 0 in the limit.
  double deviatoric_trace_coefficient() const;
  /// Coefficient subtracted in the original form:
  /// (lambda + mu) / (mu (n lambda + (n+1) mu)). Throws in the limit.
  double original_trace_coefficient() const;
};

/// lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu)); nu = 1/2 sets the
/// limit flag. Requires E > 0 and 0 <= nu <= 1/2.
MaterialParams build_lame(double E, double nu);

}  // namespace elastmix
