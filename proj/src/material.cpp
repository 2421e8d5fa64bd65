#include "elastmix/material.hpp"

#include <cmath>
#include <string>

#include "elastmix/error.hpp"

namespace elastmix {

MaterialParams build_lame(double E, double nu) {
  if (!(E > 0.0) || !std::isfinite(E))
    throw Error(ErrorCode::InvalidArgument, "Young's modulus must be positive, got " + std::to_string(E));
  if (!(nu >= 0.0 && nu <= 0.5))
    throw Error(ErrorCode::InvalidArgument,
                "Poisson ratio must lie in [0, 1/2], got " + std::to_string(nu));
  MaterialParams m;
  m.E = E;
  m.nu = nu;
  m.mu = E / (2.0 * (1.0 + nu));
  if (nu == 0.5) {
    m.limit = true;
    m.lambda = std::numeric_limits<double>::infinity();
  } else {
    m.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  }
  return m;
}

double MaterialParams::deviatoric_trace_coefficient() const {
  if (limit) return 0.0;
  const double n = dim;
  return 1.0 / (n * (n * lambda + (n + 1.0) * mu));
}

double MaterialParams::original_trace_coefficient() const {
  if (limit)
    throw Error(ErrorCode::InvalidArgument,
                "the original form of a(.,.) is undefined for lambda = infinity");
  const double n = dim;
  return (lambda + mu) / (mu * (n * lambda + (n + 1.0) * mu));
}

}  // namespace elastmix
