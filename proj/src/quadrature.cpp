#include "elastmix/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "elastmix/error.hpp"

namespace elastmix {

namespace {

// Orbit generators of the symmetric rules; weights are normalised to
// sum 1 and scaled by the reference area on expansion.
struct Orbit {
  int kind;  // 0: centroid, 1: (a, a, 1-2a), 2: permutations of (a, b, 1-a-b)
  double a, b, w;
};

void expand(const Orbit& o, QuadratureRule& rule) {
  auto add = [&](double l0, double l1, double l2) {
    rule.barycentric.push_back({l0, l1, l2});
    rule.weights.push_back(0.5 * o.w);
  };
  switch (o.kind) {
    case 0:
      add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
      break;
    case 1: {
      const double c = 1.0 - 2.0 * o.a;
      add(c, o.a, o.a);
      add(o.a, c, o.a);
      add(o.a, o.a, c);
      break;
    }
    default: {
      const double c = 1.0 - o.a - o.b;
      add(o.a, o.b, c);
      add(o.b, c, o.a);
      add(c, o.a, o.b);
      add(o.b, o.a, c);
      add(o.a, c, o.b);
      add(c, o.b, o.a);
      break;
    }
  }
}

QuadratureRule make_rule(int degree, std::initializer_list<Orbit> orbits) {
  QuadratureRule rule;
  rule.degree = degree;
  for (const auto& o : orbits) expand(o, rule);
  return rule;
}

}  // namespace

QuadratureRule quadrature(int degree) {
  if (degree > kMaxQuadratureDegree)
    throw Error(ErrorCode::Unsupported,
                "quadrature degree " + std::to_string(degree) + " exceeds maximum " +
                    std::to_string(kMaxQuadratureDegree));
  if (degree <= 1) return make_rule(1, {{0, 0, 0, 1.0}});
  if (degree == 2) return make_rule(2, {{1, 1.0 / 6.0, 0, 1.0 / 3.0}});
  if (degree <= 4)
    return make_rule(4, {{1, 0.44594849091596488632, 0, 0.2233815896780114657},
                         {1, 0.09157621350977074346, 0, 0.10995174365532186764}});
  if (degree == 5)
    return make_rule(5, {{0, 0, 0, 0.225},
                         {1, 0.47014206410511508977, 0, 0.13239415278850618074},
                         {1, 0.1012865073234563388, 0, 0.1259391805448271526}});
  if (degree == 6)
    return make_rule(6, {{1, 0.06308901449150222834, 0, 0.050844906370206816921},
                         {1, 0.24928674517091042129, 0, 0.11678627572637936603},
                         {2, 0.053145049844816947353, 0.31035245103378440542,
                          0.082851075618373575194}});
  return make_rule(8, {{0, 0, 0, 0.14431560767778716825},
                       {1, 0.45929258829272315603, 0, 0.095091634267284624794},
                       {1, 0.17056930775176020662, 0, 0.10321737053471825028},
                       {1, 0.050547228317030975458, 0, 0.032458497623198080311},
                       {2, 0.0083947774099576053372, 0.26311282963463811342,
                        0.027230314174434994265}});
}

LineRule gauss_legendre(int npoints) {
  if (npoints < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre needs >= 1 point");
  LineRule rule;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[npoints - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[npoints - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace elastmix
