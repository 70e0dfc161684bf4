#pragma once

#include <Eigen/Core>

namespace wavestab {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order by
// Newton iteration on the Legendre recurrence and cached (thread-safe).
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

const GaussLegendre& gauss_legendre(int n);

template <class F>
double gl_integrate(F&& f, double lo, double hi, int n) {
  const GaussLegendre& rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

}  // namespace wavestab
