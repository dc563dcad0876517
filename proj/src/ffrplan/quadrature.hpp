#pragma once

#include <functional>
#include <vector>

namespace ffr {

struct QuadratureRule {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // sum to 2
};

// n-node Gauss-Legendre rule; results are cached per n.
const QuadratureRule& gauss_legendre(int n);

// Integrate f over [a, b] with a single n-node Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod 7/15 quadrature on [a, b]. The interval with
// the largest error estimate is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * |value|). Throws NumericalError when the subdivision
// budget is exhausted without convergence.
AdaptiveResult gk15_adaptive(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, double rel_tol, int max_subdivisions = 200);

}  // namespace ffr
