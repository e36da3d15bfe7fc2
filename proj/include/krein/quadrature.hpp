#pragma once

#include <functional>
#include <vector>

namespace krein {

/// Adaptive Gauss-Kronrod integral of f over [a, b]; b may be +infinity.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

/// Fixed Gauss-Legendre nodes and weights on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(double a, double b, int order);

}  // namespace krein
