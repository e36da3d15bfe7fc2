#include "krein/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "krein/errors.hpp"

namespace krein {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 20, rel_tol, &error);
  if (!std::isfinite(value)) throw DomainError("integral is not finite");
  return value;
}

QuadratureRule gauss_legendre(double a, double b, int order) {
  QuadratureRule rule;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto push = [&](double z, double w) {
    rule.nodes.push_back(mid + half * z);
    rule.weights.push_back(half * w);
  };
  auto fill = [&](const auto& abscissa, const auto& weights, bool odd) {
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (i == 0 && odd) {
        push(0.0, weights[0]);
        continue;
      }
      push(abscissa[i], weights[i]);
      push(-abscissa[i], weights[i]);
    }
  };
  using boost::math::quadrature::gauss;
  switch (order) {
    case 8: fill(gauss<double, 8>::abscissa(), gauss<double, 8>::weights(), false); break;
    case 16: fill(gauss<double, 16>::abscissa(), gauss<double, 16>::weights(), false); break;
    case 20: fill(gauss<double, 20>::abscissa(), gauss<double, 20>::weights(), false); break;
    default: throw InvalidInput("supported Gauss-Legendre orders: 8, 16, 20");
  }
  return rule;
}

}  // namespace krein
