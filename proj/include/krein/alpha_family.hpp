#pragma once

#include <cmath>

#include "krein/errors.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// The power-law strings m_alpha with beta = alpha / (alpha - 1):
///   0 < alpha < 1:  m(x) = C x^{-beta} on x > 0, l = +inf
///   alpha > 1:      m(x) = C (-x)^{-beta} on x < 0, l = 0
/// alpha = 1 (the exponential string) is not covered.
struct AlphaFamily {
  double alpha;

  explicit AlphaFamily(double a) : alpha(a) {
    if (!(a > 0.0) || a == 1.0 || !std::isfinite(a))
      throw InvalidInput("alpha family needs alpha > 0, alpha != 1");
  }

  bool left_sided() const { return alpha > 1.0; }
  double beta() const { return alpha / (alpha - 1.0); }
  double C() const {
    if (alpha > 1.0) return std::pow((alpha - 1.0) / alpha, -alpha / (alpha - 1.0));
    return std::pow((1.0 - alpha) / alpha, alpha / (1.0 - alpha));
  }
  double right_limit() const { return alpha > 1.0 ? 0.0 : kInf; }

  double m(double x) const {
    if (alpha > 1.0) return x < 0.0 ? C() * std::pow(-x, -beta()) : kInf;
    return x > 0.0 ? C() * std::pow(x, -beta()) : 0.0;
  }
  double M(double x) const {
    const double b = beta();
    if (alpha > 1.0) return x < 0.0 ? C() * std::pow(-x, 1.0 - b) / (b - 1.0) : kInf;
    return x > 0.0 ? C() * std::pow(x, 1.0 - b) / (1.0 - b) : 0.0;
  }
  /// The regularly varying function attached to the family, u^{alpha - 1},
  /// and its inverse.
  double rv(double u) const { return std::pow(u, alpha - 1.0); }
  double rv_inverse(double v) const { return std::pow(v, 1.0 / (alpha - 1.0)); }
};

}  // namespace krein
