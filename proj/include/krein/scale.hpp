#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "krein/spectral.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// Convex increasing scale function on [0, 1] with phi(0) = 0, extended
/// linearly past 1 with the left derivative at 1 as slope.
class ScaleFunction {
 public:
  enum class Family { Power, PowerLog, Tabulated };

  /// x^alpha, alpha >= 1.
  static ScaleFunction power(double alpha);
  /// x^alpha (c - log x); needs alpha > 1 and c >= (2 alpha - 1) / (alpha (alpha - 1)).
  static ScaleFunction power_log(double alpha, double c);
  /// Piecewise-linear interpolant through (x, y) samples starting at (0, 0)
  /// and ending at x = 1. Slopes must be positive and nondecreasing.
  static ScaleFunction tabulated(std::vector<std::pair<double, double>> samples);

  /// "power:2", "powerlog:2,10" or "table:FILE" (two-column CSV).
  static ScaleFunction parse(const std::string& spec);

  double operator()(double x) const;
  /// log phi(e^s); stays finite where e^s underflows.
  double log_at_exp(double s) const;
  /// int_0^u phi.
  double antiderivative(double u) const;

  double value_at_one() const { return phi1_; }
  double slope_at_one() const { return slope1_; }
  /// Power of x governing phi near 0 (log factors ignored).
  double exponent_at_zero() const;

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  std::string describe() const;

 private:
  ScaleFunction() = default;
  double base(double x) const;

  Family family_ = Family::Power;
  double alpha_ = 1.0;
  double c_ = 0.0;
  std::vector<double> xs_, ys_, cum_;
  double phi1_ = 1.0;
  double slope1_ = 1.0;
};

struct SupOptions {
  double y_max = 1e4;
  double rel_tol = 1e-6;
  int grid_points = 1201;
};

/// C+(x) = sup_{y > 0} phi(x y) / phi(y). Throws NonFiniteSup when the
/// ratio keeps growing as y -> 0.
double c_plus(const ScaleFunction& phi, double x, const SupOptions& opt = {});
/// C-(x) = inf_{0 < y <= 1} phi(x y) / phi(y).
double c_minus(const ScaleFunction& phi, double x, const SupOptions& opt = {});
/// alpha+ = sup_{1 < x <= x_max} log C+(e^x) / x.
double alpha_plus(const ScaleFunction& phi, double x_max = 60.0, const SupOptions& opt = {});
/// C_phi = int_0^inf t e^{-t} C+(t / 2) dt.
double c_phi(const ScaleFunction& phi, const SupOptions& opt = {});

struct ScaleConstants {
  std::function<double(double)> C_plus;
  std::function<double(double)> C_minus;
  double alpha_plus = 0.0;
  double C_phi = 0.0;
};
ScaleConstants scale_constants(const ScaleFunction& phi, const SupOptions& opt = {});

/// phi~(xi) = int_0^inf e^{-t xi} phi(t) dt, xi > 0.
double phi_tilde(const ScaleFunction& phi, double xi);

struct Membership {
  bool finite = true;
  double value = 0.0;
};

/// int_{-inf}^a phi(M(x)) dx, exact on each linear piece of M.
Membership membership_E_phi(const StieltjesString& s, const ScaleFunction& phi, double a);
/// Same functional for the continuous alpha-family string (alpha > 1, l = 0).
Membership membership_E_phi_alpha(double alpha, const ScaleFunction& phi, double a = -1.0);
/// int_1^inf phi~ d sigma, for atomic or closed-form measures.
Membership membership_S_phi(const SpectralMeasure& sigma, const ScaleFunction& phi);

}  // namespace krein
