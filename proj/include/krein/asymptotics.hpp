#pragma once

#include <functional>
#include <string>
#include <vector>

#include "krein/alpha_family.hpp"
#include "krein/report.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// Atomic approximation of m_alpha on a geometric grid between x_min and
/// x_max (both negative for alpha > 1, both positive for alpha < 1). Each
/// cell's mass m(right) - m(left) sits at the cell's centre of mass, and the
/// cell touching the far end (the tail left of x_min, or (0, x_min] when
/// alpha < 1) becomes one atom, so M is exact at every cell edge.
StieltjesString discretize_alpha_string(const AlphaFamily& fam, double x_min, double x_max,
                                        std::size_t n_atoms);

/// sigma_alpha([0, xi]) and p_alpha(t).
double closed_form_sigma(const AlphaFamily& fam, double xi);
double closed_form_p(const AlphaFamily& fam, double t);

/// sigma_nu(xi) = nu^{-1} b^{-1} sigma(b xi) with b = phi^{-1}(nu): the
/// measure of nu_scaling(s, nu, b) expressed through the measure of s.
SpectralMeasure nu_transform(const SpectralMeasure& sigma, double nu, double b);

/// phi(u) = c u^rho (-log u)^q near 0, a regularly varying function with
/// exponent rho. At infinity t^{-1} phi(1/t) = t^{-rho-1} l(t) with slowly
/// varying l(t) = c (log t)^q = c exp(int_e^t eps(u) / u du), eps(u) = q / log u.
struct RegVarying {
  double rho = 1.0;
  double c = 1.0;
  double q = 0.0;

  double operator()(double u) const;
  /// Solve phi(u) = v for small u.
  double inverse(double v) const;
  double slowly_varying(double t) const;
  double epsilon(double t) const;
  /// Smallest N with |eps(t)| < delta for t >= N.
  double threshold(double delta) const;
};

/// Weight function for the uniform bound; need not be a scale function.
struct WeightFunction {
  std::string name;
  std::function<double(double)> f;

  static WeightFunction from_scale(const ScaleFunction& phi);
  /// exp(-c (-log t)^p).
  static WeightFunction subexponential(double c, double p);
};

/// Growth exponent k with w(s t) <= C t^k w(s): the infimum over a ladder of
/// small t of log(w(s t) / w(s)) / log t taken over s in (0, 1].
double estimate_weight_exponent(const WeightFunction& w);

struct T7Params {
  double alpha = 2.0;
  double k = 3.0;
  double x_min = -50.0;
  double x_max = -1e-3;
  std::size_t n_atoms = 2000;
  double t_lo = 5.0;
  double t_hi = 50.0;
  int n_t = 10;
  double tol = 0.1;
  int levels = 3;  // n_atoms / 2^(levels-1), ..., n_atoms
  bool check_truncation = true;
};
/// p(t) / p_alpha(t) on the window for a dyadic refinement ladder.
Report verify_t7(const T7Params& p);

/// sigma([0, xi]) / (K xi phi(xi)) along a ladder of xi -> 0, with K the
/// alpha constant (for phi = u^{alpha-1} this is sigma / (K xi^alpha)).
Report verify_p1(const StieltjesString& s, double alpha, const RegVarying& rv,
                 const std::vector<double>& xi_ladder, double tol = 0.05);

/// (M^{-1}(lambda x) - M^{-1}(lambda)) / phi(1/lambda) against
/// (alpha-1)^{-1} alpha^alpha (1 - x^{-(alpha-1)}) along lambda -> inf, the
/// derivative in x against alpha^alpha x^{-alpha}, and m(u)(-u) phi^{-1}(-u)
/// / beta^beta -> 1 at u = M^{-1}(lambda).
Report verify_l12(const StieltjesString& s, const RegVarying& rv, const std::vector<double>& x_grid,
                  const std::vector<double>& lambda_ladder, double tol = 0.02);

/// sup over the nu ladder of int_0^1 p_nu(t) w(t) dt, where p_nu is the
/// scaled heat trace of the atomic measure `sigma`. Throws PreconditionFailed
/// when the weight's growth exponent is not above alpha - 1.
Report verify_l13_uniform(const SpectralMeasure& sigma, double alpha, const WeightFunction& w,
                          const RegVarying& rv, const std::vector<double>& nu_ladder,
                          double max_ratio = 10.0);

}  // namespace krein
