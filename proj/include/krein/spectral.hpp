#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "krein/string_core.hpp"

namespace krein {

/// Dirichlet spectrum of -L on (-inf, a] for an atomic string.
struct EigenSystem {
  double boundary = 0.0;
  std::vector<double> eigenvalues;  // strictly increasing, positive
  std::vector<double> eigennorms;   // sum_i phi_mu(x_i)^2 w_i
};

/// One atom of a spectral measure.
struct SpectralAtom {
  double xi = 0.0;
  double weight = 0.0;
};

/// Closed-form tag for the power-law measures sigma(d xi) = K d xi^alpha.
struct AlphaTag {
  double alpha = 0.0;
};

/// A spectral measure on [0, inf).
///
/// Either a finite list of atoms, or (when `closed_form` is set) the
/// absolutely continuous power-law measure of the alpha family. `offset` is
/// the constant term of the Herglotz function h(lambda) = offset +
/// int d sigma / (xi - lambda); for measures computed from a string it is the
/// position of the leftmost atom, which pins down the translation that the
/// measure alone cannot see. `boundary` records the Dirichlet point used.
struct SpectralMeasure {
  std::vector<SpectralAtom> atoms;
  std::optional<AlphaTag> closed_form;
  double offset = 0.0;
  double boundary = kInf;

  bool is_closed_form() const { return closed_form.has_value(); }
  double total_mass() const;
};

/// Eigenvalues of -L with a Dirichlet condition at a, from the symmetric
/// kernel sqrt(w_i w_j) (a - max(x_i, x_j)) whose eigenvalues are 1 / mu.
/// Throws EmptySpectrum when no atom lies strictly left of a.
EigenSystem dirichlet_eigs(const StieltjesString& s, double a);

/// Eigenvalues only; skips the eigen-norm propagation.
std::vector<double> dirichlet_eigenvalues(const StieltjesString& s, double a);

/// Roots of lambda -> phi_lambda(a) located by bisection in brackets seeded
/// from `seeds` (normally the kernel eigenvalues). Independent of the kernel
/// route up to the seeding. Throws RootBracketFailure when a bracket fails.
std::vector<double> char_roots(const StieltjesString& s, double a,
                               const std::vector<double>& seeds);
std::vector<double> char_roots(const StieltjesString& s, double a);

/// Spectral measure of the string with the Dirichlet condition at l. For
/// l = +inf a finite `boundary` must be supplied (TruncationRequired).
SpectralMeasure spectral_measure(const StieltjesString& s,
                                 std::optional<double> boundary = std::nullopt);

/// Power-law spectral measure of the alpha family.
SpectralMeasure alpha_spectral_measure(double alpha);

/// sigma([0, xi]) for atomic or closed-form measures.
double cumulative_sigma(const SpectralMeasure& sigma, double xi);

/// p(t) = int exp(-t xi) d sigma(xi).
double heat_trace(const SpectralMeasure& sigma, double t);

/// p(t, x, y) = sum_k exp(-t xi_k) phi_{xi_k}(x) phi_{xi_k}(y) sigma_k, with
/// sigma the spectral measure of s at its (finite) boundary. The eigen-
/// functions are rebuilt stably from both ends rather than by shooting.
double transition_density(const StieltjesString& s, const SpectralMeasure& sigma, double t,
                          double x, double y);

struct HerglotzValue {
  double lambda = 0.0;
  double value = 0.0;
};

/// h(lambda) = a + sum_k sigma_k / (xi_k - lambda) for lambda < 0.
HerglotzValue herglotz_h(const SpectralMeasure& sigma, double lambda, double a);

/// Green function from the eigen-expansion
/// sum_k phi_{xi_k}(x) phi_{xi_k}(y) sigma_k / (xi_k - lambda).
/// Agrees with green() on the support of dm. sigma must be the spectral
/// measure of s at its (finite) boundary.
double green_spectral(const StieltjesString& s, const SpectralMeasure& sigma, double lambda,
                      double x, double y);

/// Generalized Fourier transform f_hat(xi) = sum_i f_i phi_xi(x_i) w_i of a
/// function given by its values on the atoms.
double fourier_transform(const StieltjesString& s, const std::vector<double>& f_on_atoms,
                         double xi);
/// The transform at every atom of sigma, the spectral measure of s. Unlike
/// the pointwise version this stays accurate for eigenfunctions that are
/// tiny or huge at the far end of the string.
std::vector<double> fourier_transform(const StieltjesString& s, const std::vector<double>& f_on_atoms,
                                      const SpectralMeasure& sigma);

/// Rebuild the string from a finite spectral measure.
///
/// Runs the Lanczos three-term recurrence for the normalized measure and
/// reads the masses and gaps of the string off the Jacobi coefficients. The
/// first atom is placed at `a` and the right limit carries the Dirichlet
/// condition. Throws IllConditioned when a recovered gap is not positive.
StieltjesString reconstruct_from_spectrum(const SpectralMeasure& sigma, double a);

/// Translation c minimizing the positional mismatch between two strings with
/// the same atom count, and the worst aligned position/mass deviation.
struct Alignment {
  double shift = 0.0;
  double max_position_deviation = 0.0;
  double max_mass_deviation = 0.0;
  double right_limit_deviation = 0.0;
};
Alignment align_strings(const StieltjesString& reference, const StieltjesString& candidate);

/// Max over matched atoms of |xi| and |weight| relative deviations.
double spectral_deviation(const SpectralMeasure& a, const SpectralMeasure& b);

}  // namespace krein

namespace krein {

/// alpha^{2 alpha} / Gamma(1 + alpha)^2: sigma_alpha([0, xi]) = K xi^alpha.
double alpha_sigma_constant(double alpha);
/// alpha^{2 alpha} / Gamma(1 + alpha): p_alpha(t) = K t^{-alpha}.
double alpha_heat_constant(double alpha);

}  // namespace krein
