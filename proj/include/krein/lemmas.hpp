#pragma once

#include <vector>

#include "krein/report.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/stochastic.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// Trace T = sum_k 1 / (mu_k - lambda) of the Dirichlet problem at a, checked
/// against M(a) phi(a)^{-2} <= T <= min(M(a), log phi(a) / (-lambda)).
/// Margins are relative to T; the report fails below -tol.
Report verify_lemma_l2(const StieltjesString& s, double a, double lambda, double tol = 1e-12);

/// Bounds on L = sum_k sigma_k phi~(xi_k - lambda) = int p(t) phi(t) e^{lambda t} dt:
///   L >= int phi(M phi_l^{-2}) phi_l^{-2} dx
///   L <= C_phi int phi(2 min(M, log phi_l / (-lambda))) phi_l^{-2} dx
///     <= C_phi int_{-inf}^a phi(2 M) phi_l^{-2} dx
///        + C_phi (-lambda) / (2 phi_l'(a)) phi~(-lambda / 2)
/// The factor 2 is E Z = 2 T for the Gamma(2) variables that define C_phi;
/// the bound without it is reported as upper_min_unscaled and can fail.
/// with phi_l the solution at lambda and l_- < a < l. `c_phi_value` <= 0
/// means compute C_phi here.
Report verify_lemma_l11(const StieltjesString& s, const SpectralMeasure& sigma, const ScaleFunction& phi,
                        double lambda, double a, double c_phi_value = 0.0, double tol = 1e-12);

/// X = sum_n w_n Y_n with Y_n ~ Gamma(2): phi(E X) <= E phi(X) <= C_phi phi(E X),
/// each within 3 standard errors.
Report verify_lemma_l9(const std::vector<double>& weights, const ScaleFunction& phi, const McParams& mc,
                       double c_phi_value = 0.0);

}  // namespace krein
