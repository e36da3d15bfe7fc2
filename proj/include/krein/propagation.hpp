#pragma once

#include <cstddef>
#include <vector>

#include "krein/string_core.hpp"

namespace krein {

/// Value and right derivative of phi_lambda at x.
struct SolutionState {
  double x = 0.0;
  double value = 1.0;
  double right_derivative = 0.0;
  double lambda = 0.0;
};

/// phi_lambda: the solution of phi(x) = 1 - lambda * int_{-inf}^x (x - y) phi(y) dm(y).
///
/// Exact for atomic strings: phi is affine between atoms and its derivative
/// jumps by -lambda * phi(x_i) * w_i at an atom. Throws DomainError for x > l.
SolutionState phi(const StieltjesString& s, double lambda, double x);

/// phi_lambda at every atom together with the right derivative there.
std::vector<SolutionState> phi_at_atoms(const StieltjesString& s, double lambda);

struct SeriesValue {
  double partial_sum = 0.0;
  double tail_bound = 0.0;
};

/// Partial sum of the Volterra series sum_k (-lambda)^k phi_k(x) with
/// phi_0 = 1 and phi_k(x) = int (x - y) phi_{k-1}(y) dm(y), plus the bound
/// sum_{k >= n_terms} |lambda|^k M(x)^k / k! on the neglected terms.
SeriesValue phi_series(const StieltjesString& s, double lambda, double x, std::size_t n_terms);

/// The individual Volterra terms phi_0(x), ..., phi_{n-1}(x).
std::vector<double> volterra_terms(const StieltjesString& s, double x, std::size_t n_terms);

/// int_x^b phi_lambda(y)^{-2} dy, summed in closed form over the affine
/// pieces. `b` may equal l, and may be +infinity when phi grows there.
double inverse_square_integral(const StieltjesString& s, double lambda, double x, double b);

/// Principal solution f_lambda(x) = phi_lambda(x) int_x^l phi_lambda(y)^{-2} dy.
/// Requires lambda < 0 (DivergentTail otherwise) and x < l.
double f_principal(const StieltjesString& s, double lambda, double x);

/// Right derivative of f_lambda at x.
double f_principal_right_derivative(const StieltjesString& s, double lambda, double x);

/// Green function of -L: g(x, y) = f(max(x, y)) phi(min(x, y)).
double green(const StieltjesString& s, double lambda, double x, double y);

/// Solution with psi(0) = 0, psi'(0) = 1 for strings supported on [0, inf).
/// Throws DomainError when an atom lies left of 0 or x < 0.
SolutionState psi(const StieltjesString& s, double lambda, double x);

/// h(lambda) = int_0^l phi_lambda(x)^{-2} dx for strings supported on [0, inf).
double krein_h(const StieltjesString& s, double lambda);

}  // namespace krein
