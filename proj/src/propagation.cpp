#include "krein/propagation.hpp"

#include <cmath>

#include "krein/errors.hpp"

namespace krein {

namespace {

void require_in_domain(const StieltjesString& s, double x) {
  if (x > s.right_limit()) throw DomainError("evaluation point lies right of l");
}

}  // namespace

SolutionState phi(const StieltjesString& s, double lambda, double x) {
  require_in_domain(s, x);
  double value = 1.0;
  double slope = 0.0;
  double at = -kInf;
  for (const Atom& a : s.atoms()) {
    if (a.x > x) break;
    if (at != -kInf) value += slope * (a.x - at);
    slope -= lambda * value * a.w;
    at = a.x;
  }
  if (at != -kInf) value += slope * (x - at);
  return {x, value, slope, lambda};
}

std::vector<SolutionState> phi_at_atoms(const StieltjesString& s, double lambda) {
  std::vector<SolutionState> out;
  out.reserve(s.size());
  double value = 1.0;
  double slope = 0.0;
  double at = s.left_support();
  for (const Atom& a : s.atoms()) {
    value += slope * (a.x - at);
    slope -= lambda * value * a.w;
    at = a.x;
    out.push_back({a.x, value, slope, lambda});
  }
  return out;
}

std::vector<double> volterra_terms(const StieltjesString& s, double x, std::size_t n_terms) {
  require_in_domain(s, x);
  const std::size_t k = s.count_at_or_below(x);
  const auto& atoms = s.atoms();
  std::vector<double> out(n_terms, 0.0);
  if (n_terms == 0) return out;
  out[0] = 1.0;
  // prev[j] = phi_{order-1}(x_j) on the atoms left of x.
  std::vector<double> prev(k, 1.0);
  std::vector<double> next(k, 0.0);
  for (std::size_t order = 1; order < n_terms; ++order) {
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      // phi_order(x_j) = sum_{i<j} w_i (x_j - x_i) phi_{order-1}(x_i)
      next[j] = mass * atoms[j].x - moment;
      mass += atoms[j].w * prev[j];
      moment += atoms[j].w * prev[j] * atoms[j].x;
    }
    double at_x = 0.0;
    for (std::size_t j = 0; j < k; ++j) at_x += atoms[j].w * (x - atoms[j].x) * prev[j];
    out[order] = at_x;
    prev.swap(next);
  }
  return out;
}

SeriesValue phi_series(const StieltjesString& s, double lambda, double x, std::size_t n_terms) {
  if (n_terms == 0) throw InvalidInput("phi_series needs at least one term");
  const auto terms = volterra_terms(s, x, n_terms);
  SeriesValue out;
  double power = 1.0;
  for (std::size_t k = 0; k < n_terms; ++k) {
    out.partial_sum += power * terms[k];
    power *= -lambda;
  }
  // Tail of the exponential series of z = |lambda| M(x), summed from n_terms.
  const double z = std::abs(lambda) * mass_integral_M(s, x);
  if (z == 0.0) return out;
  double log_term = static_cast<double>(n_terms) * std::log(z) - std::lgamma(n_terms + 1.0);
  double tail = 0.0;
  for (std::size_t k = n_terms; k < n_terms + 100000; ++k) {
    const double term = std::exp(log_term);
    tail += term;
    if (static_cast<double>(k) > z && term <= 1e-17 * tail) break;
    log_term += std::log(z) - std::log(static_cast<double>(k + 1));
  }
  out.tail_bound = tail;
  return out;
}

double inverse_square_integral(const StieltjesString& s, double lambda, double x, double b) {
  if (b < x) throw DomainError("integration bounds out of order");
  if (b > s.right_limit()) throw DomainError("upper bound lies right of l");
  SolutionState st = phi(s, lambda, x);
  double value = st.value;
  double slope = st.right_derivative;
  double at = x;
  double acc = 0.0;
  // Affine piece v(y) = v0 + d (y - y0): int_{y0}^{y1} v^{-2} = (y1 - y0) / (v0 v1).
  const auto& atoms = s.atoms();
  for (std::size_t i = s.count_at_or_below(x); i < atoms.size() && atoms[i].x < b; ++i) {
    const double end_value = value + slope * (atoms[i].x - at);
    acc += (atoms[i].x - at) / (value * end_value);
    value = end_value;
    slope -= lambda * value * atoms[i].w;
    at = atoms[i].x;
  }
  if (b == kInf) {
    if (!(slope > 0.0)) throw DivergentTail("phi does not grow on the final piece");
    return acc + 1.0 / (slope * value);
  }
  const double end_value = value + slope * (b - at);
  return acc + (b - at) / (value * end_value);
}

double f_principal(const StieltjesString& s, double lambda, double x) {
  if (!(lambda < 0.0)) throw DivergentTail("principal solution requires lambda < 0");
  if (!(x < s.right_limit())) throw DomainError("principal solution is evaluated left of l");
  return phi(s, lambda, x).value * inverse_square_integral(s, lambda, x, s.right_limit());
}

double f_principal_right_derivative(const StieltjesString& s, double lambda, double x) {
  if (!(lambda < 0.0)) throw DivergentTail("principal solution requires lambda < 0");
  if (!(x < s.right_limit())) throw DomainError("principal solution is evaluated left of l");
  const SolutionState st = phi(s, lambda, x);
  const double tail = inverse_square_integral(s, lambda, x, s.right_limit());
  return st.right_derivative * tail - 1.0 / st.value;
}

double green(const StieltjesString& s, double lambda, double x, double y) {
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return f_principal(s, lambda, hi) * phi(s, lambda, lo).value;
}

SolutionState psi(const StieltjesString& s, double lambda, double x) {
  if (s.left_support() < 0.0) throw DomainError("psi needs a string supported on [0, inf)");
  if (x < 0.0) throw DomainError("psi is defined on [0, l]");
  require_in_domain(s, x);
  double value = 0.0;
  double slope = 1.0;
  double at = 0.0;
  for (const Atom& a : s.atoms()) {
    if (a.x > x) break;
    value += slope * (a.x - at);
    slope -= lambda * value * a.w;
    at = a.x;
  }
  value += slope * (x - at);
  return {x, value, slope, lambda};
}

double krein_h(const StieltjesString& s, double lambda) {
  if (s.left_support() < 0.0) throw DomainError("h needs a string supported on [0, inf)");
  return inverse_square_integral(s, lambda, 0.0, s.right_limit());
}

}  // namespace krein
