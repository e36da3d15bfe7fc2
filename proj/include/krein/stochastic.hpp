#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "krein/random.hpp"
#include "krein/report.hpp"
#include "krein/scale.hpp"
#include "krein/string_core.hpp"

namespace krein {

/// X = sum_n Y_n / (mu_n - shift) with Y_n ~ Gamma(2, 1) independent.
/// shift = 0 gives X of the Dirichlet problem, shift = lambda < 0 gives Z.
struct RandomFunctional {
  std::vector<double> eigenvalues;
  double shift = 0.0;

  std::vector<double> weights() const;
  /// E X = 2 sum_n 1 / (mu_n - shift).
  double mean() const;
  /// E exp(lambda X) = prod_n (1 - lambda / (mu_n - shift))^{-2}.
  double mgf(double lambda) const;
};

struct McParams {
  std::size_t samples = 200000;
  std::uint64_t seed = 20240917;
  unsigned chunks = 16;
};

/// E g(sum_n w_n Y_n) by chunked Monte Carlo. Chunk c draws from stream
/// (stream, c); chunks run concurrently and merge in index order.
RunningStats mc_expectation(const std::vector<double>& weights, const std::function<double(double)>& g,
                            const McParams& mc, std::uint64_t stream);

struct SampleSummary {
  RunningStats exp_lambda;      // e^{lambda X}
  RunningStats phi_exp_lambda;  // phi(X) e^{lambda X}; empty without phi
  RunningStats value;           // X
};
SampleSummary sample(const RandomFunctional& fn, double lambda, const ScaleFunction* phi,
                     const McParams& mc);

/// phi_lambda(a)^{-2} = E exp(lambda X); passes within 4 standard errors.
Report verify_eq10(const StieltjesString& s, double a, double lambda, const McParams& mc);

/// E(phi(X) e^{lambda X}) = phi_lambda(a)^{-2} E phi(Z), both sides sampled
/// on independent streams; passes within 4 combined standard errors.
Report verify_eq32(const StieltjesString& s, double a, double lambda, const ScaleFunction& phi,
                   const McParams& mc);

/// int E f(X(x)) dx over (-inf, l) against int p(t) f(t) dt. `f` must vanish
/// on [0, eps). The x-integral uses Gauss-Legendre nodes on each piece
/// between atoms; passes when the relative difference is within `rel_tol`.
struct Eq26Params {
  std::function<double(double)> f;
  double eps = 0.0;
  int nodes_per_piece = 16;
  double rel_tol = 0.05;
};
Report verify_eq26(const StieltjesString& s, const Eq26Params& p, const McParams& mc);

}  // namespace krein
