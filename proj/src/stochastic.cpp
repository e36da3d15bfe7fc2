#include "krein/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "krein/errors.hpp"
#include "krein/propagation.hpp"
#include "krein/quadrature.hpp"
#include "krein/spectral.hpp"

namespace krein {

std::vector<double> RandomFunctional::weights() const {
  std::vector<double> w;
  w.reserve(eigenvalues.size());
  for (double m : eigenvalues) w.push_back(1.0 / (m - shift));
  return w;
}

double RandomFunctional::mean() const {
  double acc = 0.0;
  for (double w : weights()) acc += 2.0 * w;
  return acc;
}

double RandomFunctional::mgf(double lambda) const {
  double log_acc = 0.0;
  for (double w : weights()) {
    const double f = 1.0 - lambda * w;
    if (!(f > 0.0)) return kInf;
    log_acc -= 2.0 * std::log(f);
  }
  return std::exp(log_acc);
}

namespace {

template <class Body>
std::vector<RunningStats> run_chunks(std::size_t samples, unsigned chunks, Body body) {
  chunks = std::max(1u, chunks);
  std::vector<std::future<RunningStats>> jobs;
  for (unsigned c = 0; c < chunks; ++c) {
    const std::size_t n = samples / chunks + (c < samples % chunks ? 1 : 0);
    jobs.push_back(std::async(std::launch::async, [=] { return body(c, n); }));
  }
  std::vector<RunningStats> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

RunningStats mc_expectation(const std::vector<double>& weights, const std::function<double(double)>& g,
                            const McParams& mc, std::uint64_t stream) {
  auto parts = run_chunks(mc.samples, mc.chunks, [&](unsigned c, std::size_t n) {
    CounterRng rng(mc.seed, (stream << 20) + c);
    RunningStats st;
    for (std::size_t i = 0; i < n; ++i) {
      double x = 0.0;
      for (double w : weights) x += w * rng.gamma2();
      st.push(g(x));
    }
    return st;
  });
  RunningStats total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

SampleSummary sample(const RandomFunctional& fn, double lambda, const ScaleFunction* phi,
                     const McParams& mc) {
  const auto w = fn.weights();
  const unsigned chunks = std::max(1u, mc.chunks);
  std::vector<std::future<SampleSummary>> jobs;
  for (unsigned c = 0; c < chunks; ++c) {
    const std::size_t n = mc.samples / chunks + (c < mc.samples % chunks ? 1 : 0);
    jobs.push_back(std::async(std::launch::async, [&, c, n] {
      CounterRng rng(mc.seed, (std::uint64_t{7} << 20) + c);
      SampleSummary s;
      for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0;
        for (double wi : w) x += wi * rng.gamma2();
        const double e = std::exp(lambda * x);
        s.exp_lambda.push(e);
        s.value.push(x);
        if (phi) s.phi_exp_lambda.push((*phi)(x) * e);
      }
      return s;
    }));
  }
  SampleSummary total;
  for (auto& j : jobs) {
    const auto s = j.get();
    total.exp_lambda.merge(s.exp_lambda);
    total.phi_exp_lambda.merge(s.phi_exp_lambda);
    total.value.merge(s.value);
  }
  return total;
}

Report verify_eq10(const StieltjesString& s, double a, double lambda, const McParams& mc) {
  if (lambda > 0.0) throw DomainError("eq10 check needs lambda <= 0");
  Report r("eq10");
  const double pa = phi(s, lambda, a).value;
  const double exact = 1.0 / (pa * pa);
  r.add("exact", exact);
  if (lambda == 0.0) {
    r.add("mc_mean", 1.0);
    r.add("standard_error", 0.0);
    r.add("z_score", 0.0);
    return r;
  }
  RandomFunctional fn{dirichlet_eigenvalues(s, a), 0.0};
  const auto st = mc_expectation(fn.weights(), [&](double x) { return std::exp(lambda * x); }, mc, 10);
  const double se = st.standard_error();
  r.add("product_formula", fn.mgf(lambda));
  r.add("mc_mean", st.mean);
  r.add("standard_error", se);
  r.add("z_score", se > 0.0 ? std::abs(st.mean - exact) / se : 0.0);
  r.require(std::abs(st.mean - exact) <= 4.0 * se, "|MC - phi(a)^-2| <= 4 SE");
  return r;
}

Report verify_eq32(const StieltjesString& s, double a, double lambda, const ScaleFunction& phi_s,
                   const McParams& mc) {
  if (!(lambda < 0.0)) throw DomainError("eq32 check needs lambda < 0");
  Report r("eq32");
  const auto mu = dirichlet_eigenvalues(s, a);
  RandomFunctional X{mu, 0.0}, Z{mu, lambda};
  const double pa = phi(s, lambda, a).value;
  const double pa2 = 1.0 / (pa * pa);

  const auto lhs = mc_expectation(X.weights(), [&](double x) { return phi_s(x) * std::exp(lambda * x); }, mc, 32);
  const auto rhs = mc_expectation(Z.weights(), [&](double z) { return phi_s(z); }, mc, 33);
  const double se = std::hypot(lhs.standard_error(), pa2 * rhs.standard_error());
  const double diff = lhs.mean - pa2 * rhs.mean;
  r.add("lhs", lhs.mean);
  r.add("rhs", pa2 * rhs.mean);
  r.add("standard_error", se);
  r.add("z_score", se > 0.0 ? std::abs(diff) / se : 0.0);
  r.add("E_Z", Z.mean());
  r.add("mc_E_Z", mc_expectation(Z.weights(), [](double z) { return z; }, mc, 34).mean);
  if (phi_s.family() == ScaleFunction::Family::Power && phi_s.alpha() == 1.0) {
    // d/dlambda of the MGF: E(X e^{lambda X}) = phi(a)^-2 * 2 sum 1/(mu - lambda)
    r.add("closed_form", pa2 * Z.mean());
  }
  r.require(std::abs(diff) <= 4.0 * se, "|LHS - RHS| <= 4 combined SE");
  return r;
}

Report verify_eq26(const StieltjesString& s, const Eq26Params& p, const McParams& mc) {
  if (!p.f) throw InvalidInput("eq26 check needs a test function");
  if (!std::isfinite(s.right_limit())) throw TruncationRequired("eq26 check needs a finite right end");
  Report r("eq26");

  // Left side: X(x) uses the Dirichlet eigenvalues at x; it vanishes for x <= l_-.
  std::vector<double> breaks;
  for (const auto& at : s.atoms()) breaks.push_back(at.x);
  breaks.push_back(s.right_limit());
  std::size_t n_nodes = (breaks.size() - 1) * static_cast<std::size_t>(p.nodes_per_piece);
  McParams node_mc = mc;
  node_mc.samples = std::max<std::size_t>(2000, mc.samples / std::max<std::size_t>(n_nodes, 1));
  double lhs = 0.0, lhs_var = 0.0;
  std::uint64_t stream = 260000;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const auto rule = gauss_legendre(breaks[k], breaks[k + 1], p.nodes_per_piece);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      RandomFunctional fn{dirichlet_eigenvalues(s, rule.nodes[j]), 0.0};
      const auto st = mc_expectation(fn.weights(), p.f, node_mc, ++stream);
      lhs += rule.weights[j] * st.mean;
      lhs_var += rule.weights[j] * rule.weights[j] * st.variance() / static_cast<double>(st.n);
    }
  }

  // Right side: sum_k sigma_k int e^{-t xi_k} f(t) dt.
  const auto sigma = spectral_measure(s);
  double rhs = 0.0;
  for (const auto& at : sigma.atoms) {
    auto g = [&](double t) { return std::exp(-t * at.xi) * p.f(t); };
    rhs += at.weight * integrate(g, p.eps, kInf, 1e-9);
  }

  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  const double rel = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
  r.add("lhs", lhs);
  r.add("lhs_standard_error", std::sqrt(lhs_var));
  r.add("rhs", rhs);
  r.add("relative_difference", rel);
  r.require(rel <= p.rel_tol, "relative difference within budget");
  return r;
}

}  // namespace krein
