#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "krein/random.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/stochastic.hpp"

using namespace krein;

TEST_SUITE("stochastic") {
  TEST_CASE("counter generator is reproducible and stream-separated") {
    CounterRng a(42, 1), b(42, 1), c(42, 2);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
      const double u = a.uniform();
      CHECK(u == b.uniform());
      CHECK(u > 0.0);
      CHECK(u < 1.0);
      if (u != c.uniform()) differs = true;
    }
    CHECK(differs);
  }

  TEST_CASE("Gamma(2) draws have mean 2 and variance 2") {
    CounterRng rng(1, 71);
    RunningStats st;
    for (int i = 0; i < 200000; ++i) st.push(rng.gamma2());
    CHECK(std::abs(st.mean - 2.0) <= 4.0 * st.standard_error());
    CHECK(st.variance() == doctest::Approx(2.0).epsilon(0.03));
  }

  TEST_CASE("running statistics merge like a single pass") {
    CounterRng rng(2, 72);
    RunningStats all, left, right;
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.exponential();
      all.push(x);
      (i < 400 ? left : right).push(x);
    }
    left.merge(right);
    CHECK(left.n == all.n);
    CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-13));
    CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  }

  TEST_CASE("mean of X is linear") {
    RandomFunctional fn{{0.5, 2.0, 7.0}, -1.0};
    CHECK(fn.mean() == doctest::Approx(2.0 * (1.0 / 1.5 + 1.0 / 3.0 + 1.0 / 8.0)).epsilon(1e-15));
    McParams mc;
    mc.samples = 100000;
    const auto st = mc_expectation(fn.weights(), [](double x) { return x; }, mc, 1);
    CHECK(std::abs(st.mean - fn.mean()) <= 4.0 * st.standard_error());
  }

  TEST_CASE("Monte Carlo is deterministic for a fixed seed") {
    McParams mc;
    mc.samples = 20000;
    const std::vector<double> w{1.0, 0.3};
    const auto a = mc_expectation(w, [](double x) { return std::exp(-x); }, mc, 5);
    const auto b = mc_expectation(w, [](double x) { return std::exp(-x); }, mc, 5);
    CHECK(a.mean == b.mean);
    CHECK(a.m2 == b.m2);
  }

  TEST_CASE("moment generating function") {
    for (const auto& s : testing::corpus(5, 6, 73)) {
      const auto mu = dirichlet_eigenvalues(s, s.right_limit());
      std::vector<double> w;
      for (double m : mu) w.push_back(1.0 / m);
      for (double lam : {-0.5, -1.0, -2.0}) {
        double exact = 1.0;
        for (double m : mu) exact *= std::pow(1.0 - lam / m, -2.0);
        McParams mc;
        mc.samples = 100000;
        const auto st = mc_expectation(w, [lam](double x) { return std::exp(lam * x); }, mc, 9);
        CHECK(std::abs(st.mean - exact) <= 4.0 * st.standard_error());
      }
    }
  }

  TEST_CASE("single eigenvalue closed form") {
    // X = Gamma(2) / mu: E e^{lambda X} = (1 - lambda / mu)^-2
    McParams mc;
    mc.samples = 200000;
    const auto st = mc_expectation({1.0 / 3.0}, [](double x) { return std::exp(-1.5 * x); }, mc, 3);
    CHECK(std::abs(st.mean - 1.0 / 2.25) <= 4.0 * st.standard_error());
  }

  TEST_CASE("standard error shrinks like N^-1/2") {
    const std::vector<double> w{1.0, 0.5};
    double prev = 0.0;
    for (std::size_t n : {10000u, 40000u, 160000u}) {
      McParams mc;
      mc.samples = n;
      const double se = mc_expectation(w, [](double x) { return std::exp(-x); }, mc, 11).standard_error();
      if (prev > 0.0) CHECK(prev / se == doctest::Approx(2.0).epsilon(0.1));
      prev = se;
    }
  }

  TEST_CASE("exponential identity on one atom") {
    const auto r = verify_eq10(testing::single_atom(), 1.0, -1.0, McParams{});
    CHECK(r.get("exact") == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(r.pass);
    const auto zero = verify_eq10(testing::single_atom(), 1.0, 0.0, McParams{});
    CHECK(zero.pass);
    CHECK(zero.get("exact") == 1.0);
  }

  TEST_CASE("exponential identity on a random string") {
    CounterRng rng(4, 74);
    const auto s = random_test_string(rng, 5);
    CHECK(verify_eq10(s, s.right_limit(), -2.0, McParams{}).pass);
  }

  TEST_CASE("weighted identity") {
    CounterRng rng(5, 75);
    const auto s = random_test_string(rng, 4);
    CHECK(verify_eq32(s, s.right_limit(), -1.0, ScaleFunction::power(2.0), McParams{}).pass);
    CHECK(verify_eq32(testing::single_atom(), 1.0, -1.0, ScaleFunction::power(1.0), McParams{}).pass);
    CHECK(verify_eq32(testing::single_atom(), 1.0, -1e-4, ScaleFunction::power(2.0), McParams{}).pass);
  }

  TEST_CASE("occupation identity") {
    Eq26Params p;
    p.eps = 0.05;
    p.f = [](double t) { return t < 0.05 ? 0.0 : (t - 0.05) * std::exp(-t); };
    McParams mc;
    mc.samples = 50000;
    CHECK(verify_eq26(testing::single_atom(), p, mc).pass);
    const StieltjesString three({{-1.0, 0.5}, {0.0, 1.0}, {0.7, 0.8}}, 1.5);
    CHECK(verify_eq26(three, p, mc).pass);
  }
}
