#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "krein/errors.hpp"
#include "krein/lemmas.hpp"
#include "krein/random.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"
#include "krein/stochastic.hpp"

using namespace krein;
using testing::rel;

namespace {

std::vector<ScaleFunction> families() {
  return {ScaleFunction::power(1.0), ScaleFunction::power(2.0), ScaleFunction::power(3.0),
          ScaleFunction::power_log(2.0, 10.0),
          ScaleFunction::tabulated({{0.0, 0.0}, {0.25, 0.05}, {0.5, 0.2}, {1.0, 1.0}})};
}

}  // namespace

TEST_SUITE("scale_analysis") {
  TEST_CASE("construction contracts") {
    CHECK_THROWS_AS(ScaleFunction::power(0.5), InvalidInput);
    CHECK_THROWS_AS(ScaleFunction::power_log(2.0, 0.1), InvalidInput);
    CHECK_THROWS_AS(ScaleFunction::tabulated({{0.0, 0.0}, {0.5, 0.4}, {1.0, 0.5}}), InvalidInput);
    CHECK_THROWS_AS(ScaleFunction::parse("cubic:3"), InvalidInput);
    CHECK(ScaleFunction::parse("power:2")(0.5) == doctest::Approx(0.25));
    CHECK(ScaleFunction::parse("powerlog:2,10")(0.5) == doctest::Approx(0.25 * (10.0 - std::log(0.5))));
  }

  TEST_CASE("linear extension past one") {
    const auto p = ScaleFunction::power(2.0);
    CHECK(p(3.0) == doctest::Approx(5.0));
    CHECK(p.slope_at_one() == doctest::Approx(2.0));
  }

  TEST_CASE("convex and increasing on sampled triples") {
    CounterRng rng(1, 41);
    for (const auto& f : families())
      for (int k = 0; k < 200; ++k) {
        const double a = 2.0 * rng.uniform(), b = 2.0 * rng.uniform(), t = rng.uniform();
        const double lo = std::min(a, b), hi = std::max(a, b);
        CHECK(f(lo) <= f(hi));
        CHECK(f(t * lo + (1 - t) * hi) <= t * f(lo) + (1 - t) * f(hi) + 1e-14);
      }
  }

  TEST_CASE("C_plus and C_minus") {
    CounterRng rng(2, 42);
    for (const auto& f : families()) {
      CHECK(c_plus(f, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
      const double ap = alpha_plus(f);
      CHECK(ap >= 1.0 - 1e-9);
      for (int k = 0; k < 20; ++k) {
        const double x = std::exp(4.0 * rng.uniform() - 2.0), y = std::exp(4.0 * rng.uniform() - 2.0);
        CHECK(c_plus(f, x * y) <= c_plus(f, x) * c_plus(f, y) * (1.0 + 1e-6));
        // phi(x y) <= C_plus(x) phi(y)
        CHECK(f(x * y) <= c_plus(f, x) * f(y) * (1.0 + 1e-6));
        const double u = rng.uniform(), v = rng.uniform();
        CHECK(c_minus(f, u * v) >= c_minus(f, u) * c_minus(f, v) * (1.0 - 1e-6));
        const double big = std::exp(1.0 + 3.0 * rng.uniform());
        CHECK(c_plus(f, big) <= std::pow(big, ap) * (1.0 + 1e-6));
        const double small = rng.uniform() / std::exp(1.0);
        CHECK(f(small) >= f.value_at_one() * std::pow(small, ap) * (1.0 - 1e-6));
      }
    }
  }

  TEST_CASE("C_plus of the extended square") {
    const auto p = ScaleFunction::power(2.0);
    CHECK(c_plus(p, 0.5) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(c_plus(p, 3.0) == doctest::Approx(9.0).epsilon(1e-6));
  }

  TEST_CASE("C_phi by quadrature") {
    // C_plus(u) = max(u, u^k) for the extended powers
    CHECK(c_phi(ScaleFunction::power(1.0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(c_phi(ScaleFunction::power(2.0)) == doctest::Approx(1.6090087745647571).epsilon(1e-8));
    CHECK(c_phi(ScaleFunction::power(3.0)) == doctest::Approx(3.1653645317858031).epsilon(1e-8));
    const double pl = c_phi(ScaleFunction::power_log(2.0, 10.0));
    CHECK(std::isfinite(pl));
    CHECK(pl > 0.0);
  }

  TEST_CASE("phi tilde") {
    CHECK(phi_tilde(ScaleFunction::power(2.0), 3.0) == doctest::Approx(0.070386143083861930).epsilon(1e-8));
    // large xi: the unextended part dominates, int t e^{-t xi} dt = xi^-2
    const auto p1 = ScaleFunction::power(1.0);
    CHECK(phi_tilde(p1, 50.0) * 2500.0 == doctest::Approx(1.0).epsilon(1e-8));
    double prev = kInf;
    for (double xi = 0.1; xi < 100.0; xi *= 2.0) {
      const double v = phi_tilde(ScaleFunction::power(2.0), xi);
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("membership") {
    for (const auto& s : testing::corpus(5, 6, 43)) {
      const auto m = membership_E_phi(s, ScaleFunction::power(2.0), s.right_limit());
      CHECK(m.finite);
      CHECK(std::isfinite(m.value));
      CHECK(membership_S_phi(spectral_measure(s), ScaleFunction::power(2.0)).finite);
    }
    CHECK(membership_S_phi(alpha_spectral_measure(2.0), ScaleFunction::power(3.0)).finite);
    CHECK_FALSE(membership_S_phi(alpha_spectral_measure(3.0), ScaleFunction::power(1.5)).finite);
    CHECK(membership_E_phi_alpha(2.0, ScaleFunction::power(3.0)).finite);
    CHECK_FALSE(membership_E_phi_alpha(3.0, ScaleFunction::power(1.5)).finite);
  }

  TEST_CASE("trace sandwich on one atom") {
    const auto r = verify_lemma_l2(testing::single_atom(), 1.0, -1.0);
    CHECK(r.pass);
    CHECK(r.get("T") == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r.get("lower") == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(r.get("upper") == doctest::Approx(1.0986122886681098).epsilon(1e-14));
  }

  TEST_CASE("trace sandwich on random strings") {
    CounterRng rng(3, 44);
    for (const auto& s : testing::corpus(40, 10, 44)) {
      const double a = s.left_support() + 1e-3 + rng.uniform() * (s.right_limit() - s.left_support() - 1e-3);
      const double lam = -std::exp(6.0 * rng.uniform() - 3.0);
      const auto r = verify_lemma_l2(s, a, lam);
      CHECK(r.pass);
      CHECK(r.get("trace_defect") < 1e-10);
    }
  }

  TEST_CASE("heat-trace estimates") {
    CounterRng rng(4, 45);
    const auto phis = families();
    std::vector<double> cphi;
    for (const auto& f : phis) cphi.push_back(c_phi(f));
    for (const auto& s : testing::corpus(20, 8, 45)) {
      const auto sigma = spectral_measure(s);
      const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(phis.size()));
      const double lam = -std::exp(4.0 * rng.uniform() - 2.0);
      const double a = s.left_support() + rng.uniform() * (s.right_limit() - s.left_support());
      const auto r = verify_lemma_l11(s, sigma, phis[j], lam, a, cphi[j]);
      CHECK(r.pass);
      CHECK(r.get("margin_lower") >= -1e-12);
      CHECK(r.get("margin_upper") >= -1e-12);
      CHECK(r.get("margin_split") >= -1e-12);
    }
  }

  TEST_CASE("Jensen bounds by Monte Carlo") {
    McParams mc;
    mc.samples = 40000;
    for (const auto& s : testing::corpus(5, 6, 46)) {
      std::vector<double> w;
      for (double mu : dirichlet_eigenvalues(s, s.right_limit())) w.push_back(1.0 / mu);
      for (const auto& f : families()) CHECK(verify_lemma_l9(w, f, mc).pass);
    }
  }
}
