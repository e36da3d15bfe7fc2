#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "krein/errors.hpp"
#include "krein/propagation.hpp"
#include "krein/random.hpp"
#include "krein/spectral.hpp"

using namespace krein;
using testing::rel;

TEST_SUITE("spectral") {
  TEST_CASE("single atom") {
    const auto& s = testing::single_atom();
    const auto es = dirichlet_eigs(s, 1.0);
    REQUIRE(es.eigenvalues.size() == 1);
    CHECK(es.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(char_roots(s, 1.0)[0] == doctest::Approx(0.5).epsilon(1e-15));
    const auto sigma = spectral_measure(s);
    CHECK(sigma.atoms[0].xi == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sigma.atoms[0].weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(heat_trace(sigma, 2.0) == doctest::Approx(0.18393972058572117).epsilon(1e-14));
  }

  TEST_CASE("two unit atoms, Dirichlet at 2") {
    // phi_lambda(2) = 1 - 3 lambda + lambda^2
    const StieltjesString s({{0.0, 1.0}, {1.0, 1.0}}, 2.0);
    const auto sigma = spectral_measure(s);
    REQUIRE(sigma.atoms.size() == 2);
    CHECK(sigma.atoms[0].xi == doctest::Approx(0.3819660112501051).epsilon(1e-14));
    CHECK(sigma.atoms[1].xi == doctest::Approx(2.618033988749895).epsilon(1e-14));
    CHECK(sigma.atoms[0].weight == doctest::Approx(0.7236067977499790).epsilon(1e-14));
    CHECK(sigma.atoms[1].weight == doctest::Approx(0.2763932022500210).epsilon(1e-14));
  }

  TEST_CASE("errors") {
    const StieltjesString s({{0.0, 1.0}}, kInf);
    CHECK_THROWS_AS(spectral_measure(s), TruncationRequired);
    CHECK_THROWS_AS(dirichlet_eigs(s, 0.0), EmptySpectrum);
    CHECK_THROWS_AS(dirichlet_eigs(s, -1.0), EmptySpectrum);
  }

  TEST_CASE("trace identity and product formula") {
    CounterRng rng(1, 21);
    for (const auto& s : testing::corpus(50, 12, 21)) {
      const double a = s.left_support() + 1e-3 + rng.uniform() * (s.right_limit() - s.left_support() - 1e-3);
      const auto mu = dirichlet_eigenvalues(s, a);
      CHECK(mu.size() == s.count_below(a));
      double trace = 0.0;
      for (double m : mu) trace += 1.0 / m;
      CHECK(rel(trace, mass_integral_M(s, a)) < 1e-10);
      for (double lam : {-0.1, -1.0, -10.0, -100.0}) {
        double prod = 1.0;
        for (double m : mu) prod *= 1.0 - lam / m;
        CHECK(rel(prod, phi(s, lam, a).value) < 1e-8);
      }
      for (std::size_t k = 1; k < mu.size(); ++k) CHECK(mu[k] > mu[k - 1]);
    }
  }

  TEST_CASE("characteristic roots agree with the kernel eigensolve") {
    for (const auto& s : testing::corpus(30, 8, 22)) {
      const auto mu = dirichlet_eigenvalues(s, s.right_limit());
      const auto roots = char_roots(s, s.right_limit());
      REQUIRE(roots.size() == mu.size());
      for (std::size_t k = 0; k < mu.size(); ++k) CHECK(rel(roots[k], mu[k]) < 1e-9);
      // simple zeros: phi(a) alternates in sign between consecutive roots
      for (std::size_t k = 0; k + 1 < roots.size(); ++k) {
        const double mid = std::sqrt(roots[k] * roots[k + 1]);
        const double next = k + 2 < roots.size() ? std::sqrt(roots[k + 1] * roots[k + 2]) : 2.0 * roots[k + 1];
        CHECK(phi(s, mid, s.right_limit()).value * phi(s, next, s.right_limit()).value < 0.0);
      }
    }
  }

  TEST_CASE("Parseval identity") {
    CounterRng rng(2, 23);
    for (const auto& s : testing::corpus(40, 12, 23)) {
      const auto sigma = spectral_measure(s);
      std::vector<double> f;
      double lhs = 0.0;
      for (const auto& a : s.atoms()) {
        f.push_back(2.0 * rng.uniform() - 1.0);
        lhs += f.back() * f.back() * a.w;
      }
      const auto fh = fourier_transform(s, f, sigma);
      double rhs = 0.0;
      for (std::size_t k = 0; k < fh.size(); ++k) rhs += fh[k] * fh[k] * sigma.atoms[k].weight;
      CHECK(rel(rhs, lhs) < 1e-9);
    }
  }

  TEST_CASE("Green function from the eigen-expansion on atoms") {
    CounterRng rng(3, 24);
    for (const auto& s : testing::corpus(30, 10, 24)) {
      const auto sigma = spectral_measure(s);
      const double lam = -std::exp(4.0 * rng.uniform() - 2.0);
      const double x = s.atoms()[static_cast<std::size_t>(rng.uniform() * static_cast<double>(s.size()))].x;
      const double y = s.atoms()[static_cast<std::size_t>(rng.uniform() * static_cast<double>(s.size()))].x;
      CHECK(rel(green_spectral(s, sigma, lam, x, y), green(s, lam, x, y)) < 1e-8);
    }
  }

  TEST_CASE("shift invariance") {
    CounterRng rng(4, 25);
    for (const auto& s : testing::corpus(30, 10, 25)) {
      const auto a = spectral_measure(s);
      const auto b = spectral_measure(shift(s, 10.0 * rng.uniform() - 5.0));
      CHECK(spectral_deviation(a, b) < 1e-10);
    }
  }

  TEST_CASE("round trip up to translation") {
    CounterRng rng(5, 26);
    for (int k = 0; k < 20; ++k) {
      const auto s = random_test_string(rng, 5);
      const auto sigma = spectral_measure(s);
      const auto rec = reconstruct_from_spectrum(sigma, sigma.offset);
      CHECK(spectral_deviation(sigma, spectral_measure(rec)) < 1e-6);
      const auto al = align_strings(s, rec);
      CHECK(al.max_position_deviation < 1e-6);
      CHECK(al.max_mass_deviation < 1e-6);
    }
    const auto one = reconstruct_from_spectrum(spectral_measure(testing::single_atom()), 0.0);
    REQUIRE(one.size() == 1);
    CHECK(one.atoms()[0].w == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(one.right_limit() - one.atoms()[0].x == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("shifted copies reconstruct to the same string") {
    const auto s = testing::corpus(1, 6, 27).front();
    const auto r1 = reconstruct_from_spectrum(spectral_measure(s), 0.0);
    const auto r2 = reconstruct_from_spectrum(spectral_measure(shift(s, 3.0)), 0.0);
    const auto al = align_strings(r1, r2);
    CHECK(al.max_position_deviation < 1e-9);
    CHECK(al.max_mass_deviation < 1e-9);
  }

  TEST_CASE("closed-form power-law measures") {
    CHECK(heat_trace(alpha_spectral_measure(2.0), 1.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(heat_trace(alpha_spectral_measure(3.0), 1.0) == doctest::Approx(121.5).epsilon(1e-14));
    CHECK(cumulative_sigma(alpha_spectral_measure(2.0), 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(cumulative_sigma(alpha_spectral_measure(3.0), 1.0) == doctest::Approx(20.25).epsilon(1e-14));
  }

  TEST_CASE("heat trace decreases in t") {
    for (const auto& s : testing::corpus(10, 8, 28)) {
      const auto sigma = spectral_measure(s);
      double prev = kInf;
      for (double t = 0.01; t < 100.0; t *= 1.5) {
        const double p = heat_trace(sigma, t);
        CHECK(p < prev);
        prev = p;
      }
    }
  }

  TEST_CASE("transition density") {
    CounterRng rng(6, 29);
    for (const auto& s : testing::corpus(15, 8, 29)) {
      const auto sigma = spectral_measure(s);
      const auto& at = s.atoms();
      const double x = at[static_cast<std::size_t>(rng.uniform() * static_cast<double>(at.size()))].x;
      const double y = at[static_cast<std::size_t>(rng.uniform() * static_cast<double>(at.size()))].x;
      const double t = 0.5 + rng.uniform(), u = 0.5 + rng.uniform();
      CHECK(rel(transition_density(s, sigma, t, x, y), transition_density(s, sigma, t, y, x)) < 1e-12);

      double ck = 0.0;
      for (const auto& a : at) ck += transition_density(s, sigma, t, x, a.x) * transition_density(s, sigma, u, a.x, y) * a.w;
      CHECK(std::abs(ck - transition_density(s, sigma, t + u, x, y)) <=
            1e-8 * std::max(1.0, std::abs(transition_density(s, sigma, t + u, x, y))));

      const double M = mass_integral_M(s, x);
      const double tt = 2.0 * M + 0.5;
      CHECK(transition_density(s, sigma, tt, x, x) <= heat_trace(sigma, tt - 2.0 * M) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("Herglotz function") {
    SpectralMeasure empty;
    CHECK(herglotz_h(empty, -3.0, 1.5).value == 1.5);
    for (const auto& s : testing::corpus(10, 8, 30)) {
      const auto sigma = spectral_measure(s);
      double prev = -kInf;
      for (double lam = -50.0; lam < 0.0; lam /= 1.7) {
        if (lam > -1e-3) break;
        const double h = herglotz_h(sigma, lam, sigma.offset).value;
        CHECK(h > prev);
        prev = h;
      }
    }
  }

  TEST_CASE("Herglotz function of a string on [0, inf) is int phi^-2") {
    CounterRng rng(7, 31);
    for (int k = 0; k < 10; ++k) {
      const auto s0 = random_test_string(rng, 1 + k % 6);
      const auto s = shift(s0, s0.left_support() - 0.3 * rng.uniform());  // support in [0, inf)
      const auto sigma = spectral_measure(s);
      for (double lam : {-0.2, -1.0, -7.0})
        CHECK(rel(herglotz_h(sigma, lam, sigma.offset).value, krein_h(s, lam)) < 1e-8);
    }
  }

  TEST_CASE("interlacing when an atom is added") {
    for (const auto& s : testing::corpus(20, 8, 32)) {
      std::vector<Atom> atoms = s.atoms();
      atoms.push_back({0.5 * (s.right_support() + s.right_limit()), 0.7});
      const StieltjesString bigger(atoms, s.right_limit());
      auto a = dirichlet_eigenvalues(s, s.right_limit());
      auto b = dirichlet_eigenvalues(bigger, s.right_limit());
      // kernel eigenvalues 1/mu interlace
      std::vector<double> ta, tb;
      for (double m : a) ta.push_back(1.0 / m);
      for (double m : b) tb.push_back(1.0 / m);
      std::sort(ta.rbegin(), ta.rend());
      std::sort(tb.rbegin(), tb.rend());
      for (std::size_t k = 0; k < ta.size(); ++k) {
        CHECK(tb[k] >= ta[k] * (1.0 - 1e-12));
        CHECK(ta[k] >= tb[k + 1] * (1.0 - 1e-12));
      }
    }
  }
}
