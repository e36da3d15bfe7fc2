#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "krein/errors.hpp"
#include "krein/io.hpp"
#include "krein/string_core.hpp"

using namespace krein;
using testing::rel;

TEST_SUITE("string_core") {
  TEST_CASE("mass function of a single atom") {
    const StieltjesString inf_l({{0.0, 2.0}}, kInf);
    CHECK(mass_m(inf_l, -1.0) == 0.0);
    CHECK(mass_m(inf_l, 0.0) == 2.0);
    CHECK(mass_m(testing::single_atom(), 1.5) == kInf);
    CHECK(mass_integral_M(inf_l, 1.0) == 2.0);
    CHECK(mass_integral_M(inf_l, -3.0) == 0.0);
    CHECK(mass_integral_M(testing::single_atom(), 1.5) == kInf);
  }

  TEST_CASE("M of two atoms by direct sum") {
    const StieltjesString s({{-1.0, 1.0}, {0.0, 3.0}}, kInf);
    CHECK(mass_integral_M(s, 2.0) == doctest::Approx(9.0).epsilon(1e-15));
  }

  TEST_CASE("M agrees with a Riemann sum of m") {
    for (const auto& s : testing::corpus(20, 10, 1)) {
      const double lo = s.left_support() - 1.0, hi = 0.5 * (s.right_support() + s.right_limit());
      // m is piecewise constant, so the midpoint rule is exact between atoms
      double integral = 0.0;
      std::vector<double> knots{lo};
      for (const auto& a : s.atoms()) knots.push_back(a.x);
      knots.push_back(hi);
      for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        integral += mass_m(s, 0.5 * (knots[i] + knots[i + 1])) * (knots[i + 1] - knots[i]);
      CHECK(rel(mass_integral_M(s, hi), integral) < 1e-12);
    }
  }

  TEST_CASE("M is convex and nondecreasing on samples") {
    for (const auto& s : testing::corpus(20, 8, 2)) {
      const double lo = s.left_support() - 1.0, hi = s.right_limit();
      double prev = -1.0;
      for (int i = 0; i <= 200; ++i) {
        const double x = lo + (hi - lo) * i / 200.0;
        const double v = mass_integral_M(s, x);
        CHECK(v >= prev);
        prev = v;
      }
      for (int i = 1; i < 50; ++i) {
        const double x0 = lo + (hi - lo) * (i - 1) / 50.0, x1 = lo + (hi - lo) * i / 50.0,
                     x2 = lo + (hi - lo) * (i + 1) / 50.0;
        CHECK(mass_integral_M(s, x1) <= 0.5 * (mass_integral_M(s, x0) + mass_integral_M(s, x2)) + 1e-12);
      }
    }
  }

  TEST_CASE("normalization to M(0) = c") {
    const StieltjesString s({{0.0, 2.0}}, kInf);
    const auto n = normalize_to_Ec(s, 2.0);
    CHECK(n.atoms().front().x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(mass_integral_M(n, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(normalize_to_Ec(n, 2.0) == n);

    const StieltjesString short_string({{0.0, 1.0}}, 0.5);  // M(l) = 0.5
    CHECK_THROWS_AS(normalize_to_Ec(short_string, 1.0), NormalizationImpossible);
  }

  TEST_CASE("normalization lands on M(0) = c for random strings") {
    for (const auto& s : testing::corpus(30, 10, 3)) {
      const double c = 0.5 * mass_integral_M(s, s.right_limit());
      CHECK(rel(mass_integral_M(normalize_to_Ec(s, c), 0.0), c) < 1e-12);
    }
  }

  TEST_CASE("shift and scale act as a group") {
    for (const auto& s : testing::corpus(10, 6, 4)) {
      CHECK(shift(shift(s, 0.7), -0.7).atoms().size() == s.size());
      const auto back = shift(shift(s, 0.7), -0.7);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.atoms()[i].x == doctest::Approx(s.atoms()[i].x));
      CHECK(scale(s, 1.0, 1.0) == s);

      const auto twice = scale(scale(s, 2.0, 3.0), 0.5, 5.0);
      const auto once = scale(s, 1.0, 15.0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(twice.atoms()[i].x - once.atoms()[i].x) <= 1e-14 * (1.0 + std::abs(once.atoms()[i].x)));
        CHECK(rel(twice.atoms()[i].w, once.atoms()[i].w) < 1e-14);
      }
    }
  }

  TEST_CASE("scaled mass function") {
    const auto s = testing::corpus(1, 6, 5).front();
    const double a = 1.7, b = 0.3;
    const auto t = scale(s, a, b);
    for (double x : {-3.0, -1.0, -0.2, 0.4}) {
      if (a * x >= s.right_limit()) continue;
      CHECK(mass_m(t, x) == doctest::Approx(a * b * mass_m(s, a * x)));
    }
  }

  TEST_CASE("nu scaling reproduces M exactly") {
    const auto s = testing::corpus(1, 6, 6).front();
    const double nu = 0.37, finv = 2.5;
    const auto t = nu_scaling(s, nu, finv);
    for (int i = 0; i <= 40; ++i) {
      const double x = (s.left_support() - 1.0 + (s.right_limit() - s.left_support() + 1.0) * i / 41.0) / nu;
      CHECK(std::abs(mass_integral_M(t, x) - finv * mass_integral_M(s, nu * x)) <=
            1e-12 * (1.0 + finv * mass_integral_M(s, nu * x)));
    }
    CHECK(nu_scaling(s, 1.0, 1.0) == s);
  }

  TEST_CASE("compactified distance") {
    const StieltjesString one({{0.0, 1.0}}, kInf), three({{0.0, 3.0}}, kInf);
    const std::vector<double> g1{1.0};
    CHECK(compactified_distance(one, three, g1) == doctest::Approx(0.29516723530086655).epsilon(1e-14));
    CHECK(compactified_distance(one, one, g1) == 0.0);

    const StieltjesString l1({{0.0, 1.0}}, 1.0), l2({{0.0, 1.0}}, 2.0);
    const std::vector<double> left{-2.0, -0.5, 0.5, 0.99};
    CHECK(compactified_distance(l1, l2, left) == 0.0);
  }

  TEST_CASE("compactified mass lies in [0, 1] and is nondecreasing") {
    for (const auto& s : testing::corpus(10, 6, 7)) {
      double prev = 0.0;
      for (int i = 0; i <= 100; ++i) {
        const double x = s.left_support() - 2.0 + (s.right_limit() + 1.0 - s.left_support()) * i / 100.0;
        const double v = compactified_mass(s, x);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
      }
    }
  }

  TEST_CASE("constructor rejects bad strings") {
    CHECK_THROWS_AS(StieltjesString({}, 1.0), InvalidInput);
    CHECK_THROWS_AS(StieltjesString({{1.0, 1.0}, {0.0, 1.0}}, 2.0), InvalidInput);
    CHECK_THROWS_AS(StieltjesString({{0.0, -1.0}}, 2.0), InvalidInput);
    CHECK_THROWS_AS(StieltjesString({{0.0, 1.0}}, 0.0), InvalidInput);
  }
}

TEST_SUITE("io") {
  TEST_CASE("string JSON round trip") {
    const auto s = testing::corpus(1, 5, 8).front();
    CHECK(string_from_json(string_to_json(s)) == s);
    const StieltjesString inf_l({{0.0, 2.0}}, kInf, "x");
    CHECK(string_from_json(string_to_json(inf_l)).infinite_length());
  }

  TEST_CASE("strict validation") {
    using nlohmann::json;
    CHECK_THROWS_AS(string_from_json(json::parse(R"({"atoms":[{"x":0,"w":1}],"l":1,"extra":2})")), InvalidInput);
    CHECK_THROWS_AS(string_from_json(json::parse(R"({"atoms":[{"x":1,"w":1},{"x":0,"w":1}],"l":2})")), InvalidInput);
    CHECK_THROWS_AS(string_from_json(json::parse(R"({"atoms":[{"x":0,"w":0}],"l":1})")), InvalidInput);
    CHECK_THROWS_AS(string_from_json(json::parse(R"({"atoms":[{"x":0,"w":1}],"l":"big"})")), InvalidInput);
    CHECK_THROWS_AS(string_from_json(json::parse(R"({"atoms":[{"x":0,"w":1}]})")), InvalidInput);
    CHECK_THROWS_AS(spectrum_from_json(json::parse(R"({"atoms":[{"xi":1,"w":1}],"a":0,"b":1})")), InvalidInput);
  }
}
