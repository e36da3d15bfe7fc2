#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "krein/alpha_family.hpp"
#include "krein/asymptotics.hpp"
#include "krein/errors.hpp"
#include "krein/scale.hpp"
#include "krein/spectral.hpp"

using namespace krein;
using testing::rel;

TEST_SUITE("asymptotics") {
  TEST_CASE("family constants") {
    CHECK_THROWS_AS(AlphaFamily(1.0), InvalidInput);
    CHECK_THROWS_AS(AlphaFamily(-2.0), InvalidInput);
    const AlphaFamily two(2.0);
    CHECK(two.beta() == doctest::Approx(2.0));
    CHECK(two.C() == doctest::Approx(4.0).epsilon(1e-15));
  }

  TEST_CASE("closed forms") {
    CHECK(closed_form_p(AlphaFamily(2.0), 1.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(closed_form_p(AlphaFamily(3.0), 1.0) == doctest::Approx(121.5).epsilon(1e-14));
    CHECK(closed_form_sigma(AlphaFamily(2.0), 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(closed_form_p(AlphaFamily(2.0), 5.0) == doctest::Approx(8.0 / 25.0).epsilon(1e-14));
    CHECK_THROWS_AS(closed_form_p(AlphaFamily(2.0), 0.0), DomainError);
  }

  TEST_CASE("discretization keeps mass and M") {
    const AlphaFamily fam(2.0);
    const double x_min = -50.0, x_max = -1e-3;
    const auto s = discretize_alpha_string(fam, x_min, x_max, 400);
    CHECK(s.right_limit() == 0.0);
    // the lumped tail atom carries m(x_min), so the total is m(x_max) = 4 / x_max^2
    CHECK(rel(s.total_mass(), 4.0 / (x_max * x_max)) < 1e-12);
    // M(x) = 4 / |x| right of x_min at the cell ends
    CHECK(rel(mass_integral_M(s, x_max), 4.0 / std::abs(x_max)) < 1e-10);
    CHECK(rel(mass_integral_M(s, x_min), 4.0 / std::abs(x_min)) < 1e-10);
    CHECK_THROWS_AS(discretize_alpha_string(fam, x_min, x_max, 1), InvalidInput);
    CHECK_THROWS_AS(discretize_alpha_string(fam, -1.0, 1.0, 10), InvalidInput);
  }

  TEST_CASE("nu transform matches the spectrum of the scaled string") {
    for (const auto& s : testing::corpus(10, 8, 61)) {
      for (double nu : {0.3, 4.0}) {
        const double b = 1.7;
        const auto direct = spectral_measure(nu_scaling(s, nu, b));
        const auto moved = nu_transform(spectral_measure(s), nu, b);
        CHECK(spectral_deviation(direct, moved) < 1e-10);
      }
    }
  }

  TEST_CASE("regularly varying helpers") {
    const RegVarying rv{1.5, 2.0, 1.0};
    for (double u : {1e-6, 1e-3, 0.1}) CHECK(rel(rv(rv.inverse(rv(u))), rv(u)) < 1e-10);
    CHECK(std::abs(rv.epsilon(1e8)) < std::abs(rv.epsilon(1e2)));
    CHECK(std::abs(rv.epsilon(rv.threshold(0.05))) <= 0.05 + 1e-12);
  }

  TEST_CASE("heat trace preconditions") {
    T7Params p;
    p.alpha = 1.5;
    CHECK_THROWS_AS(verify_t7(p), PreconditionFailed);
    p.alpha = 2.0;
    p.k = 0.5;
    CHECK_THROWS_AS(verify_t7(p), PreconditionFailed);
  }

  TEST_CASE("coarse grid misses the band, refinement moves toward it") {
    T7Params coarse;
    coarse.n_atoms = 5;
    coarse.levels = 1;
    coarse.check_truncation = false;
    const auto rc = verify_t7(coarse);
    CHECK_FALSE(rc.pass);

    T7Params finer = coarse;
    finer.n_atoms = 160;
    const auto rf = verify_t7(finer);
    CHECK(rf.get("max_dev_n160") < rc.get("max_dev_n5"));
  }

  TEST_CASE("small-xi constant on a moderate grid") {
    const auto s = discretize_alpha_string(AlphaFamily(2.0), -50.0, -1e-7, 800);
    const auto r = verify_p1(s, 2.0, RegVarying{1.0, 1.0, 0.0}, {1e-1, 1e-2}, 0.05);
    CHECK(r.pass);
    CHECK(r.get("K") == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("inverse of M and its monotone density") {
    const auto s = discretize_alpha_string(AlphaFamily(2.0), -50.0, -1e-4, 1000);
    const auto r = verify_l12(s, RegVarying{1.0, 1.0, 0.0}, {0.5, 1.5, 2.0, 3.0}, {10.0, 100.0, 1000.0});
    CHECK(r.pass);
    CHECK_THROWS_AS(verify_l12(s, RegVarying{1.0, 1.0, 0.0}, {2.0}, {1e9}), DomainError);
  }

  TEST_CASE("uniform bound along the nu ladder") {
    const auto sigma = spectral_measure(discretize_alpha_string(AlphaFamily(2.0), -50.0, -1e-4, 600));
    const RegVarying rv{1.0, 1.0, 0.0};
    const std::vector<double> ladder{1.0, 0.5, 0.1, 0.01};
    const auto r = verify_l13_uniform(sigma, 2.0, WeightFunction::from_scale(ScaleFunction::power(2.0)), rv, ladder);
    CHECK(r.pass);
    CHECK(r.get("max_over_min") <= 10.0);
    CHECK(verify_l13_uniform(sigma, 2.0, WeightFunction::subexponential(1.0, 2.0), rv, ladder).pass);
    CHECK_THROWS_AS(
        verify_l13_uniform(sigma, 3.0, WeightFunction::from_scale(ScaleFunction::power(1.5)), rv, {1.0, 0.5}),
        PreconditionFailed);
  }

  TEST_CASE("weight exponent estimate") {
    CHECK(estimate_weight_exponent(WeightFunction::from_scale(ScaleFunction::power(2.5))) ==
          doctest::Approx(2.5).epsilon(1e-6));
  }
}
