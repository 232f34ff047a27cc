#include <doctest.h>

#include <cmath>

#include "celldim/concentration.hpp"
#include "celldim/exact.hpp"
#include "test_support.hpp"

using namespace celldim;

TEST_CASE("bennett g") {
  CHECK(bennett_g(0.0) == 0.0);
  CHECK(bennett_g(std::numbers::e - 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bennett_g(1.0) == doctest::Approx(0.38629436111989062).epsilon(1e-13));
  CHECK_THROWS_AS(bennett_g(-0.1), DomainError);
  // strictly increasing and convex on a grid
  double prev = 0.0, prev_slope = 0.0;
  for (double u = 0.25; u <= 8.0; u += 0.25) {
    const double cur = bennett_g(u);
    CHECK(cur > prev);
    const double slope = cur - prev;
    CHECK(slope >= prev_slope - 1e-12);
    prev = cur;
    prev_slope = slope;
  }
}

TEST_CASE("concentration loss bound") {
  ConcentrationInput ci;
  ci.mean = 2.0;
  ci.variance_like = 3.0;
  ci.bound_l = 2.0;
  CHECK(concentration_loss_bound(ci, 2.0) == 1.0);
  CHECK(concentration_loss_bound(ci, 1.0) == 1.0);
  // V = 3, L = 2, a = 12.34: exp(-0.75 g(8.2267)) from a scalar oracle
  CHECK(concentration_loss_bound(ci, ci.mean + 12.34) ==
        doctest::Approx(1.0034291709729829e-4).epsilon(1e-12));

  // monotone decreasing in n_avail
  double prev = 1.0;
  for (double n = 2.0; n <= 30.0; n += 0.5) {
    const double b = concentration_loss_bound(ci, n);
    CHECK(b <= prev + 1e-15);
    prev = b;
  }
}

TEST_CASE("bennett dominates the poisson tail on the unit lattice") {
  // L = 1, V = theta: the bound must sit above the exact tail everywhere
  const double theta = 4.2;
  CompoundPoissonSpec spec;
  spec.rates = {theta};
  spec.truncation_epsilon = 1e-12;
  const DemandPmf pmf = demand_pmf(spec);
  ConcentrationInput ci;
  ci.mean = theta;
  ci.variance_like = theta;
  ci.bound_l = 1.0;
  for (std::int64_t n = 0; n <= pmf.support_cap(); ++n) {
    const LossEstimate exact = exact_loss(pmf, n);
    CHECK(concentration_loss_bound(ci, static_cast<double>(n)) >=
          exact.value - 1e-15);
  }
}

TEST_CASE("dimension concentration") {
  ConcentrationInput unit;
  unit.mean = 0.0;
  unit.variance_like = 1.0;
  unit.bound_l = 1.0;
  const DimensionResult r1 =
      dimension_concentration(unit, std::exp(-1.0));
  CHECK(*r1.alpha_or_margin ==
        doctest::Approx(1.7182818284590452).epsilon(1e-9));
  CHECK(r1.n_avail == 2);  // ceil(0 + e - 1)
  CHECK(r1.guarantee);

  ConcentrationInput ci;
  ci.mean = 5.0 / 3.0;
  ci.variance_like = 3.0;
  ci.bound_l = 2.0;
  const DimensionResult r2 = dimension_concentration(ci, 1e-4);
  CHECK(*r2.alpha_or_margin ==
        doctest::Approx(12.343080992431787).epsilon(1e-8));
  CHECK(r2.n_avail == 15);
  // defining property
  CHECK(concentration_loss_bound(ci, static_cast<double>(r2.n_avail)) <= 1e-4);

  CHECK_THROWS_AS(dimension_concentration(ci, 0.0), DomainError);
  CHECK_THROWS_AS(dimension_concentration(ci, 1.0), DomainError);

  // N never below floor(mean) + 1
  ConcentrationInput tiny;
  tiny.mean = 7.9;
  tiny.variance_like = 1e-6;
  tiny.bound_l = 1.0;
  const DimensionResult r3 = dimension_concentration(tiny, 0.9);
  CHECK(r3.n_avail >= 8);
  CHECK(concentration_loss_bound(tiny, static_cast<double>(r3.n_avail)) <= 0.9);
}
