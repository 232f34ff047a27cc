#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "celldim/errors.hpp"
#include "celldim/normal_sf.hpp"
#include "celldim/numeric.hpp"

using namespace celldim;

TEST_CASE("gauss pdf and cdf anchors") {
  CHECK(gauss_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gauss_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  // High-precision erfc oracle values
  CHECK(gauss_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(std::abs(gauss_cdf(1.9599639845400532) - 0.975) < 1e-12);
  CHECK(std::abs(gauss_sf(2.0) - 0.02275013194817922) < 1e-14);
  CHECK(std::abs(gauss_sf(1.0) - 0.15865525393145707) < 1e-14);
  // sf and cdf are complements far into the bulk
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(gauss_cdf(x) + gauss_sf(x) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("gauss quantile") {
  CHECK(gauss_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gauss_quantile(1.0 - 1e-4) ==
        doctest::Approx(3.719016485455568).epsilon(1e-10));
  CHECK(gauss_quantile(0.975) ==
        doctest::Approx(1.9599639845400532).epsilon(1e-12));
  CHECK_THROWS_AS(gauss_quantile(0.0), DomainError);
  CHECK_THROWS_AS(gauss_quantile(1.0), DomainError);
  CHECK_THROWS_AS(gauss_quantile(-0.2), DomainError);

  // |cdf(quantile(p)) - p| <= 1e-9 across the domain, including deep tails
  for (double p : {1e-12, 1e-9, 1e-6, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.999,
                   1.0 - 1e-6, 1.0 - 1e-9}) {
    const double x = gauss_quantile(p);
    CHECK(std::abs(gauss_cdf(x) - p) <= 1e-9);
  }
}

TEST_CASE("hermite basis") {
  // Explicit coefficient anchors
  CHECK(hermite(2, 0.0) == -1.0);
  CHECK(hermite(4, 0.0) == 3.0);
  CHECK(hermite(5, 1.0) == doctest::Approx(6.0));
  CHECK(hermite_coefficients(3).size() == 4);
  CHECK(hermite_coefficients(5)[1] == 15.0);
  CHECK_THROWS_AS(hermite(6, 0.0), DomainError);

  // Three-term recursion H_{k+1} = x H_k - k H_{k-1} at scattered points
  std::uint64_t state = 12345;
  for (int i = 0; i < 100; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double x =
        -5.0 + 10.0 * static_cast<double>(state >> 11) * 0x1.0p-53;
    for (int k = 1; k <= 4; ++k) {
      const double lhs = hermite(k + 1, x);
      const double rhs = x * hermite(k, x) - k * hermite(k - 1, x);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("q_derivative anchors") {
  CHECK(q_derivative(3, 0.0) ==
        doctest::Approx(-0.3989422804014327).epsilon(1e-13));
  CHECK(q_derivative(3, 1.0) == doctest::Approx(0.0));
  CHECK(q_derivative(5, 0.0) ==
        doctest::Approx(3.0 * 0.3989422804014327).epsilon(1e-13));
  CHECK_THROWS_AS(q_derivative(2, 0.0), DomainError);
  CHECK_THROWS_AS(q_derivative(6, 0.0), DomainError);
}

TEST_CASE("hermite polynomials integrate to zero against the gaussian") {
  for (int k = 1; k <= 5; ++k) {
    const QuadratureResult q = adaptive_simpson(
        [k](double x) { return hermite(k, x) * gauss_pdf(x); }, -12.0, 12.0,
        1e-12);
    CHECK(std::abs(q.value) <= 1e-10);
  }
}

TEST_CASE("semigroup time integral equals 2/3") {
  // Int_0^inf e^{-4t} (1-e^{-2t})^{-1/2} dt after t = s^2, which removes
  // the inverse square-root singularity at the origin.
  auto integrand = [](double s) {
    const double t = s * s;
    if (t == 0.0) return std::sqrt(2.0);
    return std::exp(-4.0 * t) / std::sqrt(-std::expm1(-2.0 * t)) * 2.0 * s;
  };
  const QuadratureResult q = adaptive_simpson(integrand, 0.0, 6.0, 1e-10);
  CHECK(std::abs(q.value - 2.0 / 3.0) <= 1e-8);
}
