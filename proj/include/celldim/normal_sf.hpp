#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "celldim/errors.hpp"

namespace celldim {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
inline constexpr double kSqrt1_2 = 0.7071067811865475244008444;

// Standard normal density.
inline double gauss_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Standard normal cumulative distribution function. erfc keeps the left
// tail accurate; absolute error is a few ulp, well under the 1e-12 budget.
inline double gauss_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

// Upper tail 1 - Q(x), computed without cancellation.
inline double gauss_sf(double x) { return 0.5 * std::erfc(x * kSqrt1_2); }

namespace detail {

// Acklam's rational initial guess for the standard normal quantile,
// accurate to ~1.15e-9 relative on its own.
inline double acklam_guess(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Inverse of gauss_cdf on (0, 1). Acklam guess plus two Halley refinements
// against the erfc-based CDF; |gauss_cdf(result) - p| stays far below the
// 1e-9 contract over the whole domain.
inline double gauss_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("gauss_quantile: p must lie in (0, 1)");
  }
  double x = detail::acklam_guess(p);
  // Residual evaluated on the smaller tail so that 1-p cancellation cannot
  // contaminate the refinement.
  for (int i = 0; i < 2; ++i) {
    double e;
    if (p < 0.5) {
      e = gauss_cdf(x) - p;
    } else {
      e = (1.0 - p) - gauss_sf(x);
    }
    const double u = e / gauss_pdf(x);
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

// Probabilists' Hermite polynomials H_0..H_5.
inline constexpr int kMaxHermiteOrder = 5;

inline std::span<const double> hermite_coefficients(int k) {
  // Coefficient of x^i is at position i.
  static constexpr std::array<double, 1> h0 = {1.0};
  static constexpr std::array<double, 2> h1 = {0.0, 1.0};
  static constexpr std::array<double, 3> h2 = {-1.0, 0.0, 1.0};
  static constexpr std::array<double, 4> h3 = {0.0, -3.0, 0.0, 1.0};
  static constexpr std::array<double, 5> h4 = {3.0, 0.0, -6.0, 0.0, 1.0};
  static constexpr std::array<double, 6> h5 = {0.0, 15.0, 0.0, -10.0, 0.0, 1.0};
  switch (k) {
    case 0: return h0;
    case 1: return h1;
    case 2: return h2;
    case 3: return h3;
    case 4: return h4;
    case 5: return h5;
    default:
      throw DomainError("hermite_coefficients: order must be in [0, 5]");
  }
}

inline double hermite(int k, double x) {
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x * x - 1.0;
    case 3: return x * (x * x - 3.0);
    case 4: return (x * x - 6.0) * x * x + 3.0;
    case 5: return ((x * x - 10.0) * x * x + 15.0) * x;
    default:
      throw DomainError("hermite: order must be in [0, 5]");
  }
}

// Q^(k)(x) = H_{k-1}(x) * pdf(x), the derivative shorthand the tail bounds
// consume. This is the sign convention the bound formulas are written in;
// it equals the analytic k-th derivative of the CDF for odd k and its
// negative for k = 4.
inline double q_derivative(int k, double x) {
  if (k < 3 || k > 5) {
    throw DomainError("q_derivative: k must be 3, 4 or 5");
  }
  return hermite(k - 1, x) * gauss_pdf(x);
}

}  // namespace celldim
