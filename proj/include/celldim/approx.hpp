#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "celldim/errors.hpp"
#include "celldim/moments.hpp"
#include "celldim/normal_sf.hpp"
#include "celldim/numeric.hpp"
#include "celldim/results.hpp"

namespace celldim {

// A loss probability enclosed by clamped lower/upper bounds. certified is
// set when the bound carries the proven error constant of its theorem.
struct BoundedLoss {
  double lower = 0.0;
  double upper = 1.0;
  Method method = Method::gaussian;
  bool certified = false;
  bool clamped_lower = false;
  bool clamped_upper = false;
};

// The three certified error terms, all decreasing in lambda:
//  - stein_error: (1/2) sqrt(pi/2) m(3,lambda), the Lipschitz-functional
//    constant; the printed text of the Gaussian sandwich carries
//    (1/2) sqrt(2/pi) instead, kept behind the paper_literal flag.
//  - edgeworth1_error E: (m(3,1)^2/6 + sqrt(2/pi) m(4,1)/9) / lambda.
//  - edgeworth2_error F: m(3,1)/lambda^(3/2) *
//      ((2/45) m(3,1)^2 + (4/135 + pi^2/128) sqrt(2/pi) m(4,1)).
struct ErrorTerms {
  double stein_error = 0.0;
  double edgeworth1_error = 0.0;
  double edgeworth2_error = 0.0;
};

inline constexpr double kSteinConstant = 0.6266570686577501;   // sqrt(pi/2)/2
inline constexpr double kSteinLiteral = 0.3989422804014327;    // sqrt(2/pi)/2

inline ErrorTerms compute_error_terms(const MomentSet& ms, double lambda) {
  const double m31 = normalized_moment(ms, 3, 1.0);
  const double m41 = normalized_moment(ms, 4, 1.0);
  const double sqrt_2_pi = std::sqrt(2.0 / std::numbers::pi);
  ErrorTerms et;
  et.stein_error = kSteinConstant * normalized_moment(ms, 3, lambda);
  et.edgeworth1_error = (m31 * m31 / 6.0 + sqrt_2_pi * m41 / 9.0) / lambda;
  et.edgeworth2_error =
      m31 / std::pow(lambda, 1.5) *
      ((2.0 / 45.0) * m31 * m31 +
       (4.0 / 135.0 + std::numbers::pi * std::numbers::pi / 128.0) *
           sqrt_2_pi * m41);
  return et;
}

namespace detail {

inline double clamp_probability(double p, bool& clamped) {
  if (p < 0.0) {
    clamped = true;
    return 0.0;
  }
  if (p > 1.0) {
    clamped = true;
    return 1.0;
  }
  return p;
}

}  // namespace detail

// Gaussian sandwich with unit lag:
//   1-Q(Ns+1) - c <= loss <= 1-Q(Ns-1) + c.
// Default c is the proven Stein constant; paper_literal reproduces the
// printed sqrt(2/pi) factor and drops the certification.
inline BoundedLoss gaussian_bounds(const MomentSet& ms, double lambda,
                                   double n_avail, bool paper_literal = false) {
  const double ns = standardized_threshold(ms, lambda, n_avail);
  const double c = (paper_literal ? kSteinLiteral : kSteinConstant) *
                   normalized_moment(ms, 3, lambda);
  BoundedLoss out;
  out.method = Method::gaussian;
  out.certified = !paper_literal;
  out.lower = detail::clamp_probability(gauss_sf(ns + 1.0) - c,
                                        out.clamped_lower);
  out.upper = detail::clamp_probability(gauss_sf(ns - 1.0) + c,
                                        out.clamped_upper);
  return out;
}

// Order-1 Edgeworth sandwich with lag 3.5:
//   1-Q(x) -/+ (m(3,lambda)/6) Q'''(x) -/+ E  at x = Ns +/- 3.5.
inline BoundedLoss edgeworth1_bounds(const MomentSet& ms, double lambda,
                                     double n_avail) {
  const double ns = standardized_threshold(ms, lambda, n_avail);
  const double m3 = normalized_moment(ms, 3, lambda);
  const double e = compute_error_terms(ms, lambda).edgeworth1_error;
  BoundedLoss out;
  out.method = Method::edgeworth1;
  out.certified = true;
  const double xl = ns + 3.5;
  const double xu = ns - 3.5;
  out.lower = detail::clamp_probability(
      gauss_sf(xl) - (m3 / 6.0) * q_derivative(3, xl) - e, out.clamped_lower);
  out.upper = detail::clamp_probability(
      gauss_sf(xu) + (m3 / 6.0) * q_derivative(3, xu) + e, out.clamped_upper);
  return out;
}

enum class Edgeworth2Variant { paper_literal, derivation };

// Order-2 Edgeworth upper bound with lag 6.5, at x = Ns - 6.5:
//   1-Q(x) + (m(3,1)/(6 sqrt(l))) Q'''(x) + (m(3,1)^2/(72 l)) Q^(5)(x)
//         + (m(4,1)/(24 l)) T(x) + F.
// The printed text puts Q''' in the T slot; the order-2 expansion produces
// the fourth-derivative term, whose analytic value is -H_3(x) pdf(x). Only
// the derivation variant is certified.
inline BoundedLoss edgeworth2_upper(
    const MomentSet& ms, double lambda, double n_avail,
    Edgeworth2Variant variant = Edgeworth2Variant::derivation) {
  const double ns = standardized_threshold(ms, lambda, n_avail);
  const double m31 = normalized_moment(ms, 3, 1.0);
  const double m41 = normalized_moment(ms, 4, 1.0);
  const double f = compute_error_terms(ms, lambda).edgeworth2_error;
  const double x = ns - 6.5;
  const double t = variant == Edgeworth2Variant::paper_literal
                       ? q_derivative(3, x)
                       : -hermite(3, x) * gauss_pdf(x);
  BoundedLoss out;
  out.method = Method::edgeworth2;
  out.certified = variant == Edgeworth2Variant::derivation;
  out.lower = 0.0;
  out.upper = detail::clamp_probability(
      gauss_sf(x) + (m31 / (6.0 * std::sqrt(lambda))) * q_derivative(3, x) +
          (m31 * m31 / (72.0 * lambda)) * q_derivative(5, x) +
          (m41 / (24.0 * lambda)) * t + f,
      out.clamped_upper);
  return out;
}

namespace detail {

// Solves G(alpha) = epsilon for the first downward crossing on [0, 40].
inline double solve_tail_equation(const std::function<double(double)>& g,
                                  double epsilon, const char* who) {
  const std::optional<double> root =
      first_downward_crossing(g, 0.0, 40.0, epsilon);
  if (!root) {
    throw InfeasibleError(std::string(who) +
                          ": corrected tail equation has no solution on "
                          "[0, 40]");
  }
  return *root;
}

}  // namespace detail

// Gaussian sizing. Certified mode solves 1-Q(alpha) + stein_error = epsilon
// (infeasible when the error term alone exceeds the target); uncertified
// mode takes alpha = quantile(1 - epsilon). Either way
// N = ceil(1 + lambda M_1 + alpha sigma).
inline DimensionResult dimension_gaussian(const MomentSet& ms, double lambda,
                                          double epsilon,
                                          bool certified = true) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("dimension_gaussian: epsilon must be in (0, 1)");
  }
  const double stein = compute_error_terms(ms, lambda).stein_error;
  DimensionResult result;
  result.method = Method::gaussian;
  result.error_term_value = stein;
  double alpha;
  if (certified) {
    if (stein >= epsilon) {
      throw InfeasibleError(
          "dimension_gaussian: stein error exceeds the target loss");
    }
    alpha = detail::solve_tail_equation(
        [stein](double a) { return gauss_sf(a) + stein; }, epsilon,
        "dimension_gaussian");
    result.guarantee = true;
  } else {
    alpha = gauss_quantile(1.0 - epsilon);
    result.guarantee = false;
  }
  result.alpha_or_margin = alpha;
  result.n_avail = static_cast<std::int64_t>(
      std::ceil(1.0 + lambda * ms.m(1) + alpha * sigma(ms, lambda)));
  return result;
}

// Order-1 Edgeworth sizing: solve
//   1-Q(alpha) - (m(3,lambda)/6) Q'''(alpha) + E = epsilon,
// N = ceil(3.5 + lambda M_1 + alpha sigma). Guaranteed only while E < eps;
// otherwise the equation is solved without E and the result is flagged.
inline DimensionResult dimension_edgeworth1(const MomentSet& ms, double lambda,
                                            double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("dimension_edgeworth1: epsilon must be in (0, 1)");
  }
  const double e = compute_error_terms(ms, lambda).edgeworth1_error;
  const double m3 = normalized_moment(ms, 3, lambda);
  const bool certified = e < epsilon;
  const double e_used = certified ? e : 0.0;
  const double alpha = detail::solve_tail_equation(
      [m3, e_used](double a) {
        return gauss_sf(a) - (m3 / 6.0) * q_derivative(3, a) + e_used;
      },
      epsilon, "dimension_edgeworth1");
  DimensionResult result;
  result.method = Method::edgeworth1;
  result.guarantee = certified;
  result.alpha_or_margin = alpha;
  result.error_term_value = e;
  result.n_avail = static_cast<std::int64_t>(
      std::ceil(3.5 + lambda * ms.m(1) + alpha * sigma(ms, lambda)));
  return result;
}

// Order-2 Edgeworth sizing with the upper bound's own terms:
//   1-Q(alpha) + (m(3,l)/6) Q'''(alpha) + (m(3,1)^2/(72 l)) Q^(5)(alpha)
//             + (m(4,1)/(24 l)) T(alpha) + F = epsilon,
// N = ceil(6.5 + lambda M_1 + alpha sigma). F enters only while F < eps;
// the guarantee additionally requires the derivation variant.
inline DimensionResult dimension_edgeworth2(
    const MomentSet& ms, double lambda, double epsilon,
    Edgeworth2Variant variant = Edgeworth2Variant::derivation) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("dimension_edgeworth2: epsilon must be in (0, 1)");
  }
  const double f = compute_error_terms(ms, lambda).edgeworth2_error;
  const double m31 = normalized_moment(ms, 3, 1.0);
  const double m41 = normalized_moment(ms, 4, 1.0);
  const double m3l = normalized_moment(ms, 3, lambda);
  const bool f_small = f < epsilon;
  const double f_used = f_small ? f : 0.0;
  auto t_term = [variant](double a) {
    return variant == Edgeworth2Variant::paper_literal
               ? q_derivative(3, a)
               : -hermite(3, a) * gauss_pdf(a);
  };
  const double alpha = detail::solve_tail_equation(
      [&](double a) {
        return gauss_sf(a) + (m3l / 6.0) * q_derivative(3, a) +
               (m31 * m31 / (72.0 * lambda)) * q_derivative(5, a) +
               (m41 / (24.0 * lambda)) * t_term(a) + f_used;
      },
      epsilon, "dimension_edgeworth2");
  DimensionResult result;
  result.method = Method::edgeworth2;
  result.guarantee = f_small && variant == Edgeworth2Variant::derivation;
  result.alpha_or_margin = alpha;
  result.error_term_value = f;
  result.n_avail = static_cast<std::int64_t>(
      std::ceil(6.5 + lambda * ms.m(1) + alpha * sigma(ms, lambda)));
  return result;
}

}  // namespace celldim
