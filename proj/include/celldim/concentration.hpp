#pragma once

#include <cmath>
#include <cstdint>

#include "celldim/errors.hpp"
#include "celldim/moments.hpp"
#include "celldim/results.hpp"

namespace celldim {

// Inputs of the Bennett-style bound: mean demand lambda*M_1, the variance
// surrogate V = lambda*M_2 (the bound uses Int f^2 lambda dnu, not the true
// variance) and the essential bound L = max_k l_k of the demand functional.
struct ConcentrationInput {
  double mean = 0.0;           // lambda * M_1
  double variance_like = 0.0;  // V = lambda * M_2
  double bound_l = 1.0;        // L
};

inline ConcentrationInput concentration_input(const MomentSet& ms,
                                              double lambda, int max_level) {
  ConcentrationInput ci;
  ci.mean = lambda * ms.m(1);
  ci.variance_like = lambda * ms.m(2);
  ci.bound_l = static_cast<double>(max_level);
  return ci;
}

// g(u) = (1+u) ln(1+u) - u, zero at the origin, increasing and convex.
inline double bennett_g(double u) {
  if (u < 0.0) throw DomainError("bennett_g: u must be >= 0");
  return (1.0 + u) * std::log1p(u) - u;
}

// P(demand >= mean + a) <= exp(-(V/L^2) g(aL/V)), a = n_avail - mean;
// returns 1 whenever a <= 0.
inline double concentration_loss_bound(const ConcentrationInput& ci,
                                       double n_avail) {
  const double a = n_avail - ci.mean;
  if (a <= 0.0) return 1.0;
  if (!(ci.variance_like > 0.0)) return a > 0.0 ? 0.0 : 1.0;
  const double l2 = ci.bound_l * ci.bound_l;
  const double bound =
      std::exp(-(ci.variance_like / l2) *
               bennett_g(a * ci.bound_l / ci.variance_like));
  return std::min(1.0, bound);
}

// Robust sizing: solve (V/L^2) g(aL/V) = -ln(eps) for the additive margin a
// and take N = ceil(mean + a). The solve inverts g by bisection on its
// argument; g is strictly increasing so the root is unique.
inline DimensionResult dimension_concentration(const ConcentrationInput& ci,
                                               double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("dimension_concentration: epsilon must be in (0, 1)");
  }
  if (!(ci.variance_like > 0.0)) {
    throw DegenerateFunctional("dimension_concentration: V must be positive");
  }
  const double l2 = ci.bound_l * ci.bound_l;
  const double target = -std::log(epsilon) * l2 / ci.variance_like;
  double lo = 0.0;
  double hi = 1.0;
  while (bennett_g(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bennett_g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double u = 0.5 * (lo + hi);
  const double a = u * ci.variance_like / ci.bound_l;
  DimensionResult result;
  result.method = Method::concentration;
  result.guarantee = true;
  result.alpha_or_margin = a;
  result.n_avail =
      std::max(static_cast<std::int64_t>(std::ceil(ci.mean + a)),
               static_cast<std::int64_t>(std::floor(ci.mean)) + 1);
  return result;
}

}  // namespace celldim
