#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "celldim/errors.hpp"
#include "celldim/normal_sf.hpp"
#include "celldim/numeric.hpp"
#include "celldim/scenario.hpp"

namespace celldim {

// Per-class demand structure: a class-k user needs l subchannels exactly
// when its SINR falls in [beta[l], beta[l-1]), with beta[0] = +inf and
// beta[max_level] = I*beta_min/P_gamma (outage below that). zeta[l-1] is
// the intensity-measure weight of the level-l annulus, in m^2.
struct ClassThresholds {
  int max_level = 0;                 // l_k
  std::vector<double> beta;          // size max_level+1, beta[0] = +inf
  std::vector<double> zeta;          // size max_level, zeta[l-1] = zeta_{k,l}
};

struct ThresholdTable {
  std::vector<ClassThresholds> classes;
  int max_level = 0;       // L = max_k l_k
  double shadow_moment = 1.0;  // E[G^(2/gamma)]

  // K_l = {k : l_k >= l}
  std::vector<std::size_t> level_set(int level) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      if (classes[k].max_level >= level) out.push_back(k);
    }
    return out;
  }
};

// l_k = N_max ^ ceil(C_k / (W log2(1 + beta_min)))
inline int demand_level(const CellScenario& s, std::size_t k) {
  const double cw = s.classes.at(k).rate_kbps / s.radio.subchannel_bandwidth_khz;
  const double need = std::ceil(cw / std::log2(1.0 + s.radio.min_sinr_linear));
  return static_cast<int>(
      std::min<double>(s.max_subchannels_per_user, std::max(1.0, need)));
}

inline std::vector<int> demand_levels(const CellScenario& s) {
  std::vector<int> out(s.classes.size());
  for (std::size_t k = 0; k < s.classes.size(); ++k) out[k] = demand_level(s, k);
  return out;
}

// beta_{0..lk} for a noise-to-power ratio ip = I/P_gamma, rate ratio
// cw = C_k/W and demand cap lk: beta_0 = +inf,
// beta_l = ip (2^(cw/l) - 1) for 1 <= l <= lk-1, beta_lk = ip beta_min.
// When lk comes from demand_level the sequence is strictly decreasing by
// construction; the guard exists for externally forced level counts.
inline std::vector<double> snr_thresholds_for_level(double ip, double cw,
                                                    int lk, double beta_min) {
  if (lk < 1) throw DomainError("snr_thresholds_for_level: lk must be >= 1");
  std::vector<double> beta(static_cast<std::size_t>(lk) + 1);
  beta[0] = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= lk - 1; ++l) {
    beta[static_cast<std::size_t>(l)] =
        ip * (std::exp2(cw / static_cast<double>(l)) - 1.0);
  }
  beta[static_cast<std::size_t>(lk)] = ip * beta_min;
  if (lk >= 2 && beta[static_cast<std::size_t>(lk)] >=
                     beta[static_cast<std::size_t>(lk - 1)]) {
    throw NonMonotoneThresholds(
        "snr_thresholds: I*beta_min/P_gamma >= beta_{k,l_k-1}; beta_min is "
        "inconsistent with the class rate");
  }
  return beta;
}

inline std::vector<double> snr_thresholds(const CellScenario& s,
                                          std::size_t k) {
  return snr_thresholds_for_level(
      s.radio.noise_w / effective_power(s.radio),
      s.classes.at(k).rate_kbps / s.radio.subchannel_bandwidth_khz,
      demand_level(s, k), s.radio.min_sinr_linear);
}

namespace detail {

// beta^(-2/gamma) with the infinite sentinel mapping to 0.
inline double inv_power_area(double beta, double gamma) {
  if (std::isinf(beta)) return 0.0;
  return std::pow(beta, -2.0 / gamma);
}

}  // namespace detail

// Paper closed form: zeta_{k,l} =
// pi (beta_l^(-2/g) ^ R^2 - beta_{l-1}^(-2/g) ^ R^2) E[G^(2/g)],
// the shadowing moment multiplying the clamped deterministic annulus.
inline std::vector<double> coverage_weights(const CellScenario& s,
                                            std::size_t k) {
  const std::vector<double> beta = snr_thresholds(s, k);
  const double gamma = s.radio.pathloss_exponent;
  const double r2 = s.radius_m * s.radius_m;
  const double eg = shadowing_fractional_moment(s.shadowing, gamma);
  std::vector<double> zeta(beta.size() - 1);
  for (std::size_t l = 1; l < beta.size(); ++l) {
    const double inner = std::min(detail::inv_power_area(beta[l - 1], gamma), r2);
    const double outer = std::min(detail::inv_power_area(beta[l], gamma), r2);
    zeta[l - 1] = std::numbers::pi * std::max(0.0, outer - inner) * eg;
  }
  return zeta;
}

// Reference variant with the R^2 clamp inside the shadowing expectation:
// zeta_exact = Int pi ((g^(2/g) beta_l^(-2/g)) ^ R^2
//                      - (g^(2/g) beta_{l-1}^(-2/g)) ^ R^2) drho(g),
// integrated over the log-normal law of g. Equals the closed form whenever
// the clamp never binds; the CLI reports the relative gap.
inline std::vector<double> coverage_weights_quadrature(const CellScenario& s,
                                                       std::size_t k,
                                                       double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("coverage_weights_quadrature: tol must be positive");
  }
  const std::vector<double> beta = snr_thresholds(s, k);
  const double gamma = s.radio.pathloss_exponent;
  const double r2 = s.radius_m * s.radius_m;
  const double v = std::sqrt(s.shadowing.variance_db2);
  const double kappa = s.shadowing.mean_db;
  std::vector<double> zeta(beta.size() - 1);
  const double ln10 = std::numbers::ln10;
  for (std::size_t l = 1; l < beta.size(); ++l) {
    const double area_l = detail::inv_power_area(beta[l], gamma);
    const double area_lm1 = detail::inv_power_area(beta[l - 1], gamma);
    auto annulus = [&](double g_pow) {
      return std::numbers::pi * (std::min(g_pow * area_l, r2) -
                                 std::min(g_pow * area_lm1, r2));
    };
    if (v == 0.0) {
      // Degenerate shadowing: nothing to integrate.
      const double g_pow = std::exp(ln10 * kappa / (5.0 * gamma));
      zeta[l - 1] = annulus(g_pow);
      continue;
    }
    // z-standardized integral over S = kappa + v z; integrand is bounded by
    // pi R^2, so truncating at |z| = 12 contributes < 4e-33 * pi R^2.
    auto integrand = [&](double z) {
      const double g_pow = std::exp(ln10 * (kappa + v * z) / (5.0 * gamma));
      return annulus(g_pow) * gauss_pdf(z);
    };
    const QuadratureResult q = adaptive_simpson(integrand, -12.0, 12.0, tol);
    zeta[l - 1] = q.value;
  }
  return zeta;
}

enum class WeightRule { closed_form, quadrature };

inline ThresholdTable build_threshold_table(
    const CellScenario& s, WeightRule rule = WeightRule::closed_form,
    double quad_tol = 1e-9) {
  ThresholdTable table;
  table.shadow_moment =
      shadowing_fractional_moment(s.shadowing, s.radio.pathloss_exponent);
  table.classes.resize(s.classes.size());
  for (std::size_t k = 0; k < s.classes.size(); ++k) {
    ClassThresholds& ct = table.classes[k];
    ct.max_level = demand_level(s, k);
    ct.beta = snr_thresholds(s, k);
    ct.zeta = rule == WeightRule::closed_form
                  ? coverage_weights(s, k)
                  : coverage_weights_quadrature(
                        s, k, quad_tol * s.radius_m * s.radius_m);
    table.max_level = std::max(table.max_level, ct.max_level);
  }
  return table;
}

// gamma_c ~ inf{gamma : beta_{s,l_s-1}^(-1/gamma) <= R}, s = argmax_k l_k
// (smallest k on ties). The thresholds are recomputed at every probe since
// K_gamma depends on gamma; the indicator is monotone for d_ref < R.
inline double critical_exponent(const CellScenario& s, double gamma_lo,
                                double gamma_hi) {
  std::size_t star = 0;
  int best = -1;
  for (std::size_t k = 0; k < s.classes.size(); ++k) {
    const int lk = demand_level(s, k);
    if (lk > best) {
      best = lk;
      star = k;
    }
  }
  auto condition = [&](double gamma) {
    CellScenario probe = s;
    probe.radio.pathloss_exponent = gamma;
    const std::vector<double> beta = snr_thresholds(probe, star);
    const double b = beta[beta.size() - 2];  // beta_{s, l_s - 1}
    if (std::isinf(b)) return true;          // radius 0, trivially inside
    return std::pow(b, -1.0 / gamma) <= probe.radius_m;
  };
  if (condition(gamma_lo) || !condition(gamma_hi)) {
    throw BracketError(
        "critical_exponent: condition does not switch over the bracket");
  }
  double lo = gamma_lo;
  double hi = gamma_hi;
  for (int i = 0; i < 200 && (hi - lo) > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (condition(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace celldim
