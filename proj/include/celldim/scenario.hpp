#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "celldim/errors.hpp"

namespace celldim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Downlink radio description of one cell. Powers in watts, frequency in Hz,
// distances in meters, subchannel bandwidth in kHz, SINR threshold linear.
struct RadioParams {
  double tx_power_w = 1.0;                 // P, per subchannel
  double noise_w = 1e-12;                  // I, noise plus interference
  double carrier_frequency_hz = 0.0;       // f (unused when override set)
  double reference_distance_m = 10.0;      // d_ref
  double pathloss_exponent = 3.5;          // gamma
  double subchannel_bandwidth_khz = 250.0; // W
  double min_sinr_linear = 1.0;            // beta_min
  // When set, used verbatim as K_gamma so toy scenarios need no carrier
  // frequency.
  std::optional<double> attenuation_constant;
};

// Log-normal shadowing: G = 10^(S/10), S ~ N(mean_db, variance_db2).
struct ShadowingParams {
  double mean_db = 0.0;      // kappa
  double variance_db2 = 0.0; // v^2
};

struct ServiceClass {
  double rate_kbps = 0.0;   // C_k
  double probability = 0.0; // tau_k
};

struct CellScenario {
  double radius_m = 300.0;           // R
  double intensity_per_m2 = 0.0;     // lambda, active users per m^2
  int max_subchannels_per_user = 1;  // N_max
  std::vector<ServiceClass> classes;
  RadioParams radio;
  ShadowingParams shadowing;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every scenario invariant and reports all violations; downstream
// modules assume a scenario that validates cleanly.
inline ValidationReport validate(const CellScenario& s) {
  ValidationReport report;
  auto fail = [&report](const std::string& msg) {
    report.violations.push_back(msg);
  };
  const RadioParams& r = s.radio;
  if (!(r.tx_power_w > 0.0)) fail("tx_power_w must be positive");
  if (!(r.noise_w > 0.0)) fail("noise_w must be positive");
  if (!r.attenuation_constant && !(r.carrier_frequency_hz > 0.0)) {
    fail("carrier_frequency_hz must be positive (or set attenuation_constant)");
  }
  if (r.attenuation_constant && !(*r.attenuation_constant > 0.0)) {
    fail("attenuation_constant must be positive");
  }
  if (!(r.reference_distance_m > 0.0)) {
    fail("reference_distance_m must be positive");
  }
  if (!(r.pathloss_exponent > 2.0)) fail("pathloss_exponent must exceed 2");
  if (!(r.subchannel_bandwidth_khz > 0.0)) {
    fail("subchannel_bandwidth_khz must be positive");
  }
  if (!(r.min_sinr_linear > 0.0)) fail("min_sinr_linear must be positive");
  if (!(s.shadowing.variance_db2 >= 0.0)) {
    fail("shadowing variance_db2 must be non-negative");
  }
  if (!(s.radius_m > r.reference_distance_m)) {
    fail("radius_m must exceed reference_distance_m");
  }
  if (!(s.intensity_per_m2 >= 0.0)) {
    fail("intensity_per_m2 must be non-negative");
  }
  if (s.max_subchannels_per_user < 1) {
    fail("max_subchannels_per_user must be at least 1");
  }
  if (s.classes.empty()) {
    fail("class list must be non-empty");
  } else {
    double sum = 0.0;
    for (std::size_t k = 0; k < s.classes.size(); ++k) {
      const ServiceClass& c = s.classes[k];
      if (!(c.rate_kbps > 0.0)) {
        fail("class " + std::to_string(k) + ": rate_kbps must be positive");
      }
      if (!(c.probability >= 0.0 && c.probability <= 1.0)) {
        fail("class " + std::to_string(k) + ": probability must be in [0, 1]");
      }
      sum += c.probability;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "class probabilities sum to " << sum << ", expected 1";
      fail(os.str());
    }
  }
  return report;
}

// K_gamma = (c / (4 pi f d_ref))^2 * d_ref^gamma, the attenuation at the
// reference distance; the explicit override is returned unchanged.
inline double attenuation_constant(const RadioParams& r) {
  if (r.attenuation_constant) return *r.attenuation_constant;
  const double a = kSpeedOfLight /
                   (4.0 * std::numbers::pi * r.carrier_frequency_hz *
                    r.reference_distance_m);
  return a * a * std::pow(r.reference_distance_m, r.pathloss_exponent);
}

// P_gamma = P * K_gamma, the received-power scale of the path-loss law.
inline double effective_power(const RadioParams& r) {
  return r.tx_power_w * attenuation_constant(r);
}

// E[G^(2/gamma)] for log-normal shadowing:
// 10^((kappa + v^2 ln10 / (10 gamma)) / (5 gamma)).
inline double shadowing_fractional_moment(const ShadowingParams& sh,
                                          double gamma) {
  if (!(gamma > 0.0)) {
    throw DomainError("shadowing_fractional_moment: gamma must be positive");
  }
  const double ln10 = std::numbers::ln10;
  const double exponent =
      (sh.mean_db + sh.variance_db2 * ln10 / (10.0 * gamma)) / (5.0 * gamma);
  return std::exp(ln10 * exponent);
}

}  // namespace celldim
