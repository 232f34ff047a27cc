#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "celldim/errors.hpp"
#include "celldim/scenario.hpp"
#include "celldim/thresholds.hpp"

namespace celldim {

// Raw moments M_p = Int f^p dnu of the per-user demand functional,
// p = 1..5 (one past what the bounds need, for remainder diagnostics).
// The measure nu carries no intensity: means and variances are lambda*M_p.
struct MomentSet {
  std::array<double, 5> raw{};  // raw[p-1] = M_p

  double m(int p) const { return raw.at(static_cast<std::size_t>(p) - 1); }
};

// M_p = sum_k tau_k sum_l l^p zeta_{k,l}
inline double raw_moment(const ThresholdTable& table,
                         const std::vector<ServiceClass>& classes, int p) {
  if (p < 1) throw DomainError("raw_moment: p must be >= 1");
  double total = 0.0;
  for (std::size_t k = 0; k < table.classes.size(); ++k) {
    const ClassThresholds& ct = table.classes[k];
    double inner = 0.0;
    for (int l = 1; l <= ct.max_level; ++l) {
      inner += std::pow(static_cast<double>(l), p) *
               ct.zeta[static_cast<std::size_t>(l) - 1];
    }
    total += classes.at(k).probability * inner;
  }
  return total;
}

inline MomentSet compute_moments(const ThresholdTable& table,
                                 const std::vector<ServiceClass>& classes) {
  MomentSet ms;
  for (int p = 1; p <= 5; ++p) {
    ms.raw[static_cast<std::size_t>(p) - 1] = raw_moment(table, classes, p);
  }
  return ms;
}

inline double mean_demand(const MomentSet& ms, double lambda) {
  return lambda * ms.m(1);
}

// rho = lambda * M_1, mean subchannels demanded per slot.
inline double load(const MomentSet& ms, double lambda) {
  return lambda * ms.m(1);
}

inline double sigma(const MomentSet& ms, double lambda) {
  return std::sqrt(lambda * ms.m(2));
}

// m(p, lambda) = M_p * M_2^(-p/2) * lambda^(1-p/2)
inline double normalized_moment(const MomentSet& ms, int p, double lambda) {
  if (!(ms.m(2) > 0.0)) {
    throw DegenerateFunctional("normalized_moment: M_2 must be positive");
  }
  if (!(lambda > 0.0)) {
    throw DomainError("normalized_moment: lambda must be positive");
  }
  return ms.m(p) * std::pow(ms.m(2), -0.5 * p) *
         std::pow(lambda, 1.0 - 0.5 * p);
}

// N_sigma = (n_avail - lambda M_1) / sigma
inline double standardized_threshold(const MomentSet& ms, double lambda,
                                     double n_avail) {
  const double s = sigma(ms, lambda);
  if (!(s > 0.0)) {
    throw DegenerateFunctional("standardized_threshold: sigma is zero");
  }
  return (n_avail - lambda * ms.m(1)) / s;
}

}  // namespace celldim
