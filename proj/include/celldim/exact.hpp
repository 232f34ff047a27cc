#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "celldim/errors.hpp"
#include "celldim/moments.hpp"
#include "celldim/numeric.hpp"
#include "celldim/results.hpp"
#include "celldim/scenario.hpp"
#include "celldim/thresholds.hpp"

namespace celldim {

// Total demand is distributed as sum_l l * M_l with independent Poisson
// counts M_l; rates[l-1] = m_l = sum_{k in K_l} lambda tau_k zeta_{k,l}.
struct CompoundPoissonSpec {
  std::vector<double> rates;
  double truncation_epsilon = 1e-10;
};

inline CompoundPoissonSpec merge_rates(const ThresholdTable& table,
                                       const std::vector<ServiceClass>& classes,
                                       double lambda,
                                       double truncation_epsilon = 1e-10) {
  if (!(lambda >= 0.0)) throw DomainError("merge_rates: lambda must be >= 0");
  if (!(truncation_epsilon > 0.0 && truncation_epsilon < 1.0)) {
    throw DomainError("merge_rates: truncation_epsilon must be in (0, 1)");
  }
  CompoundPoissonSpec spec;
  spec.truncation_epsilon = truncation_epsilon;
  spec.rates.assign(static_cast<std::size_t>(std::max(table.max_level, 1)),
                    0.0);
  for (std::size_t k = 0; k < table.classes.size(); ++k) {
    const ClassThresholds& ct = table.classes[k];
    for (int l = 1; l <= ct.max_level; ++l) {
      spec.rates[static_cast<std::size_t>(l) - 1] +=
          lambda * classes.at(k).probability *
          ct.zeta[static_cast<std::size_t>(l) - 1];
    }
  }
  return spec;
}

// Smallest integer q > theta whose large-deviation bound
// P(Poisson(theta) >= q) <= exp(-theta (a ln a + 1 - a)), a = q/theta,
// drops to eps. The exponent is increasing in q beyond the mean, so a
// doubling search plus bisection on integers suffices.
inline std::int64_t truncation_point(double theta, double eps) {
  if (!(theta >= 0.0)) throw DomainError("truncation_point: theta must be >= 0");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("truncation_point: eps must be in (0, 1)");
  }
  if (theta == 0.0) return 0;
  auto bound = [theta](std::int64_t q) {
    const double a = static_cast<double>(q) / theta;
    return std::exp(-theta * (a * std::log(a) + 1.0 - a));
  };
  std::int64_t lo = static_cast<std::int64_t>(std::floor(theta)) + 1;
  if (bound(lo) <= eps) return lo;
  std::int64_t hi = lo;
  while (bound(hi) > eps) {
    lo = hi;
    hi = hi * 2 + 1;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (bound(mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Dense pmf of total demand over [0, N_cap] with a certified bound on the
// probability mass discarded by per-component truncation.
struct DemandPmf {
  std::vector<double> probabilities;  // probabilities[n] = P(N_tot = n)
  double tail_bound = 0.0;

  std::int64_t support_cap() const {
    return static_cast<std::int64_t>(probabilities.size()) - 1;
  }
};

// Builds the pmf by discrete convolution of the per-level lattice pmfs
// p_l(w) = e^{-m_l} m_l^q / q! at w = q l. Each component keeps 0..q_l with
// q_l = truncation_point(m_l, eps/L); the union bound over the exactly
// computed per-component leftovers certifies tail_bound.
inline DemandPmf demand_pmf(const CompoundPoissonSpec& spec,
                            std::int64_t max_entries = 100'000'000) {
  const std::size_t num_levels = spec.rates.size();
  if (num_levels == 0) throw DomainError("demand_pmf: empty rate vector");
  struct Component {
    std::int64_t weight;
    std::vector<double> probs;
  };
  std::vector<Component> components;
  double tail = 0.0;
  std::int64_t cap = 0;
  const double per_component_eps =
      spec.truncation_epsilon / static_cast<double>(num_levels);
  for (std::size_t i = 0; i < num_levels; ++i) {
    const double m = spec.rates[i];
    if (!(m >= 0.0)) throw DomainError("demand_pmf: negative rate");
    if (m == 0.0) continue;
    const std::int64_t l = static_cast<std::int64_t>(i) + 1;
    const std::int64_t q = truncation_point(m, per_component_eps);
    Component comp;
    comp.weight = l;
    comp.probs.resize(static_cast<std::size_t>(q) + 1);
    const double log_m = std::log(m);
    KahanSum kept;
    for (std::int64_t j = 0; j <= q; ++j) {
      const double lp = -m + static_cast<double>(j) * log_m -
                        std::lgamma(static_cast<double>(j) + 1.0);
      const double p = std::exp(lp);
      comp.probs[static_cast<std::size_t>(j)] = p;
      kept.add(p);
    }
    tail += std::max(0.0, 1.0 - kept.value());
    cap += l * q;
    if (cap + 1 > max_entries) {
      throw CapacityError("demand_pmf: support exceeds the memory budget");
    }
    components.push_back(std::move(comp));
  }
  // Convolve smallest supports first.
  std::sort(components.begin(), components.end(),
            [](const Component& a, const Component& b) {
              return a.weight * static_cast<std::int64_t>(a.probs.size()) <
                     b.weight * static_cast<std::int64_t>(b.probs.size());
            });
  std::vector<double> pmf{1.0};
  for (const Component& comp : components) {
    const std::size_t stride = static_cast<std::size_t>(comp.weight);
    std::vector<double> next(pmf.size() + stride * (comp.probs.size() - 1),
                             0.0);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      const double base = pmf[i];
      if (base == 0.0) continue;
      for (std::size_t j = 0; j < comp.probs.size(); ++j) {
        next[i + j * stride] += base * comp.probs[j];
      }
    }
    pmf = std::move(next);
  }
  DemandPmf out;
  out.probabilities = std::move(pmf);
  out.tail_bound = tail;
  return out;
}

// P(N_tot >= n_avail) as the certified interval [point, point + tail_bound].
inline LossEstimate exact_loss(const DemandPmf& pmf, std::int64_t n_avail) {
  LossEstimate est;
  est.method = Method::exact;
  est.certified = true;
  if (n_avail <= 0) {
    est.value = est.lower = est.upper = 1.0;
    return est;
  }
  if (n_avail > pmf.support_cap()) {
    est.value = 0.0;
    est.lower = 0.0;
    est.upper = std::min(1.0, pmf.tail_bound);
    return est;
  }
  KahanSum sum;
  for (std::size_t n = pmf.probabilities.size();
       n > static_cast<std::size_t>(n_avail);) {
    --n;
    sum.add(pmf.probabilities[n]);
  }
  est.value = std::min(1.0, sum.value());
  est.lower = est.value;
  est.upper = std::min(1.0, est.value + pmf.tail_bound);
  return est;
}

// Minimal N with exact_loss(N) + tail_bound <= epsilon, by inspection of
// the suffix sums. Requires the truncation budget to be well below the
// target so the certified interval cannot blur the decision.
inline DimensionResult exact_dimension(const CompoundPoissonSpec& spec,
                                       double epsilon,
                                       std::int64_t max_entries = 100'000'000) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("exact_dimension: epsilon must be in (0, 1)");
  }
  if (!(spec.truncation_epsilon <= epsilon / 100.0)) {
    throw DomainError(
        "exact_dimension: truncation_epsilon must be <= epsilon/100");
  }
  const DemandPmf pmf = demand_pmf(spec, max_entries);
  // suffix[n] = P(N_tot >= n)
  std::vector<double> suffix(pmf.probabilities.size() + 1, 0.0);
  KahanSum sum;
  for (std::size_t n = pmf.probabilities.size(); n > 0;) {
    --n;
    sum.add(pmf.probabilities[n]);
    suffix[n] = sum.value();
  }
  std::int64_t lo = 1;
  std::int64_t hi = pmf.support_cap() + 1;  // always satisfies the target
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const double loss = suffix[static_cast<std::size_t>(mid)];
    if (loss + pmf.tail_bound <= epsilon) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  DimensionResult result;
  result.n_avail = lo;
  result.method = Method::exact;
  result.guarantee = true;
  result.error_term_value = pmf.tail_bound;
  return result;
}

}  // namespace celldim
