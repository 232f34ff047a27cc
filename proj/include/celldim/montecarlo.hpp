#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "celldim/errors.hpp"
#include "celldim/normal_sf.hpp"
#include "celldim/results.hpp"
#include "celldim/scenario.hpp"

namespace celldim {

// Counter-based generator: output j of stream `key` is the SplitMix64
// finalizer applied to key + j * golden gamma. Streams never share state,
// so worker substreams can run in any order or in parallel and still
// reproduce bit-identically.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(key_ + counter_);
  }

  // Uniform on the open interval (0, 1): 53 mantissa bits, half-ulp offset.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Substream key for worker w under a master seed.
  static std::uint64_t worker_key(std::uint64_t master_seed,
                                  std::uint32_t worker) {
    return mix(mix(master_seed) ^
               (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(worker) + 1)));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Poisson sampling by sequential inversion; one uniform per draw. Large
// means are split in half recursively to keep e^{-mean} representable.
inline std::int64_t sample_poisson(CounterRng& rng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 500.0) {
    const double half = 0.5 * mean;
    return sample_poisson(rng, half) + sample_poisson(rng, mean - half);
  }
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  while (u > cdf && k < 2000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

struct SimConfig {
  std::int64_t trials = 100000;
  std::uint64_t master_seed = 1;
  std::uint32_t workers = 1;
  double ci_level = 0.99;
};

struct SimResult {
  double loss_estimate = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
  double sample_mean_demand = 0.0;
  double sample_var_demand = 0.0;
  double outage_fraction = 0.0;
  std::int64_t trials = 0;
  std::int64_t loss_count = 0;
};

namespace detail {

// Static per-scenario quantities hoisted out of the sampling loop.
struct SamplerContext {
  double p_gamma = 0.0;
  double noise = 0.0;
  double beta_min = 0.0;
  double gamma = 0.0;
  double radius = 0.0;
  double users_mean = 0.0;
  double kappa = 0.0;
  double shadow_std_db = 0.0;
  int n_max = 1;
  std::vector<double> class_cum;   // cumulative tau
  std::vector<double> class_cw;    // C_k / W

  explicit SamplerContext(const CellScenario& s) {
    p_gamma = effective_power(s.radio);
    noise = s.radio.noise_w;
    beta_min = s.radio.min_sinr_linear;
    gamma = s.radio.pathloss_exponent;
    radius = s.radius_m;
    users_mean = s.intensity_per_m2 * std::numbers::pi * s.radius_m * s.radius_m;
    kappa = s.shadowing.mean_db;
    shadow_std_db = std::sqrt(s.shadowing.variance_db2);
    n_max = s.max_subchannels_per_user;
    double cum = 0.0;
    for (const ServiceClass& c : s.classes) {
      cum += c.probability;
      class_cum.push_back(cum);
      class_cw.push_back(c.rate_kbps / s.radio.subchannel_bandwidth_khz);
    }
    class_cum.back() = 1.0;
  }
};

inline int sample_demand(const SamplerContext& ctx, CounterRng& rng) {
  // Radius by inverse transform; the angle never enters the demand.
  const double r = ctx.radius * std::sqrt(rng.uniform());
  const double uc = rng.uniform();
  std::size_t k = 0;
  while (k + 1 < ctx.class_cum.size() && uc > ctx.class_cum[k]) ++k;
  double shadow_db = ctx.kappa;
  if (ctx.shadow_std_db > 0.0) {
    shadow_db += ctx.shadow_std_db * gauss_quantile(rng.uniform());
  }
  const double gain = std::exp(std::numbers::ln10 * shadow_db / 10.0);
  const double sinr =
      ctx.p_gamma * gain * std::pow(r, -ctx.gamma) / ctx.noise;
  if (sinr < ctx.beta_min) return 0;
  const double need = std::ceil(ctx.class_cw[k] / std::log2(1.0 + sinr));
  return static_cast<int>(
      std::min<double>(ctx.n_max, std::max(1.0, need)));
}

struct WorkerTally {
  std::int64_t trials = 0;
  std::int64_t losses = 0;
  double demand_sum = 0.0;
  double demand_sq_sum = 0.0;
  std::int64_t users = 0;
  std::int64_t outages = 0;
};

inline WorkerTally run_worker(const SamplerContext& ctx, std::int64_t trials,
                              std::uint64_t key, std::int64_t n_avail) {
  CounterRng rng(key);
  WorkerTally tally;
  tally.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::int64_t users = sample_poisson(rng, ctx.users_mean);
    std::int64_t demand = 0;
    for (std::int64_t u = 0; u < users; ++u) {
      const int d = sample_demand(ctx, rng);
      demand += d;
      if (d == 0) ++tally.outages;
    }
    tally.users += users;
    const double dd = static_cast<double>(demand);
    tally.demand_sum += dd;
    tally.demand_sq_sum += dd * dd;
    if (demand >= n_avail) ++tally.losses;
  }
  return tally;
}

// CELLDIM_THREADS caps how many workers run concurrently; the logical
// worker partition (and hence the estimate) is unaffected.
inline unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CELLDIM_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) cap = static_cast<unsigned>(parsed);
  }
  return cap;
}

}  // namespace detail

inline int sample_user_demand(const CellScenario& s, CounterRng& rng) {
  const detail::SamplerContext ctx(s);
  return detail::sample_demand(ctx, rng);
}

// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::int64_t successes,
                                                 std::int64_t trials,
                                                 double ci_level) {
  const double z = gauss_quantile(1.0 - 0.5 * (1.0 - ci_level));
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double centre = (p + 0.5 * z2n) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// Direct estimator of P(total demand >= n_avail) over the marked Poisson
// process. Deterministic for fixed (master_seed, workers, trials): trials
// are partitioned across counter-keyed substreams and merged in worker
// order, regardless of how many OS threads actually run.
inline SimResult estimate_loss(const CellScenario& s, std::int64_t n_avail,
                               const SimConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("estimate_loss: trials must be >= 1");
  if (cfg.workers < 1) throw DomainError("estimate_loss: workers must be >= 1");
  const detail::SamplerContext ctx(s);
  const std::uint32_t workers = cfg.workers;
  std::vector<detail::WorkerTally> tallies(workers);
  const std::int64_t base = cfg.trials / workers;
  const std::int64_t extra = cfg.trials % workers;

  const unsigned cap = std::min<unsigned>(detail::thread_cap(), workers);
  std::uint32_t next_worker = 0;
  while (next_worker < workers) {
    const std::uint32_t batch =
        std::min<std::uint32_t>(cap, workers - next_worker);
    std::vector<std::thread> pool;
    pool.reserve(batch);
    for (std::uint32_t i = 0; i < batch; ++i) {
      const std::uint32_t w = next_worker + i;
      const std::int64_t trials_w = base + (w < extra ? 1 : 0);
      pool.emplace_back([&tallies, &ctx, trials_w, w, n_avail, &cfg] {
        tallies[w] = detail::run_worker(
            ctx, trials_w, CounterRng::worker_key(cfg.master_seed, w), n_avail);
      });
    }
    for (std::thread& t : pool) t.join();
    next_worker += batch;
  }

  detail::WorkerTally total;
  for (const detail::WorkerTally& t : tallies) {
    total.trials += t.trials;
    total.losses += t.losses;
    total.demand_sum += t.demand_sum;
    total.demand_sq_sum += t.demand_sq_sum;
    total.users += t.users;
    total.outages += t.outages;
  }

  SimResult result;
  result.trials = total.trials;
  result.loss_count = total.losses;
  result.loss_estimate =
      static_cast<double>(total.losses) / static_cast<double>(total.trials);
  const auto ci = wilson_interval(total.losses, total.trials, cfg.ci_level);
  result.ci_lower = ci.first;
  result.ci_upper = ci.second;
  const double n = static_cast<double>(total.trials);
  result.sample_mean_demand = total.demand_sum / n;
  if (total.trials > 1) {
    result.sample_var_demand =
        (total.demand_sq_sum - total.demand_sum * total.demand_sum / n) /
        (n - 1.0);
  }
  result.outage_fraction =
      total.users > 0
          ? static_cast<double>(total.outages) / static_cast<double>(total.users)
          : 0.0;
  return result;
}

}  // namespace celldim
