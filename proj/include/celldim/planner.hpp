#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "celldim/approx.hpp"
#include "celldim/concentration.hpp"
#include "celldim/errors.hpp"
#include "celldim/exact.hpp"
#include "celldim/moments.hpp"
#include "celldim/results.hpp"
#include "celldim/scenario.hpp"
#include "celldim/thresholds.hpp"

namespace celldim {

struct PlanOptions {
  double negligibility_factor = 10.0;
  bool no_exact = false;
  bool paper_literal = false;
  Edgeworth2Variant edgeworth2_variant = Edgeworth2Variant::derivation;
  std::int64_t max_pmf_entries = 100'000'000;
};

// Per-method outcome inside a plan; `error` is set when the solver refused
// (infeasible equation, capacity, ...) and the result is absent.
struct MethodOutcome {
  std::optional<DimensionResult> result;
  std::string error;
};

struct PlanReport {
  double epsilon = 0.0;
  double negligibility_factor = 10.0;
  double load = 0.0;
  std::optional<double> gamma_c;
  ErrorTerms error_terms;
  MethodOutcome exact;
  MethodOutcome gaussian;
  MethodOutcome edgeworth1;
  MethodOutcome edgeworth2;
  MethodOutcome concentration;
  Method selected = Method::concentration;

  const MethodOutcome& outcome(Method m) const {
    switch (m) {
      case Method::exact: return exact;
      case Method::gaussian: return gaussian;
      case Method::edgeworth1: return edgeworth1;
      case Method::edgeworth2: return edgeworth2;
      default: return concentration;
    }
  }
};

namespace detail {

template <class F>
MethodOutcome try_method(F&& f) {
  MethodOutcome out;
  try {
    out.result = f();
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace detail

// The dimensioning procedure: evaluate every method, pick the cheapest
// expansion whose certified error term is negligible against the target
// (error <= epsilon / negligibility_factor), falling back to the
// concentration rule; the exact distribution is always computed as ground
// truth unless disabled.
inline PlanReport plan(const CellScenario& scenario, double epsilon,
                       const PlanOptions& options = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("plan: epsilon must be in (0, 1)");
  }
  const ValidationReport vr = validate(scenario);
  if (!vr.ok()) {
    throw ValidationError("plan: invalid scenario: " + vr.violations.front());
  }
  const ThresholdTable table = build_threshold_table(scenario);
  const MomentSet ms = compute_moments(table, scenario.classes);
  const double lambda = scenario.intensity_per_m2;

  PlanReport report;
  report.epsilon = epsilon;
  report.negligibility_factor = options.negligibility_factor;
  report.load = load(ms, lambda);
  report.error_terms = compute_error_terms(ms, lambda);
  try {
    report.gamma_c = critical_exponent(scenario, 2.01, 16.0);
  } catch (const Error&) {
    report.gamma_c.reset();
  }

  if (!options.no_exact) {
    report.exact = detail::try_method([&] {
      const CompoundPoissonSpec spec =
          merge_rates(table, scenario.classes, lambda, epsilon / 100.0);
      return exact_dimension(spec, epsilon, options.max_pmf_entries);
    });
  }
  report.gaussian = detail::try_method([&] {
    try {
      return dimension_gaussian(ms, lambda, epsilon, /*certified=*/true);
    } catch (const InfeasibleError&) {
      return dimension_gaussian(ms, lambda, epsilon, /*certified=*/false);
    }
  });
  report.edgeworth1 =
      detail::try_method([&] { return dimension_edgeworth1(ms, lambda, epsilon); });
  report.edgeworth2 = detail::try_method([&] {
    return dimension_edgeworth2(ms, lambda, epsilon,
                                options.edgeworth2_variant);
  });
  report.concentration = detail::try_method([&] {
    return dimension_concentration(
        concentration_input(ms, lambda, table.max_level), epsilon);
  });

  const double threshold = epsilon / options.negligibility_factor;
  const bool e2_certifiable =
      options.edgeworth2_variant == Edgeworth2Variant::derivation;
  auto usable = [](const MethodOutcome& o) {
    return o.result && o.result->guarantee;
  };
  if (report.error_terms.stein_error <= threshold && usable(report.gaussian)) {
    report.selected = Method::gaussian;
  } else if (report.error_terms.edgeworth1_error <= threshold &&
             usable(report.edgeworth1)) {
    report.selected = Method::edgeworth1;
  } else if (report.error_terms.edgeworth2_error <= threshold &&
             e2_certifiable && usable(report.edgeworth2)) {
    report.selected = Method::edgeworth2;
  } else {
    report.selected = Method::concentration;
  }
  return report;
}

enum class SweepParameter { gamma, lambda, epsilon };

inline std::string_view sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::gamma: return "gamma";
    case SweepParameter::lambda: return "lambda";
    case SweepParameter::epsilon: return "epsilon";
  }
  return "?";
}

struct SweepRow {
  double parameter = 0.0;
  double load = 0.0;
  std::optional<double> loss_exact;
  double gauss_lo = 0.0, gauss_hi = 1.0;
  double edge1_lo = 0.0, edge1_hi = 1.0;
  double edge2_up = 1.0;
  double conc_up = 1.0;
  std::optional<std::int64_t> n_exact;
  std::optional<std::int64_t> n_gauss;
  std::optional<std::int64_t> n_edge1;
  std::optional<std::int64_t> n_edge2;
  std::optional<std::int64_t> n_conc;
  std::string error;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::gamma;
  std::int64_t loss_n_avail = 0;  // capacity the loss columns refer to
  std::vector<SweepRow> rows;
};

// One dimensioning row per grid point. Loss columns are evaluated at a
// fixed capacity: the caller's n_avail if given, otherwise the base
// scenario's own dimension at epsilon. Per-row failures are recorded in
// the row and the sweep continues.
inline SweepResult sweep(const CellScenario& base, SweepParameter parameter,
                         const std::vector<double>& grid, double epsilon,
                         std::optional<std::int64_t> loss_n_avail = {},
                         const PlanOptions& options = {}) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError("sweep: grid must be strictly increasing");
    }
  }
  SweepResult result;
  result.parameter = parameter;
  if (loss_n_avail) {
    result.loss_n_avail = *loss_n_avail;
  } else {
    // Fixed-capacity reference for the loss columns (Figure-2 style).
    const ThresholdTable table = build_threshold_table(base);
    const MomentSet ms = compute_moments(table, base.classes);
    if (options.no_exact) {
      result.loss_n_avail =
          dimension_concentration(
              concentration_input(ms, base.intensity_per_m2, table.max_level),
              epsilon)
              .n_avail;
    } else {
      result.loss_n_avail =
          exact_dimension(merge_rates(table, base.classes,
                                      base.intensity_per_m2, epsilon / 100.0),
                          epsilon, options.max_pmf_entries)
              .n_avail;
    }
  }

  for (const double value : grid) {
    SweepRow row;
    row.parameter = value;
    try {
      CellScenario scenario = base;
      double eps_row = epsilon;
      switch (parameter) {
        case SweepParameter::gamma:
          scenario.radio.pathloss_exponent = value;
          break;
        case SweepParameter::lambda:
          scenario.intensity_per_m2 = value;
          break;
        case SweepParameter::epsilon:
          eps_row = value;
          break;
      }
      const ThresholdTable table = build_threshold_table(scenario);
      const MomentSet ms = compute_moments(table, scenario.classes);
      const double lambda = scenario.intensity_per_m2;
      row.load = load(ms, lambda);

      const double n_loss = static_cast<double>(result.loss_n_avail);
      const BoundedLoss g =
          gaussian_bounds(ms, lambda, n_loss, options.paper_literal);
      row.gauss_lo = g.lower;
      row.gauss_hi = g.upper;
      const BoundedLoss e1 = edgeworth1_bounds(ms, lambda, n_loss);
      row.edge1_lo = e1.lower;
      row.edge1_hi = e1.upper;
      row.edge2_up =
          edgeworth2_upper(ms, lambda, n_loss,
                           options.paper_literal
                               ? Edgeworth2Variant::paper_literal
                               : options.edgeworth2_variant)
              .upper;
      const ConcentrationInput ci =
          concentration_input(ms, lambda, table.max_level);
      row.conc_up = concentration_loss_bound(ci, n_loss);

      CompoundPoissonSpec spec;
      if (!options.no_exact) {
        spec = merge_rates(table, scenario.classes, lambda, eps_row / 100.0);
        const DemandPmf pmf = demand_pmf(spec, options.max_pmf_entries);
        row.loss_exact = exact_loss(pmf, result.loss_n_avail).value;
        row.n_exact =
            exact_dimension(spec, eps_row, options.max_pmf_entries).n_avail;
      }
      try {
        row.n_gauss =
            dimension_gaussian(ms, lambda, eps_row, /*certified=*/true).n_avail;
      } catch (const InfeasibleError&) {
        row.n_gauss =
            dimension_gaussian(ms, lambda, eps_row, /*certified=*/false)
                .n_avail;
      }
      row.n_edge1 = dimension_edgeworth1(ms, lambda, eps_row).n_avail;
      row.n_edge2 =
          dimension_edgeworth2(ms, lambda, eps_row, options.edgeworth2_variant)
              .n_avail;
      row.n_conc = dimension_concentration(ci, eps_row).n_avail;
    } catch (const Error& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace celldim
