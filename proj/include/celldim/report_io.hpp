#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "celldim/exact.hpp"
#include "celldim/planner.hpp"
#include "celldim/results.hpp"

namespace celldim {

namespace detail {

// Locale-independent fixed formatting; snprintf with %.*g never emits a
// locale decimal comma under the "C" numeric conventions we never change.
inline std::string format_double(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

inline nlohmann::json to_json(const DimensionResult& r) {
  nlohmann::json j = {
      {"n_avail", r.n_avail},
      {"method", std::string(method_name(r.method))},
      {"guarantee", r.guarantee},
  };
  if (r.alpha_or_margin) j["alpha_or_margin"] = *r.alpha_or_margin;
  if (r.error_term_value) j["error_term_value"] = *r.error_term_value;
  return j;
}

inline nlohmann::json to_json(const MethodOutcome& o) {
  if (o.result) return to_json(*o.result);
  return nlohmann::json{{"error", o.error}};
}

}  // namespace detail

inline nlohmann::json plan_report_to_json(const PlanReport& r) {
  nlohmann::json j = {
      {"epsilon", r.epsilon},
      {"negligibility_factor", r.negligibility_factor},
      {"load", r.load},
      {"error_terms",
       {{"stein", r.error_terms.stein_error},
        {"edgeworth1", r.error_terms.edgeworth1_error},
        {"edgeworth2", r.error_terms.edgeworth2_error}}},
      {"methods",
       {{"exact", detail::to_json(r.exact)},
        {"gaussian", detail::to_json(r.gaussian)},
        {"edgeworth1", detail::to_json(r.edgeworth1)},
        {"edgeworth2", detail::to_json(r.edgeworth2)},
        {"concentration", detail::to_json(r.concentration)}}},
      {"selected", std::string(method_name(r.selected))},
  };
  if (r.gamma_c) j["gamma_c"] = *r.gamma_c;
  return j;
}

// CSV layout of a sweep, one row per grid point; header matches the CLI
// contract: <param>,load,loss_exact,gauss_lo,gauss_hi,edge1_lo,edge1_hi,
// edge2_up,conc_up,n_exact,n_gauss,n_edge1,n_edge2,n_conc.
inline void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << sweep_parameter_name(sweep.parameter)
     << ",load,loss_exact,gauss_lo,gauss_hi,edge1_lo,edge1_hi,edge2_up,"
        "conc_up,n_exact,n_gauss,n_edge1,n_edge2,n_conc\n";
  auto num = [](const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const SweepRow& row : sweep.rows) {
    if (!row.error.empty()) {
      os << detail::format_double(row.parameter) << ",,,,,,,,,,,,,\n";
      continue;
    }
    os << detail::format_double(row.parameter) << ','
       << detail::format_double(row.load) << ','
       << (row.loss_exact ? detail::format_double(*row.loss_exact)
                          : std::string())
       << ',' << detail::format_double(row.gauss_lo) << ','
       << detail::format_double(row.gauss_hi) << ','
       << detail::format_double(row.edge1_lo) << ','
       << detail::format_double(row.edge1_hi) << ','
       << detail::format_double(row.edge2_up) << ','
       << detail::format_double(row.conc_up) << ',' << num(row.n_exact) << ','
       << num(row.n_gauss) << ',' << num(row.n_edge1) << ','
       << num(row.n_edge2) << ',' << num(row.n_conc) << '\n';
  }
}

// Two-column pmf dump with the certified discarded mass in the header.
inline void write_pmf_csv(std::ostream& os, const DemandPmf& pmf) {
  os << "# tail_bound=" << detail::format_double(pmf.tail_bound, 17) << '\n';
  os << "n,probability\n";
  for (std::size_t n = 0; n < pmf.probabilities.size(); ++n) {
    os << n << ',' << detail::format_double(pmf.probabilities[n], 17) << '\n';
  }
}

}  // namespace celldim
