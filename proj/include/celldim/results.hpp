#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace celldim {

enum class Method {
  exact,
  gaussian,
  edgeworth1,
  edgeworth2,
  concentration,
  montecarlo,
};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::gaussian: return "gaussian";
    case Method::edgeworth1: return "edgeworth1";
    case Method::edgeworth2: return "edgeworth2";
    case Method::concentration: return "concentration";
    case Method::montecarlo: return "montecarlo";
  }
  return "?";
}

// A loss probability with its certified enclosure [lower, upper].
struct LossEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  Method method = Method::exact;
  bool certified = true;
};

// Outcome of a dimensioning solver: the minimal (or guaranteed) subchannel
// count, the solved abscissa (alpha for the tail equations, the additive
// margin a for the concentration rule) and the error term that was applied.
struct DimensionResult {
  std::int64_t n_avail = 1;
  Method method = Method::exact;
  bool guarantee = false;
  std::optional<double> alpha_or_margin;
  std::optional<double> error_term_value;
};

}  // namespace celldim
