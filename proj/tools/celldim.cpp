// celldim: OFDMA cell dimensioning front end.
//
// Subcommands:
//   loss        exact loss probability plus every bound at one capacity
//   dimension   full dimensioning plan for a target loss probability
//   sweep       per-method dimensioning along a gamma/lambda/epsilon grid
//   validate    Monte Carlo cross-check of the exact method
//   dump-tables threshold/coverage tables and moments as JSON
//
// Exit codes: 0 success, 2 scenario/validation error, 3 numeric
// infeasibility (capacity, bracket, quadrature, infeasible equation).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "celldim/approx.hpp"
#include "celldim/concentration.hpp"
#include "celldim/errors.hpp"
#include "celldim/exact.hpp"
#include "celldim/moments.hpp"
#include "celldim/montecarlo.hpp"
#include "celldim/planner.hpp"
#include "celldim/report_io.hpp"
#include "celldim/scenario.hpp"
#include "celldim/scenario_io.hpp"
#include "celldim/thresholds.hpp"

namespace {

using nlohmann::json;

celldim::CellScenario load_valid_scenario(const std::string& path) {
  celldim::CellScenario scenario = celldim::load_scenario(path);
  const celldim::ValidationReport report = celldim::validate(scenario);
  if (!report.ok()) {
    std::string msg = "invalid scenario:";
    for (const std::string& v : report.violations) msg += "\n  - " + v;
    throw celldim::ValidationError(msg);
  }
  return scenario;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw celldim::ValidationError("cannot open output file '" + out_path +
                                   "'");
  }
  out << j.dump(2) << '\n';
}

json bounded_loss_json(const celldim::BoundedLoss& b) {
  return json{{"lower", b.lower},
              {"upper", b.upper},
              {"certified", b.certified},
              {"clamped", b.clamped_lower || b.clamped_upper}};
}

int run_loss(const std::string& scenario_path, std::int64_t n_avail,
             bool paper_literal, const std::string& dump_pmf_path,
             const std::string& out_path) {
  const celldim::CellScenario scenario = load_valid_scenario(scenario_path);
  const celldim::ThresholdTable table = celldim::build_threshold_table(scenario);
  const celldim::MomentSet ms =
      celldim::compute_moments(table, scenario.classes);
  const double lambda = scenario.intensity_per_m2;
  const celldim::CompoundPoissonSpec spec =
      celldim::merge_rates(table, scenario.classes, lambda);
  const celldim::DemandPmf pmf = celldim::demand_pmf(spec);
  const celldim::LossEstimate exact = celldim::exact_loss(pmf, n_avail);

  if (!dump_pmf_path.empty()) {
    std::ofstream out(dump_pmf_path);
    if (!out) {
      throw celldim::ValidationError("cannot open pmf output '" +
                                     dump_pmf_path + "'");
    }
    celldim::write_pmf_csv(out, pmf);
  }

  const double n = static_cast<double>(n_avail);
  const celldim::BoundedLoss gauss =
      celldim::gaussian_bounds(ms, lambda, n, paper_literal);
  const celldim::BoundedLoss edge1 = celldim::edgeworth1_bounds(ms, lambda, n);
  const celldim::BoundedLoss edge2 = celldim::edgeworth2_upper(
      ms, lambda, n,
      paper_literal ? celldim::Edgeworth2Variant::paper_literal
                    : celldim::Edgeworth2Variant::derivation);
  const celldim::ConcentrationInput ci =
      celldim::concentration_input(ms, lambda, table.max_level);

  json j = {
      {"n_avail", n_avail},
      {"load", celldim::load(ms, lambda)},
      {"n_sigma", celldim::standardized_threshold(ms, lambda, n)},
      {"exact",
       {{"value", exact.value},
        {"lower", exact.lower},
        {"upper", exact.upper},
        {"tail_bound", pmf.tail_bound}}},
      {"gaussian", bounded_loss_json(gauss)},
      {"edgeworth1", bounded_loss_json(edge1)},
      {"edgeworth2_upper", edge2.upper},
      {"concentration_upper", celldim::concentration_loss_bound(ci, n)},
  };
  emit(j, out_path);
  return 0;
}

int run_dimension(const std::string& scenario_path, double epsilon,
                  const celldim::PlanOptions& options,
                  const std::string& out_path) {
  const celldim::CellScenario scenario = load_valid_scenario(scenario_path);
  const celldim::PlanReport report = celldim::plan(scenario, epsilon, options);
  emit(celldim::plan_report_to_json(report), out_path);
  return 0;
}

int run_sweep(const std::string& scenario_path, const std::string& param,
              double from, double to, int steps, double epsilon,
              std::optional<std::int64_t> n_avail,
              const celldim::PlanOptions& options,
              const std::string& out_path) {
  const celldim::CellScenario scenario = load_valid_scenario(scenario_path);
  celldim::SweepParameter parameter;
  if (param == "gamma") {
    parameter = celldim::SweepParameter::gamma;
  } else if (param == "lambda") {
    parameter = celldim::SweepParameter::lambda;
  } else if (param == "epsilon") {
    parameter = celldim::SweepParameter::epsilon;
  } else {
    throw celldim::ValidationError("--param must be gamma, lambda or epsilon");
  }
  if (steps < 1) throw celldim::ValidationError("--steps must be >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid.push_back(steps == 1 ? from
                              : from + (to - from) * static_cast<double>(i) /
                                           static_cast<double>(steps - 1));
  }
  const celldim::SweepResult result =
      celldim::sweep(scenario, parameter, grid, epsilon, n_avail, options);
  if (out_path.empty()) {
    celldim::write_sweep_csv(std::cout, result);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw celldim::ValidationError("cannot open output file '" + out_path +
                                     "'");
    }
    celldim::write_sweep_csv(out, result);
  }
  return 0;
}

int run_validate(const std::string& scenario_path,
                 std::optional<std::int64_t> n_avail,
                 const celldim::SimConfig& cfg, double epsilon,
                 const std::string& out_path) {
  const celldim::CellScenario scenario = load_valid_scenario(scenario_path);
  const celldim::ThresholdTable table = celldim::build_threshold_table(scenario);
  const double lambda = scenario.intensity_per_m2;
  const celldim::CompoundPoissonSpec spec =
      celldim::merge_rates(table, scenario.classes, lambda);
  const celldim::DemandPmf pmf = celldim::demand_pmf(spec);
  std::int64_t n = n_avail.value_or(0);
  if (!n_avail) {
    const celldim::CompoundPoissonSpec dim_spec = celldim::merge_rates(
        table, scenario.classes, lambda, epsilon / 100.0);
    n = celldim::exact_dimension(dim_spec, epsilon).n_avail;
  }
  const celldim::LossEstimate exact = celldim::exact_loss(pmf, n);
  const celldim::SimResult sim = celldim::estimate_loss(scenario, n, cfg);
  const bool agree =
      exact.value >= sim.ci_lower && exact.value <= sim.ci_upper;
  json j = {
      {"n_avail", n},
      {"trials", sim.trials},
      {"loss_estimate", sim.loss_estimate},
      {"ci", {sim.ci_lower, sim.ci_upper}},
      {"exact_value", exact.value},
      {"agree", agree},
      {"sample_mean_demand", sim.sample_mean_demand},
      {"sample_var_demand", sim.sample_var_demand},
      {"outage_fraction", sim.outage_fraction},
  };
  emit(j, out_path);
  return 0;
}

int run_dump_tables(const std::string& scenario_path, double quad_tol,
                    const std::string& out_path) {
  const celldim::CellScenario scenario = load_valid_scenario(scenario_path);
  const celldim::ThresholdTable table = celldim::build_threshold_table(scenario);
  const celldim::MomentSet ms =
      celldim::compute_moments(table, scenario.classes);
  const double lambda = scenario.intensity_per_m2;

  json classes = json::array();
  for (std::size_t k = 0; k < table.classes.size(); ++k) {
    const celldim::ClassThresholds& ct = table.classes[k];
    // beta_0 = +inf is implicit; JSON cannot carry it.
    std::vector<double> finite_beta(ct.beta.begin() + 1, ct.beta.end());
    const std::vector<double> zeta_exact = celldim::coverage_weights_quadrature(
        scenario, k, quad_tol * scenario.radius_m * scenario.radius_m);
    double gap = 0.0;
    for (std::size_t i = 0; i < ct.zeta.size(); ++i) {
      const double scale = std::max(std::abs(ct.zeta[i]), std::abs(zeta_exact[i]));
      if (scale > 0.0) {
        gap = std::max(gap, std::abs(ct.zeta[i] - zeta_exact[i]) / scale);
      }
    }
    classes.push_back({
        {"max_level", ct.max_level},
        {"snr_thresholds", finite_beta},
        {"coverage_weights", ct.zeta},
        {"coverage_weights_quadrature", zeta_exact},
        {"max_relative_gap", gap},
    });
  }
  const celldim::CompoundPoissonSpec spec =
      celldim::merge_rates(table, scenario.classes, lambda);
  json j = {
      {"attenuation_constant", celldim::attenuation_constant(scenario.radio)},
      {"effective_power", celldim::effective_power(scenario.radio)},
      {"shadow_moment", table.shadow_moment},
      {"max_level", table.max_level},
      {"classes", classes},
      {"merged_rates", spec.rates},
      {"moments",
       {{"M1", ms.m(1)},
        {"M2", ms.m(2)},
        {"M3", ms.m(3)},
        {"M4", ms.m(4)},
        {"M5", ms.m(5)},
        {"sigma", celldim::sigma(ms, lambda)},
        {"load", celldim::load(ms, lambda)},
        {"m3_lambda", celldim::normalized_moment(ms, 3, lambda)},
        {"m4_lambda", celldim::normalized_moment(ms, 4, lambda)}}},
  };
  try {
    j["gamma_c"] = celldim::critical_exponent(scenario, 2.01, 16.0);
  } catch (const celldim::Error&) {
  }
  emit(j, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDMA cell dimensioning: exact, Edgeworth and robust methods"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string dump_pmf_path;
  std::string param = "gamma";
  double epsilon = 1e-4;
  double from = 3.5, to = 4.4, quad_tol = 1e-9;
  int steps = 10;
  std::int64_t n_avail = 0;
  bool paper_literal = false;
  bool no_exact = false;
  double negligibility = 10.0;
  celldim::SimConfig sim_cfg;
  sim_cfg.trials = 1000000;

  CLI::App* loss = app.add_subcommand("loss", "Loss probability at a capacity");
  loss->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  loss->add_option("--navail", n_avail, "Available subchannels")->required();
  loss->add_flag("--paper-literal", paper_literal,
                 "Printed-text constants for the Gaussian/Edgeworth-2 bounds");
  loss->add_option("--dump-pmf", dump_pmf_path, "Write the exact pmf as CSV");
  loss->add_option("--out", out_path, "Write JSON here instead of stdout");

  CLI::App* dim = app.add_subcommand("dimension", "Dimension for a target");
  dim->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  dim->add_option("--epsilon", epsilon, "Target loss probability")->required();
  dim->add_flag("--paper-literal", paper_literal,
                "Printed-text constants/terms");
  dim->add_flag("--no-exact", no_exact, "Skip the exact ground-truth method");
  dim->add_option("--negligibility", negligibility,
                  "Error-term negligibility factor (default 10)");
  dim->add_option("--out", out_path, "Write JSON here instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep a parameter grid");
  sweep->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  sweep->add_option("--param", param, "gamma | lambda | epsilon");
  sweep->add_option("--from", from, "Grid start")->required();
  sweep->add_option("--to", to, "Grid end")->required();
  sweep->add_option("--steps", steps, "Grid point count")->required();
  sweep->add_option("--epsilon", epsilon, "Target loss probability");
  sweep->add_option("--navail", n_avail,
                    "Capacity for the loss columns (default: dimension of the "
                    "base scenario)");
  sweep->add_flag("--paper-literal", paper_literal,
                  "Printed-text constants/terms");
  sweep->add_flag("--no-exact", no_exact, "Skip exact columns");
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* val = app.add_subcommand("validate", "Monte Carlo cross-check");
  val->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  val->add_option("--navail", n_avail,
                  "Capacity (default: exact dimension at --epsilon)");
  val->add_option("--epsilon", epsilon, "Target used when --navail absent");
  val->add_option("--trials", sim_cfg.trials, "Monte Carlo trials");
  val->add_option("--seed", sim_cfg.master_seed, "Master seed");
  val->add_option("--workers", sim_cfg.workers, "Worker substreams");
  val->add_option("--ci", sim_cfg.ci_level, "Confidence level (default 0.99)");
  val->add_option("--out", out_path, "Write JSON here instead of stdout");

  CLI::App* dump = app.add_subcommand("dump-tables", "Threshold tables JSON");
  dump->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  dump->add_option("--quad-tol", quad_tol,
                   "Relative quadrature tolerance (default 1e-9)");
  dump->add_option("--out", out_path, "Write JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    celldim::PlanOptions options;
    options.negligibility_factor = negligibility;
    options.no_exact = no_exact;
    options.paper_literal = paper_literal;
    if (paper_literal) {
      options.edgeworth2_variant = celldim::Edgeworth2Variant::paper_literal;
    }
    if (loss->parsed()) {
      return run_loss(scenario_path, n_avail, paper_literal, dump_pmf_path,
                      out_path);
    }
    if (dim->parsed()) {
      return run_dimension(scenario_path, epsilon, options, out_path);
    }
    if (sweep->parsed()) {
      std::optional<std::int64_t> loss_n;
      if (sweep->count("--navail")) loss_n = n_avail;
      return run_sweep(scenario_path, param, from, to, steps, epsilon, loss_n,
                       options, out_path);
    }
    if (val->parsed()) {
      std::optional<std::int64_t> loss_n;
      if (val->count("--navail")) loss_n = n_avail;
      return run_validate(scenario_path, loss_n, sim_cfg, epsilon, out_path);
    }
    if (dump->parsed()) {
      return run_dump_tables(scenario_path, quad_tol, out_path);
    }
  } catch (const celldim::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const celldim::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const celldim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
