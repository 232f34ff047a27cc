#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "celldim/scenario_io.hpp"
#include "test_support.hpp"

namespace {

std::string tmp_path(const std::string& name) {
  return "celldim_test_" + name;
}

void write_desk_scenario(const std::string& path, double lambda = 5e-5) {
  std::ofstream out(path);
  out << celldim::scenario_to_json(celldim::testing::desk_cell(lambda)).dump(2);
}

int run(const std::string& args) {
  const std::string cmd = std::string(CELLDIM_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("cli loss subcommand") {
  const std::string scenario = tmp_path("scenario.json");
  const std::string out = tmp_path("loss.json");
  const std::string pmf = tmp_path("pmf.csv");
  write_desk_scenario(scenario);
  REQUIRE(run("loss --scenario " + scenario + " --navail 45 --dump-pmf " +
              pmf + " --out " + out) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("n_avail") == 45);
  CHECK(j.at("exact").at("value").get<double>() >= 0.0);
  CHECK(j.at("exact").at("upper").get<double>() >=
        j.at("exact").at("lower").get<double>());
  CHECK(j.at("gaussian").at("certified") == true);
  CHECK(j.at("edgeworth2_upper").get<double>() >=
        j.at("exact").at("value").get<double>());
  // pmf dump: tail bound header plus column header plus one line per state
  const std::string pmf_text = slurp(pmf);
  CHECK(pmf_text.rfind("# tail_bound=", 0) == 0);
  CHECK(pmf_text.find("n,probability") != std::string::npos);
  std::remove(scenario.c_str());
  std::remove(out.c_str());
  std::remove(pmf.c_str());
}

TEST_CASE("cli dimension subcommand") {
  const std::string scenario = tmp_path("scen_dim.json");
  const std::string out = tmp_path("dim.json");
  write_desk_scenario(scenario);
  REQUIRE(run("dimension --scenario " + scenario + " --epsilon 1e-3 --out " +
              out) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("selected") == "concentration");
  CHECK(j.at("methods").at("exact").at("n_avail").get<int>() >= 1);
  std::remove(scenario.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli sweep subcommand") {
  const std::string scenario = tmp_path("scen_sweep.json");
  const std::string out = tmp_path("sweep.csv");
  write_desk_scenario(scenario);
  REQUIRE(run("sweep --scenario " + scenario +
              " --param gamma --from 3.7 --to 3.9 --steps 3 --epsilon 1e-3 "
              "--out " +
              out) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("gamma,load,loss_exact,", 0) == 0);
  int lines = 0;
  for (char ch : csv) lines += (ch == '\n');
  CHECK(lines == 4);  // header + 3 rows
  std::remove(scenario.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli validate subcommand") {
  const std::string scenario = tmp_path("scen_val.json");
  const std::string out = tmp_path("val.json");
  write_desk_scenario(scenario, 3.5e-5);
  REQUIRE(run("validate --scenario " + scenario +
              " --navail 40 --trials 50000 --seed 9 --workers 2 --out " +
              out) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("trials") == 50000);
  CHECK(j.contains("loss_estimate"));
  CHECK(j.contains("exact_value"));
  CHECK(j.at("ci").size() == 2);
  CHECK(j.at("agree").is_boolean());
  std::remove(scenario.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli dump-tables subcommand") {
  const std::string scenario = tmp_path("scen_tab.json");
  const std::string out = tmp_path("tables.json");
  write_desk_scenario(scenario);
  REQUIRE(run("dump-tables --scenario " + scenario + " --out " + out) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("classes").size() == 2);
  CHECK(j.at("classes")[0].contains("snr_thresholds"));
  CHECK(j.at("classes")[0].contains("coverage_weights"));
  CHECK(j.at("classes")[0].contains("coverage_weights_quadrature"));
  CHECK(j.at("moments").contains("M1"));
  CHECK(j.contains("merged_rates"));
  std::remove(scenario.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli exit codes") {
  // invalid scenario -> 2
  const std::string bad = tmp_path("bad.json");
  {
    nlohmann::json j =
        celldim::scenario_to_json(celldim::testing::desk_cell());
    j["classes"][0]["probability"] = 0.9;  // sums to 1.5
    std::ofstream out(bad);
    out << j.dump();
  }
  CHECK(run("loss --scenario " + bad + " --navail 10 >/dev/null 2>&1") == 2);

  // unknown key -> 2
  {
    nlohmann::json j =
        celldim::scenario_to_json(celldim::testing::desk_cell());
    j["radio"]["bogus"] = 1.0;
    std::ofstream out(bad);
    out << j.dump();
  }
  CHECK(run("loss --scenario " + bad + " --navail 10 >/dev/null 2>&1") == 2);

  // numeric infeasibility (pmf beyond any budget) -> 3
  {
    std::ofstream out(bad);
    out << celldim::scenario_to_json(celldim::testing::poisson_cell(3.0e4))
               .dump();
  }
  CHECK(run("loss --scenario " + bad + " --navail 10 >/dev/null 2>&1") == 3);
  std::remove(bad.c_str());
}
