#include <doctest.h>

#include <cmath>
#include <numbers>

#include "celldim/scenario.hpp"
#include "celldim/scenario_io.hpp"
#include "test_support.hpp"

using namespace celldim;

namespace {

bool has_violation(const ValidationReport& r, const std::string& needle) {
  for (const std::string& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate accepts the fixtures") {
  CHECK(validate(testing::desk_cell()).ok());
  CHECK(validate(testing::peak_cell()).ok());
  CHECK(validate(testing::poisson_cell(1e-3)).ok());
  // the toy cell deliberately sits on the gamma = 2 boundary; that is its
  // only violation
  const ValidationReport toy = validate(testing::toy_cell());
  REQUIRE(toy.violations.size() == 1);
  CHECK(has_violation(toy, "pathloss_exponent must exceed 2"));
}

TEST_CASE("validate reports violated invariants") {
  CellScenario s = testing::desk_cell();
  s.classes = {{500.0, 0.5}, {400.0, 0.4}};
  ValidationReport r = validate(s);
  REQUIRE_FALSE(r.ok());
  CHECK(has_violation(r, "probabilities sum to 0.9"));

  s = testing::desk_cell();
  s.radio.pathloss_exponent = 2.0;
  r = validate(s);
  REQUIRE_FALSE(r.ok());
  CHECK(has_violation(r, "pathloss_exponent must exceed 2"));

  s = testing::desk_cell();
  s.radius_m = 2.0;  // below d_ref
  CHECK_FALSE(validate(s).ok());
  s = testing::desk_cell();
  s.classes.clear();
  CHECK_FALSE(validate(s).ok());
  s = testing::desk_cell();
  s.max_subchannels_per_user = 0;
  CHECK_FALSE(validate(s).ok());

  // validate is idempotent and side-effect free
  s = testing::toy_cell();
  const ValidationReport first = validate(s);
  const ValidationReport second = validate(s);
  CHECK(first.violations == second.violations);
}

TEST_CASE("attenuation constant") {
  RadioParams r;
  r.attenuation_constant = 1.0;
  CHECK(attenuation_constant(r) == 1.0);

  // f = c/(4 pi), d_ref = 1, gamma = 3 makes every factor unity
  r = RadioParams{};
  r.carrier_frequency_hz = kSpeedOfLight / (4.0 * std::numbers::pi);
  r.reference_distance_m = 1.0;
  r.pathloss_exponent = 3.0;
  CHECK(attenuation_constant(r) == doctest::Approx(1.0).epsilon(1e-14));

  // 2.6 GHz, 10 m, gamma = 3.8 against an arbitrary-precision evaluation
  r = RadioParams{};
  r.carrier_frequency_hz = 2.6e9;
  r.reference_distance_m = 10.0;
  r.pathloss_exponent = 3.8;
  CHECK(attenuation_constant(r) ==
        doctest::Approx(5.3122069032491511e-3).epsilon(1e-12));

  // K_gamma is increasing in gamma for d_ref > 1 m, decreasing below
  r.pathloss_exponent = 3.9;
  CHECK(attenuation_constant(r) > 5.3122069032491511e-3);
  r.reference_distance_m = 0.5;
  r.pathloss_exponent = 3.8;
  const double at_38 = attenuation_constant(r);
  r.pathloss_exponent = 3.9;
  CHECK(attenuation_constant(r) < at_38);
}

TEST_CASE("shadowing fractional moment") {
  CHECK(shadowing_fractional_moment({0.0, 0.0}, 3.7) == 1.0);
  CHECK(shadowing_fractional_moment({0.0, 10.0}, 4.0) ==
        doctest::Approx(1.0685191590220488).epsilon(1e-12));
  CHECK(shadowing_fractional_moment({5.0, 0.0}, 2.0) ==
        doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(shadowing_fractional_moment({0.0, 1.0}, 0.0), DomainError);

  // Jensen: moment >= 10^(kappa/(5 gamma)), equality only at v^2 = 0
  for (double gamma : {2.5, 3.8, 5.0}) {
    for (double kappa : {-3.0, 0.0, 4.0}) {
      const double floor = std::pow(10.0, kappa / (5.0 * gamma));
      CHECK(shadowing_fractional_moment({kappa, 6.0}, gamma) > floor);
      CHECK(shadowing_fractional_moment({kappa, 0.0}, gamma) ==
            doctest::Approx(floor).epsilon(1e-13));
    }
  }
}

TEST_CASE("scenario json round trip and schema rejection") {
  const CellScenario s = testing::desk_cell();
  const nlohmann::json j = scenario_to_json(s);
  const CellScenario back = scenario_from_json(j);
  CHECK(back.radius_m == s.radius_m);
  CHECK(back.intensity_per_m2 == s.intensity_per_m2);
  CHECK(back.classes.size() == s.classes.size());
  CHECK(back.radio.noise_w == s.radio.noise_w);
  CHECK(back.shadowing.variance_db2 == s.shadowing.variance_db2);

  nlohmann::json bad = j;
  bad["unexpected"] = 1;
  CHECK_THROWS_AS(scenario_from_json(bad), ValidationError);

  bad = j;
  bad["radio"]["mystery_knob"] = 2.0;
  CHECK_THROWS_AS(scenario_from_json(bad), ValidationError);

  bad = j;
  bad.erase("classes");
  CHECK_THROWS_AS(scenario_from_json(bad), ValidationError);

  bad = j;
  bad["radius_m"] = "三百";
  CHECK_THROWS_AS(scenario_from_json(bad), ValidationError);
}
