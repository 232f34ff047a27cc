#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "celldim/errors.hpp"
#include "celldim/scenario.hpp"

namespace celldim {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::set<std::string>& allowed,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ValidationError("scenario: unknown key '" + it.key() + "' in " +
                            where);
    }
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
  if (!obj.contains(key)) {
    throw ValidationError("scenario: missing key '" + key + "' in " + where);
  }
  if (!obj.at(key).is_number()) {
    throw ValidationError("scenario: key '" + key + "' in " + where +
                          " must be a number");
  }
  return obj.at(key).get<double>();
}

}  // namespace detail

inline CellScenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("scenario: root must be an object");
  detail::reject_unknown_keys(
      j,
      {"radius_m", "intensity_per_m2", "max_subchannels_per_user", "classes",
       "radio", "shadowing"},
      "root");
  CellScenario s;
  s.radius_m = detail::require_number(j, "radius_m", "root");
  s.intensity_per_m2 = detail::require_number(j, "intensity_per_m2", "root");
  s.max_subchannels_per_user = static_cast<int>(
      detail::require_number(j, "max_subchannels_per_user", "root"));

  if (!j.contains("classes") || !j.at("classes").is_array()) {
    throw ValidationError("scenario: 'classes' must be an array");
  }
  for (const nlohmann::json& c : j.at("classes")) {
    if (!c.is_object()) {
      throw ValidationError("scenario: class entries must be objects");
    }
    detail::reject_unknown_keys(c, {"rate_kbps", "probability"}, "classes[]");
    ServiceClass sc;
    sc.rate_kbps = detail::require_number(c, "rate_kbps", "classes[]");
    sc.probability = detail::require_number(c, "probability", "classes[]");
    s.classes.push_back(sc);
  }

  if (!j.contains("radio") || !j.at("radio").is_object()) {
    throw ValidationError("scenario: 'radio' must be an object");
  }
  const nlohmann::json& r = j.at("radio");
  detail::reject_unknown_keys(
      r,
      {"tx_power_w", "noise_w", "carrier_frequency_hz", "reference_distance_m",
       "pathloss_exponent", "subchannel_bandwidth_khz", "min_sinr_linear",
       "attenuation_constant"},
      "radio");
  s.radio.tx_power_w = detail::require_number(r, "tx_power_w", "radio");
  s.radio.noise_w = detail::require_number(r, "noise_w", "radio");
  s.radio.carrier_frequency_hz =
      r.contains("carrier_frequency_hz")
          ? detail::require_number(r, "carrier_frequency_hz", "radio")
          : 0.0;
  s.radio.reference_distance_m =
      detail::require_number(r, "reference_distance_m", "radio");
  s.radio.pathloss_exponent =
      detail::require_number(r, "pathloss_exponent", "radio");
  s.radio.subchannel_bandwidth_khz =
      detail::require_number(r, "subchannel_bandwidth_khz", "radio");
  s.radio.min_sinr_linear = detail::require_number(r, "min_sinr_linear", "radio");
  if (r.contains("attenuation_constant")) {
    s.radio.attenuation_constant =
        detail::require_number(r, "attenuation_constant", "radio");
  }

  if (!j.contains("shadowing") || !j.at("shadowing").is_object()) {
    throw ValidationError("scenario: 'shadowing' must be an object");
  }
  const nlohmann::json& sh = j.at("shadowing");
  detail::reject_unknown_keys(sh, {"mean_db", "variance_db2"}, "shadowing");
  s.shadowing.mean_db = detail::require_number(sh, "mean_db", "shadowing");
  s.shadowing.variance_db2 =
      detail::require_number(sh, "variance_db2", "shadowing");
  return s;
}

inline nlohmann::json scenario_to_json(const CellScenario& s) {
  nlohmann::json radio = {
      {"tx_power_w", s.radio.tx_power_w},
      {"noise_w", s.radio.noise_w},
      {"carrier_frequency_hz", s.radio.carrier_frequency_hz},
      {"reference_distance_m", s.radio.reference_distance_m},
      {"pathloss_exponent", s.radio.pathloss_exponent},
      {"subchannel_bandwidth_khz", s.radio.subchannel_bandwidth_khz},
      {"min_sinr_linear", s.radio.min_sinr_linear},
  };
  if (s.radio.attenuation_constant) {
    radio["attenuation_constant"] = *s.radio.attenuation_constant;
  }
  nlohmann::json classes = nlohmann::json::array();
  for (const ServiceClass& c : s.classes) {
    classes.push_back(
        {{"rate_kbps", c.rate_kbps}, {"probability", c.probability}});
  }
  return nlohmann::json{
      {"radius_m", s.radius_m},
      {"intensity_per_m2", s.intensity_per_m2},
      {"max_subchannels_per_user", s.max_subchannels_per_user},
      {"classes", classes},
      {"radio", radio},
      {"shadowing",
       {{"mean_db", s.shadowing.mean_db},
        {"variance_db2", s.shadowing.variance_db2}}},
  };
}

inline CellScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("scenario: JSON parse error in '" + path +
                          "': " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace celldim
