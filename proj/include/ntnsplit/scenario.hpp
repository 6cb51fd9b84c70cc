#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ntnsplit/cost_model.hpp"

namespace ntnsplit {

// Configuration ingestion errors (bad file, unknown key, invalid value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a scenario file in a simple INI dialect. Recognized sections are
// [platform.SAT], [platform.HAP], [gateway], [function_loads] and
// [constants]; keys match the parameter field names. Keys not present keep
// their default values; unknown sections or keys are rejected.
//
//   [platform.SAT]
//   idle_power_w = 10
//   epo_j_per_to = 0.625
//   comp_max_tops = 32
//   distance_to_gateway_m = 600e3
//   link_capacity_mbps = 100
//   link_power_w = 35
ScenarioParams parse_scenario(std::istream& in);

ScenarioParams load_scenario(const std::string& path);

/// Canonical text form of a scenario (stable key order, full precision).
/// Feeding it back through parse_scenario reproduces the same parameters.
std::string scenario_to_string(const ScenarioParams& params);

/// FNV-1a 64-bit hash, used to fingerprint resolved configurations in
/// output headers.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace ntnsplit
