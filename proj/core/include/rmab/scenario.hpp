#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmab/markov.hpp"

namespace rmab {

struct Scenario {
  std::string name;
  std::vector<ArmSpec> arms;
  std::string description;
};

/// Names accepted by load_scenario besides file paths.
const std::vector<std::string>& preset_names();

/// Two-state Gilbert-Elliott preset with rewards 1 (good) / 0.1 (bad).
Scenario two_state_scenario(std::string name, std::vector<double> p01, std::vector<double> p10,
                            std::string description);

/// `count` reversible birth-death chains on `states` states built by a Metropolis
/// walk towards a random stationary vector. Deterministic in `seed`.
std::vector<ArmSpec> random_reversible_arms(std::size_t count, std::size_t states,
                                            std::uint64_t seed);

/// A preset name (fig_5arm, fig_10arm, fig_closegap, fig_20state, fig_bursty) or
/// a path to a JSON scenario. Every arm is validated. Throws ConfigError for
/// unknown names or unreadable files and ValidationError/StructureError for bad arms.
Scenario load_scenario(std::string_view name_or_path);

/// JSON forms: an object {"name", "description", "arms": [...]}, or a bare array
/// of arms. Each arm is {"rewards": [..], "transition": [[..], ..]}.
Scenario scenario_from_json(std::string_view text, std::string fallback_name = "custom");
ArmSpec arm_from_json(std::string_view text);
std::string arm_to_json(const ArmSpec& arm);
std::string scenario_to_json(const Scenario& sc);

}  // namespace rmab
