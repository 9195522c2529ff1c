#include "rmab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmab/errors.hpp"
#include "rmab/rng.hpp"

namespace rmab {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTwentyStateSeed = 20;

template <class E>
[[noreturn]] void rethrow_for_arm(std::size_t arm, const E& e) {
  throw E("arm " + std::to_string(arm) + ": " + e.what());
}

void validate_arms(const std::vector<ArmSpec>& arms) {
  for (std::size_t i = 0; i < arms.size(); ++i) {
    try {
      validate_arm(arms[i]);
    } catch (const ValidationError& e) {
      rethrow_for_arm(i, e);
    } catch (const StructureError& e) {
      rethrow_for_arm(i, e);
    }
  }
}

ArmSpec arm_from(const json& j) {
  if (!j.is_object() || !j.contains("rewards") || !j.contains("transition")) {
    throw ValidationError("arm must be an object with \"rewards\" and \"transition\"");
  }
  ArmSpec arm;
  arm.rewards = j.at("rewards").get<std::vector<double>>();
  const auto rows = j.at("transition").get<std::vector<std::vector<double>>>();
  const auto n = static_cast<Eigen::Index>(rows.size());
  arm.transition.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError("transition row " + std::to_string(r) + " has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(n));
    }
    for (Eigen::Index c = 0; c < n; ++c) arm.transition(r, c) = row[static_cast<std::size_t>(c)];
  }
  return arm;
}

json arm_json(const ArmSpec& arm) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < arm.transition.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < arm.transition.cols(); ++c) row.push_back(arm.transition(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"rewards", arm.rewards}, {"transition", std::move(rows)}};
}

std::vector<Scenario> build_presets() {
  std::vector<Scenario> p;
  p.push_back(two_state_scenario("fig_5arm", {0.1, 0.1, 0.5, 0.1, 0.1}, {0.2, 0.3, 0.1, 0.4, 0.5},
                                 "5 two-state Gilbert-Elliott arms"));
  p.push_back(two_state_scenario(
      "fig_10arm", {0.1, 0.1, 0.5, 0.1, 0.1, 0.2, 0.1, 0.2, 0.15, 0.25},
      {0.2, 0.3, 0.1, 0.4, 0.5, 0.45, 0.35, 0.3, 0.5, 0.4}, "10 two-state Gilbert-Elliott arms"));
  p.push_back(two_state_scenario("fig_closegap", {0.1, 0.8, 0.5, 0.1, 0.1},
                                 {0.2, 0.2, 0.1, 0.4, 0.5},
                                 "5 two-state arms, top-two mean gap 0.03"));
  p.push_back(Scenario{"fig_20state", random_reversible_arms(5, 20, kTwentyStateSeed),
                       "reconstruction: 5 random reversible 20-state birth-death arms "
                       "(Metropolis, seed 20); not the original matrices"});
  p.push_back(two_state_scenario("fig_bursty", {0.04, 0.05, 0.36, 0.05, 0.06},
                                 {0.08, 0.15, 0.09, 0.05, 0.18},
                                 "5 bursty two-state arms (small switching probabilities)"));
  return p;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig_5arm", "fig_10arm", "fig_closegap",
                                                 "fig_20state", "fig_bursty"};
  return names;
}

Scenario two_state_scenario(std::string name, std::vector<double> p01, std::vector<double> p10,
                            std::string description) {
  Scenario sc{std::move(name), {}, std::move(description)};
  for (std::size_t i = 0; i < p01.size(); ++i) sc.arms.push_back(two_state_arm(p01[i], p10[i]));
  return sc;
}

std::vector<ArmSpec> random_reversible_arms(std::size_t count, std::size_t states,
                                            std::uint64_t seed) {
  std::vector<ArmSpec> arms;
  const auto n = static_cast<Eigen::Index>(states);
  for (std::size_t a = 0; a < count; ++a) {
    Rng rng(derive_seed(seed, a));
    // Target stationary vector: exponential tilt towards high or low rewards, jittered.
    const double tilt = 4.0 * uniform01(rng) - 2.0;
    Eigen::VectorXd w(n);
    for (Eigen::Index s = 0; s < n; ++s) {
      const double pos = states > 1 ? static_cast<double>(s) / static_cast<double>(n - 1) : 0.0;
      w(s) = std::exp(tilt * pos) * (0.5 + uniform01(rng));
    }
    const Eigen::VectorXd pi = w / w.sum();

    ArmSpec arm;
    arm.transition = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index s = 0; s < n; ++s) {
      arm.rewards.push_back(static_cast<double>(s + 1) / static_cast<double>(states));
      double off = 0.0;
      for (Eigen::Index nb : {s - 1, s + 1}) {
        if (nb < 0 || nb >= n) continue;
        const double p = 0.5 * std::min(1.0, pi(nb) / pi(s));
        arm.transition(s, nb) = p;
        off += p;
      }
      arm.transition(s, s) = 1.0 - off;
    }
    arms.push_back(std::move(arm));
  }
  return arms;
}

Scenario scenario_from_json(std::string_view text, std::string fallback_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
  }
  Scenario sc;
  sc.name = std::move(fallback_name);
  const json* arms = &j;
  if (j.is_object()) {
    if (j.contains("name")) sc.name = j.at("name").get<std::string>();
    if (j.contains("description")) sc.description = j.at("description").get<std::string>();
    if (!j.contains("arms")) throw ConfigError("scenario JSON lacks an \"arms\" array");
    arms = &j.at("arms");
  }
  if (!arms->is_array()) throw ConfigError("scenario arms must be a JSON array");
  try {
    for (const auto& a : *arms) sc.arms.push_back(arm_from(a));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed arm in scenario JSON: ") + e.what());
  }
  validate_arms(sc.arms);
  return sc;
}

ArmSpec arm_from_json(std::string_view text) {
  try {
    return arm_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed arm JSON: ") + e.what());
  }
}

std::string arm_to_json(const ArmSpec& arm) { return arm_json(arm).dump(); }

std::string scenario_to_json(const Scenario& sc) {
  json arms = json::array();
  for (const auto& a : sc.arms) arms.push_back(arm_json(a));
  return json{{"name", sc.name}, {"description", sc.description}, {"arms", std::move(arms)}}
      .dump(2);
}

Scenario load_scenario(std::string_view name_or_path) {
  static const std::vector<Scenario> presets = build_presets();
  for (const auto& p : presets) {
    if (p.name == name_or_path) {
      validate_arms(p.arms);
      return p;
    }
  }
  std::ifstream in{std::string(name_or_path)};
  if (!in) {
    std::ostringstream os;
    os << "unknown scenario '" << name_or_path << "' (not a preset or readable file; presets:";
    for (const auto& n : preset_names()) os << ' ' << n;
    os << ')';
    throw ConfigError(os.str());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str(), std::string(name_or_path));
}

}  // namespace rmab
