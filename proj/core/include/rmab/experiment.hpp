#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmab/asr.hpp"
#include "rmab/regret.hpp"
#include "rmab/scenario.hpp"

namespace rmab {

struct ExperimentConfig {
  std::string scenario = "fig_5arm";
  std::vector<std::string> policies = {"asr", "dsee", "rca"};
  AsrMode mode = AsrMode::Practical;
  double epsilon = 0.0;
  double delta = 0.0;  // 0 = half the squared top-two gap of the true means
  std::uint64_t horizon = 100000;
  std::uint64_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t checkpoints = 50;
  std::string output;  // empty = standard output, no sidecar
  bool bound = false;
  double bound_offset = 0.0;
  unsigned threads = 0;
  std::optional<double> l_override;
  double baseline_scale = 1.0;
  // Replaces baseline_scale so that DSEE explores each arm 10 ln t times
  // (scale = 10 delta / 4L), the rate commonly used in DSEE simulations.
  bool baseline_rate10 = false;
};

std::string config_to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults. Throws ConfigError on malformed input.
ExperimentConfig config_from_json(std::string_view text);

struct ResolvedExperiment {
  ExperimentConfig config;  // delta filled in
  Scenario scenario;
  Instance instance;
  std::vector<std::uint64_t> checkpoints;
};

/// Loads the scenario and checks every parameter without simulating anything.
ResolvedExperiment resolve_experiment(const ExperimentConfig& cfg);

/// Curve of the regret bound in the CSV schema, policy name "bound".
RegretCurve bound_curve(const Instance& inst, std::span<const std::uint64_t> checkpoints,
                        double offset);

/// Runs every requested policy and, if asked, appends the bound curve.
std::vector<RegretCurve> run_experiment(const ResolvedExperiment& exp);

/// Resolves, runs and writes the CSV to `cfg.output` (plus `<output>.config.json`
/// holding the resolved config) or to `fallback` when no output path is set.
std::vector<RegretCurve> run_experiment(const ExperimentConfig& cfg, std::ostream& fallback);

std::string sidecar_path(const std::string& output);

}  // namespace rmab
