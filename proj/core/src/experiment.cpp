#include "rmab/experiment.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rmab/bound.hpp"
#include "rmab/errors.hpp"

namespace rmab {

using nlohmann::json;

namespace {

std::string_view mode_name(AsrMode m) {
  return m == AsrMode::Practical ? "practical" : "theoretical";
}

AsrMode parse_mode(std::string_view s) {
  if (s == "practical") return AsrMode::Practical;
  if (s == "theoretical") return AsrMode::Theoretical;
  throw ConfigError("unknown mode '" + std::string(s) + "' (practical|theoretical)");
}

PolicyConfig policy_config(const ExperimentConfig& cfg, PolicyKind kind) {
  PolicyConfig pc;
  pc.kind = kind;
  pc.mode = cfg.mode;
  pc.epsilon = cfg.epsilon;
  pc.delta = cfg.delta;
  pc.l_override = cfg.l_override;
  pc.baseline_scale = cfg.baseline_scale;
  return pc;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j{
      {"scenario", cfg.scenario},
      {"policies", cfg.policies},
      {"mode", mode_name(cfg.mode)},
      {"epsilon", cfg.epsilon},
      {"delta", cfg.delta},
      {"horizon", cfg.horizon},
      {"runs", cfg.runs},
      {"seed", cfg.seed},
      {"checkpoints", cfg.checkpoints},
      {"output", cfg.output},
      {"bound", cfg.bound},
      {"bound_offset", cfg.bound_offset},
      {"threads", cfg.threads},
      {"baseline_scale", cfg.baseline_scale},
      {"baseline_rate10", cfg.baseline_rate10},
  };
  j["L"] = cfg.l_override ? json(*cfg.l_override) : json(nullptr);
  return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
  ExperimentConfig cfg;
  try {
    const auto j = json::parse(text);
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("scenario", cfg.scenario);
    get("policies", cfg.policies);
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
    get("epsilon", cfg.epsilon);
    get("delta", cfg.delta);
    get("horizon", cfg.horizon);
    get("runs", cfg.runs);
    get("seed", cfg.seed);
    get("checkpoints", cfg.checkpoints);
    get("output", cfg.output);
    get("bound", cfg.bound);
    get("bound_offset", cfg.bound_offset);
    get("threads", cfg.threads);
    get("baseline_scale", cfg.baseline_scale);
    get("baseline_rate10", cfg.baseline_rate10);
    if (j.contains("L") && !j.at("L").is_null()) cfg.l_override = j.at("L").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  return cfg;
}

ResolvedExperiment resolve_experiment(const ExperimentConfig& cfg) {
  if (cfg.policies.empty() && !cfg.bound) throw ConfigError("no policies requested");
  if (cfg.runs == 0) throw ConfigError("runs must be at least 1");
  if (cfg.checkpoints == 0) throw ConfigError("checkpoints must be at least 1");
  if (!(cfg.epsilon >= 0.0) || !(cfg.delta >= 0.0)) {
    throw ConfigError("epsilon and delta must be non-negative");
  }
  if (cfg.l_override && !(*cfg.l_override > 0.0)) throw ConfigError("L must be positive");

  ResolvedExperiment r{cfg, load_scenario(cfg.scenario), {}, {}};
  // Means first, so a default delta can be derived from them.
  auto probe = make_instance(r.scenario.arms, cfg.epsilon, 0.0);
  if (r.config.delta == 0.0) {
    const double g = probe.stats.mu_sorted[0] - probe.stats.mu_sorted[1];
    r.config.delta = 0.5 * g * g;
  }
  if (!(r.config.delta > 0.0)) {
    throw ConfigError("the two best arms have equal means; delta cannot be derived");
  }
  r.instance = make_instance(r.scenario.arms, cfg.epsilon, r.config.delta);
  if (cfg.baseline_rate10) {
    const double l = cfg.l_override.value_or(r.instance.stats.big_l);
    r.config.baseline_scale = 10.0 * r.config.delta / (4.0 * l);
  }
  if (!(r.config.baseline_scale > 0.0)) throw ConfigError("baseline scale must be positive");
  if (cfg.horizon < r.instance.num_arms()) {
    throw ConfigError("horizon must be at least the number of arms");
  }
  for (const auto& name : cfg.policies) {
    (void)make_policy(policy_config(r.config, parse_policy_kind(name)), r.instance, 0);
  }
  if (cfg.bound) (void)bound_constants(r.instance);
  r.checkpoints = default_checkpoints(cfg.horizon, cfg.checkpoints);
  return r;
}

RegretCurve bound_curve(const Instance& inst, std::span<const std::uint64_t> checkpoints,
                        double offset) {
  const auto bc = bound_constants(inst);
  RegretCurve c;
  c.policy = "bound";
  for (auto t : checkpoints) {
    if (t < 3) continue;
    const double v = regret_bound(static_cast<double>(t), bc, offset);
    c.checkpoints.push_back(t);
    c.mean_regret.push_back(v);
    c.std_err.push_back(0.0);
    c.normalized.push_back(v / std::log(static_cast<double>(t)));
    c.realized_mean.push_back(v);
    c.realized_std_err.push_back(0.0);
  }
  return c;
}

std::vector<RegretCurve> run_experiment(const ResolvedExperiment& exp) {
  std::vector<RegretCurve> curves;
  const auto& cfg = exp.config;
  for (const auto& name : cfg.policies) {
    const auto pc = policy_config(cfg, parse_policy_kind(name));
    curves.push_back(monte_carlo(exp.instance, pc, cfg.horizon, cfg.runs, cfg.seed,
                                 exp.checkpoints, cfg.threads));
  }
  if (cfg.bound) curves.push_back(bound_curve(exp.instance, exp.checkpoints, cfg.bound_offset));
  return curves;
}

std::string sidecar_path(const std::string& output) { return output + ".config.json"; }

std::vector<RegretCurve> run_experiment(const ExperimentConfig& cfg, std::ostream& fallback) {
  const auto exp = resolve_experiment(cfg);
  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + cfg.output + "'");
  }
  auto curves = run_experiment(exp);
  std::ostream& os = cfg.output.empty() ? fallback : file;
  write_csv(os, curves);
  if (!os) throw Error("failed writing CSV output");
  if (!cfg.output.empty()) {
    std::ofstream side(sidecar_path(cfg.output), std::ios::binary);
    side << config_to_json(exp.config) << '\n';
    if (!side) throw Error("failed writing config sidecar");
  }
  return curves;
}

}  // namespace rmab
