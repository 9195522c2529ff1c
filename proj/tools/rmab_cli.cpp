// Command-line harness for restless-bandit regret experiments.
//
//   rmab run --scenario fig_5arm --policies asr,dsee,rca --horizon 100000 --runs 100 --seed 7 -o out.csv
//   rmab run --config out.csv.config.json
//   rmab stats --scenario fig_bursty
//   rmab bound --scenario fig_5arm --epsilon 0.01 --delta 0.1
//
// CSV goes to the output file or stdout; diagnostics go to stderr.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rmab/bound.hpp"
#include "rmab/errors.hpp"
#include "rmab/experiment.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_stats(const rmab::Scenario& sc, const rmab::Instance& inst) {
  std::printf("scenario %s: %s\n", sc.name.c_str(), sc.description.c_str());
  std::printf("arm,states,mu,lambda2,gap,max_hit,pi_min\n");
  for (std::size_t i = 0; i < inst.num_arms(); ++i) {
    const auto& c = inst.chains[i];
    std::printf("%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n", i + 1, inst.arms[i].num_states(), c.mu,
                c.lambda2, c.gap, c.max_hit, c.pi.minCoeff());
  }
  const auto& s = inst.stats;
  std::printf("r_max=%.10g s_max=%.10g S_max=%zu pi_min=%.10g pi_hat_max=%.10g\n", s.r_max,
              s.s_max, s.cap_s_max, s.pi_min, s.pi_hat_max);
  std::printf("lambda_max=%.10g gap_min=%.10g A_max=%.10g L=%.10g I=%.10g\n", s.lambda_max,
              s.gap_min, s.a_max, s.big_l, s.big_i);
  std::printf("best arm=%zu mu*=%.10g\n", s.best_arm() + 1, s.best_mean());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restless multi-armed bandit simulator (ASR, DSEE, RCA)"};
  app.require_subcommand(1);

  rmab::ExperimentConfig cfg;
  std::string policies = "asr,dsee,rca";
  std::string mode = "practical";
  std::string config_path;
  double l_value = 0.0;

  auto* run = app.add_subcommand("run", "Monte-Carlo regret curves as CSV");
  run->add_option("--config", config_path, "Load a JSON config (e.g. a previous sidecar)");
  run->add_option("--scenario", cfg.scenario, "Preset name or scenario JSON path");
  run->add_option("--policies", policies, "Comma list of asr,dsee,rca,oracle,random");
  run->add_option("--mode", mode, "ASR mode: practical|theoretical");
  run->add_option("--epsilon", cfg.epsilon, "ASR tuning epsilon (theoretical mode, bound)");
  run->add_option("--delta", cfg.delta, "Lower bound on the squared top-two gap (0 = derive)");
  run->add_option("--horizon", cfg.horizon, "Slots per run");
  run->add_option("--runs", cfg.runs, "Monte-Carlo runs");
  run->add_option("--seed", cfg.seed, "Master seed");
  run->add_option("--checkpoints", cfg.checkpoints, "Number of log-spaced checkpoints");
  run->add_option("-o,--output", cfg.output, "CSV path (stdout if omitted)");
  run->add_flag("--bound", cfg.bound, "Append the regret-bound curve");
  run->add_option("--bound-offset", cfg.bound_offset, "Additive constant of the bound");
  run->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  auto* l_opt = run->add_option("--L", l_value, "Override the concentration constant L");
  run->add_option("--baseline-scale", cfg.baseline_scale,
                  "Multiplier on DSEE/RCA exploration constants");
  run->add_flag("--baseline-rate10", cfg.baseline_rate10,
                "Scale baselines so DSEE explores each arm 10 ln t times");

  std::string stats_scenario = "fig_5arm";
  auto* stats = app.add_subcommand("stats", "Chain and instance statistics of a scenario");
  stats->add_option("--scenario", stats_scenario, "Preset name or scenario JSON path");

  std::string bound_scenario = "fig_5arm";
  double bound_eps = 0.01;
  double bound_delta = 0.0;
  auto* bound = app.add_subcommand("bound", "Regret-bound constants of a scenario");
  bound->add_option("--scenario", bound_scenario, "Preset name or scenario JSON path");
  bound->add_option("--epsilon", bound_eps, "Tuning epsilon (> 0)");
  bound->add_option("--delta", bound_delta, "Delta (0 = half the squared top-two gap)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw rmab::ConfigError("cannot read config '" + config_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        auto loaded = rmab::config_from_json(buf.str());
        // Flags given explicitly on the command line win over the file.
        if (run->count("--output") > 0) loaded.output = cfg.output;
        if (run->count("--threads") > 0) loaded.threads = cfg.threads;
        cfg = loaded;
      } else {
        cfg.policies = split_csv_list(policies);
        cfg.mode = mode == "theoretical" ? rmab::AsrMode::Theoretical : rmab::AsrMode::Practical;
        if (mode != "practical" && mode != "theoretical") {
          throw rmab::ConfigError("unknown mode '" + mode + "'");
        }
        if (l_opt->count() > 0) cfg.l_override = l_value;
      }
      std::cerr << "running " << cfg.policies.size() << " policies on " << cfg.scenario << ", "
                << cfg.runs << " runs x " << cfg.horizon << " slots\n";
      rmab::run_experiment(cfg, std::cout);
      if (!cfg.output.empty()) {
        std::cerr << "wrote " << cfg.output << " and " << rmab::sidecar_path(cfg.output) << '\n';
      }
    } else if (*stats) {
      const auto sc = rmab::load_scenario(stats_scenario);
      print_stats(sc, rmab::make_instance(sc.arms));
    } else if (*bound) {
      const auto sc = rmab::load_scenario(bound_scenario);
      auto probe = rmab::make_instance(sc.arms, bound_eps, 0.0);
      if (bound_delta == 0.0) {
        const double g = probe.stats.mu_sorted[0] - probe.stats.mu_sorted[1];
        bound_delta = 0.5 * g * g;
      }
      const auto inst = rmab::make_instance(sc.arms, bound_eps, bound_delta);
      const auto bc = rmab::bound_constants(inst);
      std::printf("epsilon=%.10g delta=%.10g L=%.10g I=%.10g\n", bound_eps, bound_delta,
                  inst.stats.big_l, inst.stats.big_i);
      std::printf("C1=%.10g C2=%.10g loglog=%.10g slope=%.10g\n", bc.c1, bc.c2,
                  bc.log_log_coeff, rmab::bound_log_slope(bc));
      std::printf("K (sorted positions):");
      for (auto k : bc.k_set) std::printf(" %zu", k);
      std::printf("\n");
    }
  } catch (const rmab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
