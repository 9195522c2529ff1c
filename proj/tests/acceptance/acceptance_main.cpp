// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.
// Usage: rmab_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/asr_invariants.hpp"
#include "common/two_state_oracle.hpp"
#include "rmab/bound.hpp"
#include "rmab/experiment.hpp"
#include "rmab/markov.hpp"
#include "rmab/rng.hpp"
#include "rmab/scenario.hpp"

namespace {

using namespace rmab;

constexpr std::uint64_t kHorizon = 100000;
constexpr double kPracticalL = 1.0;

struct Outcome {
  bool pass = true;
};

void note(Outcome& o, bool ok, const std::string& msg) {
  if (!ok) o.pass = false;
  std::printf("    %s %s\n", ok ? "ok  " : "FAIL", msg.c_str());
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Mean/SE of the first-passage time x -> y by direct simulation.
std::pair<double, double> mc_hitting(const Eigen::MatrixXd& p, StateIndex x, StateIndex y,
                                     int trials, Rng& rng) {
  double sum = 0, sq = 0;
  for (int k = 0; k < trials; ++k) {
    StateIndex s = x;
    std::uint64_t steps = 0;
    do {
      s = sample_next(p, s, rng);
      ++steps;
    } while (s != y);
    const double d = static_cast<double>(steps);
    sum += d;
    sq += d * d;
  }
  const double mean = sum / trials;
  return {mean, std::sqrt((sq / trials - mean * mean) / (trials - 1))};
}

Outcome chain_math() {
  Outcome o;
  std::uint64_t arm_id = 0;
  double worst_res = 0, worst_cf = 0, worst_z = 0;
  int mc_checks = 0;
  for (const auto& name : preset_names()) {
    const auto sc = load_scenario(name);
    for (std::size_t i = 0; i < sc.arms.size(); ++i, ++arm_id) {
      const auto& arm = sc.arms[i];
      const auto st = chain_stats(arm);
      const auto& p = arm.transition;
      worst_res = std::max({worst_res, stationary_residual(p, st.pi),
                            detailed_balance_residual(p, st.pi)});
      if (arm.num_states() == 2) {
        const double p01 = p(0, 1), p10 = p(1, 0);
        const double pi1 = p01 / (p01 + p10);
        const double mu = (1 - pi1) * arm.rewards[0] + pi1 * arm.rewards[1];
        worst_cf = std::max({worst_cf, std::abs(st.pi(1) - pi1), std::abs(st.mu - mu),
                             std::abs(st.lambda2 - (1 - p01 - p10)),
                             std::abs(st.hitting(0, 1) - 1 / p01) * p01,
                             std::abs(st.hitting(1, 0) - 1 / p10) * p10});
      }
      // Monte-Carlo on the pair with the largest hitting time (the one the bound uses).
      Eigen::Index bx = 0, by = 0;
      st.hitting.maxCoeff(&bx, &by);
      Rng rng(derive_seed(0xC1, arm_id));
      const auto [mean, se] = mc_hitting(p, bx, by, 100000, rng);
      const double z = std::abs(mean - st.hitting(bx, by)) / se;
      worst_z = std::max(worst_z, z);
      ++mc_checks;
      if (z >= 3.0) {
        note(o, false, fmt("%s arm %zu: M(%ld,%ld)=%.4f, MC %.4f +- %.4f", name.c_str(), i,
                           static_cast<long>(bx), static_cast<long>(by), st.hitting(bx, by), mean,
                           se));
      }
    }
  }
  note(o, worst_res < 1e-10, fmt("max stationary/detailed-balance residual %.2e (< 1e-10)", worst_res));
  note(o, worst_cf <= 1e-12, fmt("max two-state closed-form error %.2e (<= 1e-12)", worst_cf));
  note(o, worst_z < 3.0,
       fmt("%d hitting times vs 1e5-trial Monte-Carlo, worst |z| = %.2f (< 3)", mc_checks, worst_z));
  return o;
}

Outcome constants() {
  Outcome o;
  const auto sc = load_scenario("fig_5arm");
  const auto inst = make_instance(sc.arms, 0.01, 0.1);
  const auto& s = inst.stats;
  std::vector<double> p01, p10;
  for (const auto& a : sc.arms) {
    p01.push_back(a.transition(0, 1));
    p10.push_back(a.transition(1, 0));
  }
  const auto orc = testing::two_state_oracle(p01, p10, 1.0, 0.1, 0.01, 0.1);
  const auto bc = bound_constants(inst);
  auto rel = [](double a, double b) { return testing::rel_err(a, b); };

  note(o, rel(s.r_max, 1.1) < 1e-9 && rel(orc.r_max, 1.1) < 1e-9, fmt("r_max = %.12g", s.r_max));
  note(o, rel(s.gap_min, 0.3) < 1e-9 && rel(orc.gap_min, 0.3) < 1e-9,
       fmt("gap_min = %.12g", s.gap_min));
  note(o, rel(s.a_max, 6.6) < 1e-9 && rel(orc.a_max, 6.6) < 1e-9, fmt("A_max = %.12g", s.a_max));
  note(o, rel(s.pi_min, 1.0 / 6) < 1e-9 && rel(orc.pi_min, 1.0 / 6) < 1e-9,
       fmt("pi_min = %.12g", s.pi_min));
  note(o, rel(s.big_l, orc.big_l) < 1e-9 && std::abs(s.big_l - 705.24) < 0.005,
       fmt("L = %.10g (oracle %.10g)", s.big_l, orc.big_l));
  note(o, bc.k_set == std::vector<std::size_t>{3, 4, 5} && orc.k_set == bc.k_set,
       "K = {3,4,5}");
  note(o, rel(bc.d_bar[1], orc.d_bar[1]) < 1e-9 && std::abs(bc.d_bar[1] / 13930 - 1) < 1e-4,
       fmt("D_bar(sigma(2)) = %.6g (oracle %.6g, target ~13930)", bc.d_bar[1], orc.d_bar[1]));
  note(o, rel(bc.c1, orc.c1) < 1e-9 && rel(bc.c2, orc.c2) < 1e-9 && rel(bc.log_log_coeff, orc.log_log) < 1e-9,
       fmt("C1 = %.6g, C2 = %.6g, loglog = %.6g match the oracle", bc.c1, bc.c2, bc.log_log_coeff));
  return o;
}

Outcome invariants() {
  Outcome o;
  const auto inst = make_instance(load_scenario("fig_5arm").arms);
  const auto cfg = make_asr_config(AsrMode::Practical, inst, 0, 0, kPracticalL);
  std::uint64_t explore = 0, exploit = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rep = testing::check_asr_run(inst, cfg, kHorizon, derive_seed(0xC3, seed));
    explore += rep.exploration_epochs;
    exploit += rep.exploitation_epochs;
    for (const auto& f : rep.failures) note(o, false, fmt("seed %llu: %s", (unsigned long long)seed, f.c_str()));
  }
  note(o, o.pass, fmt("20 seeds, horizon 1e5: %llu exploration and %llu exploitation epochs checked",
                      (unsigned long long)explore, (unsigned long long)exploit));
  note(o, exploit > 0, "exploitation epochs occurred");
  return o;
}

ExperimentConfig figure_config(const std::string& scenario, std::uint64_t runs) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.policies = {"asr", "dsee", "rca"};
  cfg.horizon = kHorizon;
  cfg.runs = runs;
  cfg.seed = 2024;
  cfg.l_override = kPracticalL;
  return cfg;
}

std::map<std::string, std::vector<RegretCurve>> g_figure_cache;

const std::vector<RegretCurve>& figure_curves(const std::string& scenario) {
  auto it = g_figure_cache.find(scenario);
  if (it == g_figure_cache.end()) {
    it = g_figure_cache.emplace(scenario, run_experiment(resolve_experiment(figure_config(scenario, 100)))).first;
  }
  return it->second;
}

const RegretCurve& curve(const std::vector<RegretCurve>& cs, const std::string& name) {
  return *std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.policy == name; });
}

Outcome ordering() {
  Outcome o;
  for (const char* sc : {"fig_5arm", "fig_10arm", "fig_closegap", "fig_bursty"}) {
    const auto& cs = figure_curves(sc);
    const auto& asr = curve(cs, "asr");
    const double a = asr.mean_regret.back(), ase = asr.std_err.back();
    for (const char* base : {"dsee", "rca"}) {
      const auto& b = curve(cs, base);
      const double m = b.mean_regret.back(), se = b.std_err.back();
      const double margin = 2.0 * std::hypot(ase, se);
      note(o, m - a > margin,
           fmt("%-12s asr %8.1f +- %5.1f vs %-4s %8.1f +- %5.1f (need gap > %.1f)", sc, a, ase, base,
               m, se, margin));
    }
  }
  return o;
}

Outcome log_order() {
  Outcome o;
  const auto& asr = curve(figure_curves("fig_5arm"), "asr");
  std::vector<double> x, y;
  double norm_lo = 0, norm_hi = 0;
  std::uint64_t t_lo = 0;
  for (std::size_t k = 0; k < asr.checkpoints.size(); ++k) {
    const auto t = asr.checkpoints[k];
    if (t < 10000 || t > kHorizon) continue;
    if (t_lo == 0) {
      t_lo = t;
      norm_lo = asr.normalized[k];
    }
    norm_hi = asr.normalized[k];
    x.push_back(std::log(static_cast<double>(t)));
    y.push_back(asr.mean_regret[k]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  const double a = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  note(o, r2 >= 0.95, fmt("fit a ln t + b on %zu checkpoints in [1e4, 1e5]: a = %.1f, R^2 = %.4f (>= 0.95)",
                          x.size(), a, r2));
  const double drift = std::abs(norm_hi / norm_lo - 1.0);
  note(o, drift <= 0.25, fmt("r(t)/ln t: %.2f at t=%llu, %.2f at t=1e5, change %.1f%% (<= 25%%)", norm_lo,
                             (unsigned long long)t_lo, norm_hi, 100 * drift));
  return o;
}

Outcome regret_readings() {
  Outcome o;
  auto cfg = figure_config("fig_5arm", 500);
  cfg.policies = {"asr", "dsee", "rca", "random"};
  cfg.checkpoints = 1;
  for (const auto& c : run_experiment(resolve_experiment(cfg))) {
    const double p = c.mean_regret.back(), r = c.realized_mean.back();
    const double se = std::hypot(c.std_err.back(), c.realized_std_err.back());
    note(o, std::abs(p - r) < 4.0 * se,
         fmt("%-6s pseudo %9.2f vs realized %9.2f, |diff| %.2f < 4 SE = %.2f", c.policy.c_str(), p, r,
             std::abs(p - r), 4.0 * se));
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.scenario = "fig_20state";
  cfg.policies = {"asr", "dsee", "rca", "oracle", "random"};
  cfg.horizon = 20000;
  cfg.runs = 16;
  cfg.seed = 99;
  cfg.bound = true;
  cfg.epsilon = 0.01;
  cfg.l_override = kPracticalL;
  std::string out[3];
  const unsigned threads[3] = {0, 1, 3};
  for (int k = 0; k < 3; ++k) {
    cfg.threads = threads[k];
    std::ostringstream os;
    run_experiment(cfg, os);
    out[k] = os.str();
  }
  note(o, out[0] == out[1] && out[1] == out[2],
       fmt("three reruns (threads 0/1/3) produce identical %zu-byte CSVs", out[0].size()));
  // The written sidecar must reproduce the same bytes.
  std::ostringstream again;
  run_experiment(config_from_json(config_to_json(cfg)), again);
  note(o, again.str() == out[0], "config JSON round trip reproduces the CSV");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"chain-math oracles", chain_math},
      {"fig_5arm constants", constants},
      {"ASR epoch invariants", invariants},
      {"ASR beats DSEE and RCA", ordering},
      {"logarithmic regret order", log_order},
      {"pseudo vs realized regret", regret_readings},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

  std::vector<std::string> summary;
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    std::printf("criterion %d: %s\n", id, criteria[k].first);
    std::fflush(stdout);
    Outcome res;
    try {
      res = criteria[k].second();
    } catch (const std::exception& e) {
      res.pass = false;
      std::printf("    FAIL exception: %s\n", e.what());
    }
    all = all && res.pass;
    summary.push_back(fmt("%s criterion %d: %s", res.pass ? "PASS" : "FAIL", id, criteria[k].first));
    std::printf("%s\n", summary.back().c_str());
    std::fflush(stdout);
  }
  std::printf("\nsummary\n");
  for (const auto& s : summary) std::printf("%s\n", s.c_str());
  return all ? 0 : 1;
}
