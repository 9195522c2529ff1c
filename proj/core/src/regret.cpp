#include "rmab/regret.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "rmab/baselines.hpp"
#include "rmab/errors.hpp"
#include "rmab/rng.hpp"

namespace rmab {

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Asr: return "asr";
    case PolicyKind::Dsee: return "dsee";
    case PolicyKind::Rca: return "rca";
    case PolicyKind::Oracle: return "oracle";
    case PolicyKind::Random: return "random";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (auto k : {PolicyKind::Asr, PolicyKind::Dsee, PolicyKind::Rca, PolicyKind::Oracle,
                 PolicyKind::Random}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const Instance& inst,
                                    std::uint64_t seed) {
  const double big_l = cfg.l_override.value_or(inst.stats.big_l);
  switch (cfg.kind) {
    case PolicyKind::Asr:
      return std::make_unique<AsrPolicy>(
          make_asr_config(cfg.mode, inst, cfg.epsilon, cfg.delta, cfg.l_override), inst);
    case PolicyKind::Dsee:
      return std::make_unique<DseePolicy>(DseeConfig{big_l, cfg.delta, cfg.baseline_scale}, inst);
    case PolicyKind::Rca:
      return std::make_unique<RcaPolicy>(RcaConfig{big_l, cfg.baseline_scale}, inst);
    case PolicyKind::Oracle:
      return std::make_unique<OraclePolicy>(inst.stats);
    case PolicyKind::Random:
      return std::make_unique<RandomPolicy>(inst.num_arms(), splitmix64(seed));
  }
  throw ConfigError("unhandled policy kind");
}

namespace {

// Drives `policy` for `horizon` slots and reports (t, arm, reward) to `sink`.
template <class Sink>
void play(const Instance& inst, Policy& policy, std::uint64_t horizon, std::uint64_t seed,
          PassiveDynamics dynamics, Sink&& sink) {
  const auto n = inst.num_arms();
  Rng rng(seed);
  std::vector<StateIndex> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = sample_from(inst.chains[i].pi, rng);

  std::optional<double> last;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const ArmIndex arm = policy.step(last);
    if (arm >= n) throw std::logic_error("policy returned an out-of-range arm");
    const double reward = inst.arms[arm].rewards[states[arm]];
    sink(t, arm, reward);
    last = reward;
    if (dynamics == PassiveDynamics::Restless) {
      for (std::size_t i = 0; i < n; ++i) {
        states[i] = sample_next(inst.arms[i].transition, states[i], rng);
      }
    } else {
      states[arm] = sample_next(inst.arms[arm].transition, states[arm], rng);
    }
  }
}

}  // namespace

Trajectory run_episode(const Instance& inst, Policy& policy, std::uint64_t horizon,
                       std::uint64_t seed, PassiveDynamics dynamics, bool record_log) {
  if (horizon < inst.num_arms()) throw ConfigError("horizon must be at least the arm count");
  Trajectory traj;
  traj.actions.reserve(horizon);
  traj.rewards.reserve(horizon);
  if (record_log) {
    policy.set_slot_hook([&traj](const SlotRecord& r) { traj.epoch_log.push_back(r); });
  }
  play(inst, policy, horizon, seed, dynamics, [&](std::uint64_t, ArmIndex arm, double reward) {
    traj.actions.push_back(arm);
    traj.rewards.push_back(reward);
  });
  if (record_log) {
    // Deliver the last reward so the final slot shows up in the log.
    policy.step(traj.rewards.back());
    policy.set_slot_hook({});
  }
  return traj;
}

std::vector<double> pseudo_regret(const Trajectory& traj, const Instance& inst) {
  const double best = inst.stats.best_mean();
  std::vector<double> r(traj.actions.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.actions.size(); ++k) {
    acc += best - inst.mean(traj.actions[k]);
    r[k] = acc;
  }
  return r;
}

std::vector<double> realized_regret(const Trajectory& traj, const Instance& inst) {
  const double best = inst.stats.best_mean();
  std::vector<double> r(traj.rewards.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.rewards.size(); ++k) {
    acc += best - traj.rewards[k];
    r[k] = acc;
  }
  return r;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon, std::size_t count,
                                               std::uint64_t lo) {
  std::vector<std::uint64_t> out;
  if (horizon == 0 || count == 0) return out;
  lo = std::clamp<std::uint64_t>(lo, 1, horizon);
  if (count == 1 || lo == horizon) return {horizon};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(horizon));
  for (std::size_t k = 0; k < count; ++k) {
    const double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
    auto v = static_cast<std::uint64_t>(std::llround(std::exp(x)));
    v = std::clamp<std::uint64_t>(v, lo, horizon);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  out.back() = horizon;
  return out;
}

void simulate_run(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                  std::uint64_t master_seed, std::uint64_t run,
                  std::span<const std::uint64_t> checkpoints, std::span<double> pseudo_out,
                  std::span<double> realized_out) {
  const std::uint64_t seed = derive_seed(master_seed, run);
  auto policy = make_policy(cfg, inst, seed);
  const double best = inst.stats.best_mean();
  double pseudo = 0.0;
  double realized = 0.0;
  std::size_t next = 0;
  play(inst, *policy, horizon, seed, PassiveDynamics::Restless,
       [&](std::uint64_t t, ArmIndex arm, double reward) {
         pseudo += best - inst.mean(arm);
         realized += best - reward;
         while (next < checkpoints.size() && checkpoints[next] == t) {
           pseudo_out[next] = pseudo;
           realized_out[next] = realized;
           ++next;
         }
       });
}

RunCurves simulate_runs(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                        std::uint64_t runs, std::uint64_t master_seed,
                        std::span<const std::uint64_t> checkpoints, unsigned threads) {
  if (runs == 0) throw ConfigError("runs must be at least 1");
  if (horizon < inst.num_arms()) throw ConfigError("horizon must be at least the arm count");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      (!checkpoints.empty() && (checkpoints.front() == 0 || checkpoints.back() > horizon))) {
    throw ConfigError("checkpoints must be increasing and within [1, horizon]");
  }
  // Fail fast on configuration errors before spawning workers.
  (void)make_policy(cfg, inst, 0);

  RunCurves out;
  out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  out.pseudo.assign(runs, std::vector<double>(checkpoints.size(), 0.0));
  out.realized.assign(runs, std::vector<double>(checkpoints.size(), 0.0));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, runs));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const auto r = next.fetch_add(1);
      if (r >= runs || failed.load()) return;
      try {
        simulate_run(inst, cfg, horizon, master_seed, r, checkpoints, out.pseudo[r],
                     out.realized[r]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

void mean_and_se(const std::vector<std::vector<double>>& rows, std::size_t col, double& mean,
                 double& se) {
  const auto n = rows.size();
  double sum = 0.0;
  for (const auto& row : rows) sum += row[col];
  mean = sum / static_cast<double>(n);
  if (n < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (const auto& row : rows) ss += (row[col] - mean) * (row[col] - mean);
  se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

RegretCurve aggregate(std::string policy, const RunCurves& runs) {
  RegretCurve c;
  c.policy = std::move(policy);
  c.checkpoints = runs.checkpoints;
  const auto m = runs.checkpoints.size();
  c.mean_regret.resize(m);
  c.std_err.resize(m);
  c.normalized.resize(m);
  c.realized_mean.resize(m);
  c.realized_std_err.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    mean_and_se(runs.pseudo, k, c.mean_regret[k], c.std_err[k]);
    mean_and_se(runs.realized, k, c.realized_mean[k], c.realized_std_err[k]);
    const double log_t = std::log(static_cast<double>(c.checkpoints[k]));
    c.normalized[k] = log_t > 0.0 ? c.mean_regret[k] / log_t : 0.0;
  }
  return c;
}

RegretCurve monte_carlo(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                        std::uint64_t runs, std::uint64_t master_seed,
                        std::span<const std::uint64_t> checkpoints, unsigned threads) {
  auto per_run = simulate_runs(inst, cfg, horizon, runs, master_seed, checkpoints, threads);
  return aggregate(std::string(to_string(cfg.kind)), per_run);
}

void write_csv(std::ostream& os, std::span<const RegretCurve> curves) {
  os << kCsvHeader << '\n';
  char buf[160];
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.checkpoints.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%llu,%s,%.10g,%.10g,%.10g\n",
                    static_cast<unsigned long long>(c.checkpoints[k]), c.policy.c_str(),
                    c.mean_regret[k], c.std_err[k], c.normalized[k]);
      os << buf;
    }
  }
}

}  // namespace rmab
