#pragma once

// Restless environment loop, pseudo-regret and Monte-Carlo aggregation.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmab/asr.hpp"
#include "rmab/markov.hpp"
#include "rmab/policy.hpp"

namespace rmab {

enum class PassiveDynamics {
  Restless,  // every arm transitions every slot
  Rested,    // only the played arm transitions (diagnostics)
};

enum class PolicyKind { Asr, Dsee, Rca, Oracle, Random };

std::string_view to_string(PolicyKind k);
/// Throws ConfigError on unknown names.
PolicyKind parse_policy_kind(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Asr;
  AsrMode mode = AsrMode::Practical;
  double epsilon = 0.0;
  double delta = 0.0;                 // ASR theoretical mode and DSEE
  std::optional<double> l_override;   // replaces the true-parameter L everywhere
  double baseline_scale = 1.0;        // DSEE rate and RCA radius multiplier
};

/// Builds a fresh policy for one run. `seed` feeds randomized policies only.
/// Configuration problems surface here as ConfigError.
std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, const Instance& inst,
                                    std::uint64_t seed);

struct Trajectory {
  std::vector<ArmIndex> actions;
  std::vector<double> rewards;
  std::vector<SlotRecord> epoch_log;  // filled only when requested
};

/// Plays `horizon` slots. Initial arm states are drawn from the stationary
/// distributions; given the seed the trajectory is fully deterministic.
Trajectory run_episode(const Instance& inst, Policy& policy, std::uint64_t horizon,
                       std::uint64_t seed, PassiveDynamics dynamics = PassiveDynamics::Restless,
                       bool record_log = false);

/// r(t) = t mu* - sum_{tau <= t} mu_{a(tau)}, for t = 1..T (index t-1).
std::vector<double> pseudo_regret(const Trajectory& traj, const Instance& inst);

/// t mu* - R(t), using the rewards actually observed.
std::vector<double> realized_regret(const Trajectory& traj, const Instance& inst);

/// `count` log-spaced integer checkpoints in [min(lo, horizon), horizon],
/// deduplicated and increasing.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon, std::size_t count = 50,
                                               std::uint64_t lo = 100);

/// Per-run regret sampled at checkpoints; row r belongs to run r.
struct RunCurves {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<double>> pseudo;
  std::vector<std::vector<double>> realized;
};

struct RegretCurve {
  std::string policy;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_regret;
  std::vector<double> std_err;
  std::vector<double> normalized;  // mean_regret / ln t
  std::vector<double> realized_mean;
  std::vector<double> realized_std_err;
};

/// One run's regret at the checkpoints, seeded with derive_seed(master, run).
void simulate_run(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                  std::uint64_t master_seed, std::uint64_t run,
                  std::span<const std::uint64_t> checkpoints, std::span<double> pseudo_out,
                  std::span<double> realized_out);

/// Runs `runs` independent episodes on up to `threads` workers (0 = hardware
/// concurrency). Results are stored by run index, so they do not depend on
/// scheduling.
RunCurves simulate_runs(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                        std::uint64_t runs, std::uint64_t master_seed,
                        std::span<const std::uint64_t> checkpoints, unsigned threads = 0);

/// Mean and standard error (sample sd / sqrt(n); 0 for one run) in run order.
RegretCurve aggregate(std::string policy, const RunCurves& runs);

RegretCurve monte_carlo(const Instance& inst, const PolicyConfig& cfg, std::uint64_t horizon,
                        std::uint64_t runs, std::uint64_t master_seed,
                        std::span<const std::uint64_t> checkpoints, unsigned threads = 0);

inline constexpr std::string_view kCsvHeader = "t,policy,mean_regret,std_err,normalized";

/// Writes the header followed by one row per (curve, checkpoint).
void write_csv(std::ostream& os, std::span<const RegretCurve> curves);

}  // namespace rmab
