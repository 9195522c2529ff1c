#pragma once

// Adaptive Sequencing Rules: exploration epochs (random hitting block SB1 followed
// by a deterministic block SB2 of length 4^k) interleaved with exploitation
// epochs of length 2 * 4^(n-1). The choice between them is made at every epoch
// boundary by comparing each arm's SB2 sample count against its estimated
// required exploration rate times ln t.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rmab/markov.hpp"
#include "rmab/policy.hpp"

namespace rmab {

enum class AsrMode { Theoretical, Practical };

struct AsrConfig {
  AsrMode mode = AsrMode::Practical;
  double epsilon = 0.0;  // Theoretical only
  double delta = 0.0;    // Theoretical only
  double big_l = 0.0;
  double big_i = 0.0;    // Theoretical only; derived from epsilon
};

/// Builds a config from instance constants. `l_override` replaces the
/// true-parameter L. Throws ConfigError when Theoretical mode lacks a positive
/// epsilon or delta (delta is also checked against the top-two gap).
AsrConfig make_asr_config(AsrMode mode, const Instance& inst, double epsilon, double delta,
                          std::optional<double> l_override = std::nullopt);

struct AsrArmState {
  std::uint64_t v_count = 0;  // SB2 (and initialization) samples
  std::uint64_t w_count = 0;  // exploitation samples
  double v_sum = 0.0;
  double vw_sum = 0.0;
  StateIndex gamma_last = 0;  // last state of the most recent exploration epoch
  std::uint64_t n_explore = 0;

  double sb2_mean() const { return v_sum / static_cast<double>(v_count); }
  double full_mean() const { return vw_sum / static_cast<double>(v_count + w_count); }
};

namespace asr_phase {
struct Boundary {};
struct Init {
  ArmIndex arm;
};
struct Sb1 {
  ArmIndex arm;
};
struct Sb2 {
  ArmIndex arm;
  std::uint64_t remaining;
};
struct Exploit {
  ArmIndex arm;
  std::uint64_t remaining;
};
}  // namespace asr_phase

using AsrPhase = std::variant<asr_phase::Boundary, asr_phase::Init, asr_phase::Sb1,
                              asr_phase::Sb2, asr_phase::Exploit>;

struct AsrState {
  std::vector<AsrArmState> arms;
  std::uint64_t n_exploit = 0;
  AsrPhase phase = asr_phase::Init{0};
  std::uint64_t t = 0;  // slot most recently handed out (1-based)
  bool init_done = false;

  std::vector<double> sb2_means() const;
};

/// Estimated required exploration rate of arm `i` given SB2 sample means.
///   Theoretical: 4L / max{delta, (max_j s_j - s_i)^2 - epsilon}
///   Practical:   4L / (max_j s_j - s_i)^2
/// In Practical mode the current leader uses its gap to the runner-up in place
/// of the unknown delta. Any exact tie with the leader yields +infinity.
double d_hat(const AsrConfig& cfg, std::span<const double> s_tilde, ArmIndex i);

/// Exploration threshold max{D_i, 2/I} * ln t (Practical: D_i * ln t). Zero at t = 1.
double exploration_threshold(const AsrConfig& cfg, std::span<const double> s_tilde, ArmIndex i,
                             std::uint64_t t);

/// True when |V_i| <= exploration_threshold, i.e. arm i must be explored at t.
bool needs_exploration(const AsrConfig& cfg, const AsrState& state, ArmIndex i, std::uint64_t t);

struct EpochChoice {
  std::optional<ArmIndex> explore;  // nullopt means exploit

  bool is_exploit() const { return !explore.has_value(); }
};

/// Among arms satisfying the exploration condition at `state.t`, the one with the
/// fewest SB2 samples (lowest index on ties); exploit when none qualifies. Serving
/// the least-sampled arm first keeps an arm with a persistently huge rate
/// estimate from starving the others.
EpochChoice select_epoch(const AsrConfig& cfg, const AsrState& state);

class AsrPolicy final : public Policy {
 public:
  AsrPolicy(AsrConfig cfg, const Instance& inst);

  ArmIndex step(std::optional<double> last_reward) override;
  std::string_view name() const override { return "asr"; }

  const AsrState& state() const { return state_; }
  const AsrConfig& config() const { return cfg_; }

 private:
  void absorb(double reward);
  void enter_epoch();
  ArmIndex current_arm() const;

  AsrConfig cfg_;
  std::vector<std::vector<double>> rewards_;
  AsrState state_;
};

}  // namespace rmab
