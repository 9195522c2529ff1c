#pragma once

// Comparator policies: deterministic sequencing of exploration and exploitation
// (DSEE), the regenerative cycle algorithm (RCA), the single-best-arm oracle and
// uniform random play. All share the Policy step interface.

#include <cstdint>
#include <optional>
#include <vector>

#include "rmab/markov.hpp"
#include "rmab/policy.hpp"
#include "rmab/rng.hpp"

namespace rmab {

struct DseeConfig {
  double big_l = 0.0;
  double delta = 0.0;  // lower bound on the squared top-two gap; must be > 0
  double scale = 1.0;  // multiplies the per-arm exploration rate 4L/delta

  double rate() const { return scale * 4.0 * big_l / delta; }
};

struct DseeState {
  std::uint64_t t = 0;
  std::uint64_t exploration_slots = 0;
  std::uint64_t n_explore = 0;  // completed exploration epochs
  std::uint64_t n_exploit = 0;
  std::vector<double> sum;      // exploration observations only
  std::vector<std::uint64_t> count;

  enum class Kind { Boundary, Explore, Exploit } kind = Kind::Boundary;
  ArmIndex arm = 0;             // round-robin cursor during exploration
  std::uint64_t remaining = 0;  // slots left for `arm` in the current block
};

class DseePolicy final : public Policy {
 public:
  DseePolicy(DseeConfig cfg, const Instance& inst);

  ArmIndex step(std::optional<double> last_reward) override;
  std::string_view name() const override { return "dsee"; }

  const DseeState& state() const { return state_; }

 private:
  void enter_epoch();

  DseeConfig cfg_;
  std::size_t n_arms_;
  DseeState state_;
};

struct RcaConfig {
  double big_l = 0.0;
  double scale = 1.0;  // multiplies L inside the confidence radius
};

struct RcaArmState {
  double sum = 0.0;          // completed-cycle samples only
  std::uint64_t count = 0;
  std::uint64_t cycles = 0;
  std::optional<StateIndex> anchor;
};

struct RcaState {
  std::uint64_t t = 0;
  std::vector<RcaArmState> arms;

  enum class Kind { Boundary, Sb1, Sb2 } kind = Kind::Boundary;
  ArmIndex arm = 0;
  double pending_sum = 0.0;  // current cycle, not yet committed
  std::uint64_t pending_count = 0;
};

/// UCB over regenerative cycles. At each cycle boundary the arm maximizing
/// mean + sqrt(scale * L * ln t / count) is played until its anchor state is
/// observed (SB1), then until the anchor recurs. Samples from the opening anchor
/// up to (excluding) the closing anchor form one cycle and are committed only
/// when it closes. The anchor is the first state ever observed on the arm.
class RcaPolicy final : public Policy {
 public:
  RcaPolicy(RcaConfig cfg, const Instance& inst);

  ArmIndex step(std::optional<double> last_reward) override;
  std::string_view name() const override { return "rca"; }

  const RcaState& state() const { return state_; }
  double index(ArmIndex i) const;

 private:
  void absorb(double reward);

  RcaConfig cfg_;
  std::vector<std::vector<double>> rewards_;
  RcaState state_;
};

/// Always plays the arm with the highest stationary mean.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const InstanceStats& stats) : arm_(stats.best_arm()) {}

  ArmIndex step(std::optional<double> last_reward) override;
  std::string_view name() const override { return "oracle"; }

 private:
  ArmIndex arm_;
  std::uint64_t t_ = 0;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::size_t n_arms, std::uint64_t seed) : n_arms_(n_arms), rng_(seed) {}

  ArmIndex step(std::optional<double> last_reward) override;
  std::string_view name() const override { return "random"; }

 private:
  std::size_t n_arms_;
  Rng rng_;
  std::uint64_t t_ = 0;
  ArmIndex last_ = 0;
};

}  // namespace rmab
