#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "rmab/markov.hpp"

namespace rmab {

/// What a policy was doing in a given slot.
enum class Phase : std::uint8_t {
  Init,     // one-sample initialization pass
  Sb1,      // hitting phase; samples are discarded
  Sb2,      // deterministic or regenerative block; samples are kept
  Close,    // RCA: observation that closes a regenerative cycle
  Explore,  // DSEE exploration
  Exploit,
  Fixed,    // oracle / random policies
};

std::string_view to_string(Phase p);

enum class EpochKind : std::uint8_t { Exploration, Exploitation, None };

/// One played slot, reported once its reward is known.
struct SlotRecord {
  std::uint64_t t;
  Phase phase;
  ArmIndex arm;
  double reward;
  EpochKind epoch;
};

/// Emitted at the slot where a policy enters a new epoch, before any sample of
/// that epoch is observed. `length` is 0 when the epoch length is random.
struct EpochRecord {
  std::uint64_t t;
  EpochKind kind;
  ArmIndex arm;
  std::uint64_t length;
  std::uint64_t index;  // per-arm exploration index, or exploitation count
};

using SlotHook = std::function<void(const SlotRecord&)>;
using EpochHook = std::function<void(const EpochRecord&)>;

/// Shared slot-in, arm-out interface. `step` is called once per slot with the
/// reward observed for the arm returned by the previous call (nullopt on the
/// first call) and returns the arm to play now.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual ArmIndex step(std::optional<double> last_reward) = 0;
  virtual std::string_view name() const = 0;

  void set_slot_hook(SlotHook hook) { slot_hook_ = std::move(hook); }
  void set_epoch_hook(EpochHook hook) { epoch_hook_ = std::move(hook); }

 protected:
  void emit(const SlotRecord& r) const {
    if (slot_hook_) slot_hook_(r);
  }
  void emit(const EpochRecord& r) const {
    if (epoch_hook_) epoch_hook_(r);
  }

 private:
  SlotHook slot_hook_;
  EpochHook epoch_hook_;
};

/// 4^k, saturating at 2^62.
constexpr std::uint64_t pow4(std::uint64_t k) noexcept {
  return k >= 31 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << (2 * k));
}

}  // namespace rmab
