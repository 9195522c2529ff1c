#include "rmab/baselines.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

StateIndex lookup_state(const std::vector<double>& values, double reward, ArmIndex arm) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == reward) return k;
  }
  std::ostringstream os;
  os << "reward " << reward << " is not a state of arm " << arm;
  throw ModelMismatchError(os.str());
}

double log_or_zero(std::uint64_t t) { return t > 1 ? std::log(static_cast<double>(t)) : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// DSEE

DseePolicy::DseePolicy(DseeConfig cfg, const Instance& inst)
    : cfg_(cfg), n_arms_(inst.num_arms()) {
  if (!(cfg_.delta > 0.0)) throw ConfigError("DSEE requires delta > 0");
  if (!(cfg_.big_l > 0.0)) throw ConfigError("DSEE requires L > 0");
  if (!(cfg_.scale > 0.0)) throw ConfigError("DSEE exploration scale must be positive");
  state_.sum.assign(n_arms_, 0.0);
  state_.count.assign(n_arms_, 0);
}

void DseePolicy::enter_epoch() {
  auto& st = state_;
  const double threshold = cfg_.rate() * static_cast<double>(n_arms_) * log_or_zero(st.t);
  if (static_cast<double>(st.exploration_slots) <= threshold) {
    st.kind = DseeState::Kind::Explore;
    st.arm = 0;
    st.remaining = pow4(st.n_explore);
    emit(EpochRecord{st.t, EpochKind::Exploration, 0, n_arms_ * st.remaining, st.n_explore});
    return;
  }
  ++st.n_exploit;
  ArmIndex best = 0;
  auto mean = [&](ArmIndex i) { return st.sum[i] / static_cast<double>(st.count[i]); };
  for (ArmIndex i = 1; i < n_arms_; ++i) {
    if (mean(i) > mean(best)) best = i;
  }
  st.kind = DseeState::Kind::Exploit;
  st.arm = best;
  st.remaining = 2 * pow4(st.n_exploit - 1);
  emit(EpochRecord{st.t, EpochKind::Exploitation, best, st.remaining, st.n_exploit});
}

ArmIndex DseePolicy::step(std::optional<double> last_reward) {
  auto& st = state_;
  if (st.t > 0) {
    if (!last_reward) throw ModelMismatchError("missing reward for the previous slot");
    const double r = *last_reward;
    if (st.kind == DseeState::Kind::Explore) {
      emit(SlotRecord{st.t, Phase::Explore, st.arm, r, EpochKind::Exploration});
      st.sum[st.arm] += r;
      ++st.count[st.arm];
      ++st.exploration_slots;
      if (--st.remaining == 0) {
        if (++st.arm == n_arms_) {
          ++st.n_explore;
          st.kind = DseeState::Kind::Boundary;
        } else {
          st.remaining = pow4(st.n_explore);
        }
      }
    } else if (st.kind == DseeState::Kind::Exploit) {
      emit(SlotRecord{st.t, Phase::Exploit, st.arm, r, EpochKind::Exploitation});
      if (--st.remaining == 0) st.kind = DseeState::Kind::Boundary;
    }
  }
  ++st.t;
  if (st.kind == DseeState::Kind::Boundary) enter_epoch();
  return st.arm;
}

// ---------------------------------------------------------------------------
// RCA

RcaPolicy::RcaPolicy(RcaConfig cfg, const Instance& inst) : cfg_(cfg) {
  if (!(cfg_.big_l > 0.0)) throw ConfigError("RCA requires L > 0");
  if (!(cfg_.scale > 0.0)) throw ConfigError("RCA exploration scale must be positive");
  for (const auto& a : inst.arms) rewards_.push_back(a.rewards);
  state_.arms.resize(inst.num_arms());
}

double RcaPolicy::index(ArmIndex i) const {
  const auto& a = state_.arms[i];
  if (a.count == 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(a.count);
  return a.sum / n + std::sqrt(cfg_.scale * cfg_.big_l * log_or_zero(state_.t) / n);
}

void RcaPolicy::absorb(double reward) {
  auto& st = state_;
  auto& a = st.arms[st.arm];
  const StateIndex s = lookup_state(rewards_[st.arm], reward, st.arm);

  if (st.kind == RcaState::Kind::Sb1) {
    if (!a.anchor) a.anchor = s;
    if (s == *a.anchor) {
      emit(SlotRecord{st.t, Phase::Sb2, st.arm, reward, EpochKind::Exploration});
      st.kind = RcaState::Kind::Sb2;
      st.pending_sum = reward;
      st.pending_count = 1;
    } else {
      emit(SlotRecord{st.t, Phase::Sb1, st.arm, reward, EpochKind::Exploration});
    }
    return;
  }
  if (s == *a.anchor) {
    emit(SlotRecord{st.t, Phase::Close, st.arm, reward, EpochKind::Exploration});
    a.sum += st.pending_sum;
    a.count += st.pending_count;
    ++a.cycles;
    st.pending_sum = 0.0;
    st.pending_count = 0;
    st.kind = RcaState::Kind::Boundary;
  } else {
    emit(SlotRecord{st.t, Phase::Sb2, st.arm, reward, EpochKind::Exploration});
    st.pending_sum += reward;
    ++st.pending_count;
  }
}

ArmIndex RcaPolicy::step(std::optional<double> last_reward) {
  auto& st = state_;
  if (st.t > 0) {
    if (!last_reward) throw ModelMismatchError("missing reward for the previous slot");
    absorb(*last_reward);
  }
  ++st.t;
  if (st.kind == RcaState::Kind::Boundary) {
    ArmIndex best = 0;
    double best_index = index(0);
    for (ArmIndex i = 1; i < st.arms.size(); ++i) {
      const double v = index(i);
      if (v > best_index) {
        best = i;
        best_index = v;
      }
    }
    st.arm = best;
    st.kind = RcaState::Kind::Sb1;
    emit(EpochRecord{st.t, EpochKind::Exploration, best, 0, st.arms[best].cycles});
  }
  return st.arm;
}

// ---------------------------------------------------------------------------
// Oracle and random

ArmIndex OraclePolicy::step(std::optional<double> last_reward) {
  if (t_ > 0 && last_reward) emit(SlotRecord{t_, Phase::Fixed, arm_, *last_reward, EpochKind::None});
  ++t_;
  return arm_;
}

ArmIndex RandomPolicy::step(std::optional<double> last_reward) {
  if (t_ > 0 && last_reward) emit(SlotRecord{t_, Phase::Fixed, last_, *last_reward, EpochKind::None});
  ++t_;
  last_ = static_cast<ArmIndex>(uniform01(rng_) * static_cast<double>(n_arms_));
  if (last_ >= n_arms_) last_ = n_arms_ - 1;
  return last_;
}

}  // namespace rmab
