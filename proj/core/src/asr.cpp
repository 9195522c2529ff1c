#include "rmab/asr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Init: return "init";
    case Phase::Sb1: return "sb1";
    case Phase::Sb2: return "sb2";
    case Phase::Close: return "close";
    case Phase::Explore: return "explore";
    case Phase::Exploit: return "exploit";
    case Phase::Fixed: return "fixed";
  }
  return "?";
}

AsrConfig make_asr_config(AsrMode mode, const Instance& inst, double epsilon, double delta,
                          std::optional<double> l_override) {
  AsrConfig cfg;
  cfg.mode = mode;
  cfg.big_l = l_override.value_or(inst.stats.big_l);
  if (!(cfg.big_l > 0.0)) throw ConfigError("L must be positive");
  if (mode == AsrMode::Practical) return cfg;

  if (!(epsilon > 0.0)) throw ConfigError("theoretical mode requires epsilon > 0");
  if (!(delta > 0.0)) throw ConfigError("theoretical mode requires delta > 0");
  const double top_gap = inst.stats.mu_sorted[0] - inst.stats.mu_sorted[1];
  if (!(delta < top_gap * top_gap)) {
    std::ostringstream os;
    os << "delta = " << delta << " must be below the squared top-two mean gap "
       << top_gap * top_gap;
    throw ConfigError(os.str());
  }
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.big_i = min_rate_i(epsilon, inst.stats.gap_min, inst.stats.r_max, inst.stats.cap_s_max,
                         inst.stats.pi_hat_max);
  return cfg;
}

std::vector<double> AsrState::sb2_means() const {
  std::vector<double> m(arms.size());
  std::transform(arms.begin(), arms.end(), m.begin(),
                 [](const AsrArmState& a) { return a.sb2_mean(); });
  return m;
}

double d_hat(const AsrConfig& cfg, std::span<const double> s_tilde, ArmIndex i) {
  const double best = *std::max_element(s_tilde.begin(), s_tilde.end());
  const double gap = best - s_tilde[i];
  const double four_l = 4.0 * cfg.big_l;

  if (cfg.mode == AsrMode::Theoretical) {
    return four_l / std::max(cfg.delta, gap * gap - cfg.epsilon);
  }
  if (gap > 0.0) return four_l / (gap * gap);

  // Arm i is the leader: distinguish it from the runner-up.
  double runner_up = -kInf;
  for (std::size_t j = 0; j < s_tilde.size(); ++j) {
    if (j != i) runner_up = std::max(runner_up, s_tilde[j]);
  }
  const double lead = best - runner_up;
  return lead > 0.0 ? four_l / (lead * lead) : kInf;
}

double exploration_threshold(const AsrConfig& cfg, std::span<const double> s_tilde, ArmIndex i,
                             std::uint64_t t) {
  const double log_t = std::log(static_cast<double>(t));
  if (log_t <= 0.0) return 0.0;
  double rate = d_hat(cfg, s_tilde, i);
  if (cfg.mode == AsrMode::Theoretical) rate = std::max(rate, 2.0 / cfg.big_i);
  return rate * log_t;
}

bool needs_exploration(const AsrConfig& cfg, const AsrState& state, ArmIndex i, std::uint64_t t) {
  const auto means = state.sb2_means();
  return static_cast<double>(state.arms[i].v_count) <= exploration_threshold(cfg, means, i, t);
}

EpochChoice select_epoch(const AsrConfig& cfg, const AsrState& state) {
  const auto means = state.sb2_means();
  std::optional<ArmIndex> pick;
  for (ArmIndex i = 0; i < state.arms.size(); ++i) {
    const auto v = state.arms[i].v_count;
    if (pick && state.arms[*pick].v_count <= v) continue;
    if (static_cast<double>(v) <= exploration_threshold(cfg, means, i, state.t)) pick = i;
  }
  return {pick};
}

AsrPolicy::AsrPolicy(AsrConfig cfg, const Instance& inst) : cfg_(cfg) {
  rewards_.reserve(inst.num_arms());
  for (const auto& a : inst.arms) rewards_.push_back(a.rewards);
  state_.arms.resize(inst.num_arms());
}

ArmIndex AsrPolicy::current_arm() const {
  return std::visit(overloaded{
                        [](const asr_phase::Boundary&) -> ArmIndex { return 0; },
                        [](const auto& p) -> ArmIndex { return p.arm; },
                    },
                    state_.phase);
}

void AsrPolicy::absorb(double reward) {
  const ArmIndex arm = current_arm();
  const auto& values = rewards_[arm];
  const auto it = std::find(values.begin(), values.end(), reward);
  if (it == values.end()) {
    std::ostringstream os;
    os << "reward " << reward << " is not a state of arm " << arm;
    throw ModelMismatchError(os.str());
  }
  const auto s = static_cast<StateIndex>(it - values.begin());
  auto& a = state_.arms[arm];
  const auto t = state_.t;

  std::visit(
      overloaded{
          [&](asr_phase::Init& p) {
            emit(SlotRecord{t, Phase::Init, arm, reward, EpochKind::Exploration});
            a.v_count = 1;
            a.v_sum = reward;
            a.vw_sum = reward;
            a.gamma_last = s;
            a.n_explore = 1;
            if (p.arm + 1 < state_.arms.size()) {
              p.arm += 1;
            } else {
              state_.init_done = true;
              state_.phase = asr_phase::Boundary{};
            }
          },
          [&](asr_phase::Sb1&) {
            emit(SlotRecord{t, Phase::Sb1, arm, reward, EpochKind::Exploration});
            if (s == a.gamma_last) state_.phase = asr_phase::Sb2{arm, pow4(a.n_explore)};
          },
          [&](asr_phase::Sb2& p) {
            emit(SlotRecord{t, Phase::Sb2, arm, reward, EpochKind::Exploration});
            ++a.v_count;
            a.v_sum += reward;
            a.vw_sum += reward;
            if (--p.remaining == 0) {
              a.gamma_last = s;
              ++a.n_explore;
              state_.phase = asr_phase::Boundary{};
            }
          },
          [&](asr_phase::Exploit& p) {
            emit(SlotRecord{t, Phase::Exploit, arm, reward, EpochKind::Exploitation});
            ++a.w_count;
            a.vw_sum += reward;
            if (--p.remaining == 0) state_.phase = asr_phase::Boundary{};
          },
          [](asr_phase::Boundary&) {},
      },
      state_.phase);
}

void AsrPolicy::enter_epoch() {
  const auto choice = select_epoch(cfg_, state_);
  if (choice.explore) {
    const ArmIndex i = *choice.explore;
    state_.phase = asr_phase::Sb1{i};
    emit(EpochRecord{state_.t, EpochKind::Exploration, i, 0, state_.arms[i].n_explore});
    return;
  }
  ++state_.n_exploit;
  ArmIndex best = 0;
  for (ArmIndex i = 1; i < state_.arms.size(); ++i) {
    if (state_.arms[i].full_mean() > state_.arms[best].full_mean()) best = i;
  }
  const auto length = 2 * pow4(state_.n_exploit - 1);
  state_.phase = asr_phase::Exploit{best, length};
  emit(EpochRecord{state_.t, EpochKind::Exploitation, best, length, state_.n_exploit});
}

ArmIndex AsrPolicy::step(std::optional<double> last_reward) {
  if (state_.t > 0) {
    if (!last_reward) throw ModelMismatchError("missing reward for the previous slot");
    absorb(*last_reward);
  }
  ++state_.t;
  if (std::holds_alternative<asr_phase::Boundary>(state_.phase)) enter_epoch();
  return current_arm();
}

}  // namespace rmab
