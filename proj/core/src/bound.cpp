#include "rmab/bound.hpp"

#include <cmath>
#include <limits>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

const double kLn4 = std::log(4.0);

}  // namespace

std::vector<std::size_t> k_set_of(std::span<const double> mu_sorted, double epsilon) {
  std::vector<std::size_t> k;
  if (mu_sorted.size() < 2) return k;
  const double top = mu_sorted[0] - mu_sorted[1];
  for (std::size_t pos = 2; pos <= mu_sorted.size(); ++pos) {
    const double g = mu_sorted[0] - mu_sorted[pos - 1];
    if (g * g - 2.0 * epsilon > top * top) k.push_back(pos);
  }
  return k;
}

BoundConstants bound_constants(const InstanceStats& stats, std::span<const ArmSpec> arms,
                               std::span<const ChainStats> chains) {
  if (!(stats.epsilon > 0.0)) throw ConfigError("the regret bound requires epsilon > 0");
  if (!(stats.delta > 0.0)) throw ConfigError("the regret bound requires delta > 0");

  const double big_l = stats.big_l;
  const double big_i = stats.big_i;
  const double eps = stats.epsilon;
  const double root_2eps = std::sqrt(2.0 * eps);
  const auto n = stats.n_arms;
  const ArmIndex best = stats.sigma[0];

  BoundConstants bc;
  bc.k_set = k_set_of(stats.mu_sorted, eps);
  std::vector<bool> in_k(n + 1, false);
  for (auto pos : bc.k_set) in_k[pos] = true;

  // Per-arm factor of the C1 inner sum: 1/ln 2 + sqrt(2) gap_k sqrt(L) |S_k| / (10 sum_s s).
  auto c1_term = [&](ArmIndex k) {
    return 1.0 / std::log(2.0) + std::sqrt(2.0) * chains[k].gap * std::sqrt(big_l) *
                                     static_cast<double>(arms[k].num_states()) /
                                     (10.0 * chains[k].reward_sum);
  };

  bc.d_bar.assign(n, std::numeric_limits<double>::infinity());
  double c1_sum = 0.0;
  double c2_sum = 0.0;
  double hit_sum = 0.0;
  for (std::size_t pos = 2; pos <= n; ++pos) {
    const ArmIndex arm = stats.sigma[pos - 1];
    const double g = stats.mu_sorted[0] - stats.mu_sorted[pos - 1];
    bc.d_bar[pos - 1] = 4.0 * big_l / (g * g);

    c1_sum += g / stats.pi_min * (c1_term(best) + c1_term(arm));
    hit_sum += g * chains[arm].max_hit;

    if (in_k[pos]) {
      const double d_max = 4.0 * big_l / (g * g - 2.0 * eps);
      bc.d_bar_max.push_back(d_max);
      const double rate_term =
          4.0 * big_l / (g + root_2eps) + 4.0 * big_l * root_2eps / (g * g - 2.0 * eps);
      c2_sum += std::max(g * 2.0 / big_i, rate_term);
    } else {
      c2_sum += g * std::max(2.0 / big_i, 4.0 * big_l / stats.delta);
    }
  }
  bc.c1 = stats.a_max + 3.0 * c1_sum;
  bc.c2 = 4.0 * c2_sum;
  bc.log_log_coeff = static_cast<double>(n) * stats.a_max + hit_sum;
  return bc;
}

BoundConstants bound_constants(const Instance& inst) {
  return bound_constants(inst.stats, inst.arms, inst.chains);
}

double regret_bound(double t, const BoundConstants& bc, double offset) {
  if (!(t >= 3.0)) throw DomainError("the regret bound needs t >= 3");
  const double ln_t = std::log(t);
  return bc.c1 * ln_t / kLn4 + bc.c2 * ln_t + bc.log_log_coeff * std::log(ln_t) / kLn4 + offset;
}

double bound_log_slope(const BoundConstants& bc) { return bc.c1 / kLn4 + bc.c2; }

}  // namespace rmab
