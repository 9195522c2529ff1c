#pragma once

// Finite-state Markov reward chains: validation, sampling and the derived
// statistics consumed by the policies, the regret engine and the bound.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rmab/rng.hpp"

namespace rmab {

using StateIndex = std::size_t;
using ArmIndex = std::size_t;

/// One arm: reward value of each state and the row-stochastic transition matrix.
/// State k pays rewards[k]; rewards must be positive and pairwise distinct so a
/// player can identify the state from the reward it receives.
struct ArmSpec {
  std::vector<double> rewards;
  Eigen::MatrixXd transition;

  std::size_t num_states() const { return rewards.size(); }
};

/// Two-state Gilbert-Elliott arm. State 0 is "bad" (reward r0), state 1 is "good" (reward r1).
ArmSpec two_state_arm(double p01, double p10, double r1 = 1.0, double r0 = 0.1);

/// Throws ValidationError or StructureError if `arm` breaks any ArmSpec invariant:
/// rows sum to one within 1e-12, entries in [0,1], positive distinct rewards,
/// irreducible and aperiodic support graph.
void validate_arm(const ArmSpec& arm);

/// Throws ValidationError unless every row of `p` is a probability vector.
void validate_stochastic(const Eigen::MatrixXd& p);

bool is_irreducible(const Eigen::MatrixXd& p);

/// gcd of cycle lengths of the support graph. Requires an irreducible chain.
std::size_t period(const Eigen::MatrixXd& p);

/// Solves pi (P - I) = 0 with sum(pi) = 1. Throws StructureError on reducible input.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p);

/// max_y |(pi P)_y - pi_y|
double stationary_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi);

/// max_{x,y} |pi_x P_xy - pi_y P_yx|
double detailed_balance_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi);

struct SpectralGap {
  double lambda2;
  double gap;
};

/// Second-largest eigenvalue through the symmetric similarity
/// diag(pi)^{1/2} P diag(pi)^{-1/2}. Throws ReversibilityError when detailed
/// balance fails by more than 1e-10.
SpectralGap spectral_gap(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi);

/// Mean hitting times M(x, y) = E[min{n >= 1 : X_n = y} | X_0 = x] for x != y,
/// zero diagonal.
Eigen::MatrixXd mean_hitting_times(const Eigen::MatrixXd& p);

/// Draws the successor of `state` from row `state` of `p`.
StateIndex sample_next(const Eigen::MatrixXd& p, StateIndex state, Rng& rng);

/// Draws from a probability vector.
StateIndex sample_from(const Eigen::VectorXd& dist, Rng& rng);

struct ChainStats {
  Eigen::VectorXd pi;
  double mu = 0.0;        // stationary reward mean
  double lambda2 = 0.0;
  double gap = 1.0;       // 1 - lambda2
  Eigen::MatrixXd hitting;
  double max_hit = 0.0;   // largest off-diagonal hitting time
  double reward_sum = 0.0;
  double a_p = 0.0;       // reward_sum / min_s pi(s)
};

/// Validates `arm` and computes every derived statistic. Single-state arms are
/// accepted with gap 1 and an empty hitting matrix.
ChainStats chain_stats(const ArmSpec& arm);

/// Cross-arm constants. `big_l` and `big_i` are the concentration constants that
/// size the exploration thresholds:
///   big_l = 30 r_max^2 / ((3 - 2 sqrt 2) gap_min)
///   big_i = eps^2 gap_min / (192 (r_max + 2)^2 S_max^2 r_max^2 pi_hat_max^2)
struct InstanceStats {
  std::size_t n_arms = 0;
  double r_max = 0.0;            // max over arms of the state-reward sum
  double s_max = 0.0;            // largest single reward
  std::size_t cap_s_max = 0;     // largest state-space size
  double pi_min = 0.0;
  double pi_hat_max = 0.0;       // max over all states of max{pi, 1 - pi}
  double lambda_max = 0.0;
  double gap_min = 0.0;          // 1 - lambda_max
  double a_max = 0.0;
  double big_l = 0.0;
  double big_i = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<double> mu_sorted;   // descending
  std::vector<ArmIndex> sigma;     // sigma[k] = arm with the (k+1)-th largest mean

  ArmIndex best_arm() const { return sigma.front(); }
  double best_mean() const { return mu_sorted.front(); }
};

double concentration_l(double r_max, double gap_min);
double min_rate_i(double epsilon, double gap_min, double r_max, std::size_t cap_s_max,
                  double pi_hat_max);

/// Throws ConfigError for fewer than two arms, negative epsilon/delta, or
/// delta >= (mu_sorted[0] - mu_sorted[1])^2 when delta > 0.
InstanceStats instance_stats(std::span<const ArmSpec> arms, std::span<const ChainStats> chains,
                             double epsilon, double delta);
InstanceStats instance_stats(std::span<const ArmSpec> arms, double epsilon, double delta);

/// Arms together with everything derived from them.
struct Instance {
  std::vector<ArmSpec> arms;
  std::vector<ChainStats> chains;
  InstanceStats stats;

  std::size_t num_arms() const { return arms.size(); }
  double mean(ArmIndex i) const { return chains[i].mu; }
};

Instance make_instance(std::vector<ArmSpec> arms, double epsilon = 0.0, double delta = 0.0);

/// Index of `reward` in the arm's reward list, or num_states() if absent.
StateIndex state_of_reward(const ArmSpec& arm, double reward);

}  // namespace rmab
