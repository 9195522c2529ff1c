#pragma once

// Finite-sample regret bound of the ASR policy:
//
//   r(t) <= C1 log4(t) + C2 ln(t) + (N A_max + sum_{i>=2} gap_i M_max^{sigma(i)}) log4(ln t) + O(1)
//
// with gap_i = mu_{sigma(1)} - mu_{sigma(i)}. The O(1) term has no published
// constant and is exposed as a caller-supplied offset.

#include <cstdint>
#include <span>
#include <vector>

#include "rmab/markov.hpp"

namespace rmab {

struct BoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  /// Sorted-order positions (1-based, 2..N) whose squared gap minus 2 epsilon
  /// exceeds the squared top-two gap.
  std::vector<std::size_t> k_set;
  double log_log_coeff = 0.0;
  /// d_bar[k] = 4L / gap_{k+1}^2 for sorted position k+1; d_bar[0] is +inf.
  std::vector<double> d_bar;
  /// 4L / (gap_i^2 - 2 eps), aligned with k_set.
  std::vector<double> d_bar_max;
};

/// Members of the index set by its defining inequality.
std::vector<std::size_t> k_set_of(std::span<const double> mu_sorted, double epsilon);

/// Throws ConfigError when epsilon or delta is not positive.
BoundConstants bound_constants(const InstanceStats& stats, std::span<const ArmSpec> arms,
                               std::span<const ChainStats> chains);
BoundConstants bound_constants(const Instance& inst);

/// C1 log4 t + C2 ln t + log_log_coeff log4(ln t) + offset. Throws DomainError for t < 3.
double regret_bound(double t, const BoundConstants& bc, double offset = 0.0);

/// lim_{t -> inf} regret_bound(t) / ln t.
double bound_log_slope(const BoundConstants& bc);

}  // namespace rmab
