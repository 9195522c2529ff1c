#include "rmab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kReversibilityTol = 1e-10;

std::vector<std::vector<std::size_t>> support_graph(const Eigen::MatrixXd& p, bool transpose) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 0.0) {
        if (transpose) {
          adj[y].push_back(x);
        } else {
          adj[x].push_back(y);
        }
      }
    }
  }
  return adj;
}

// BFS distances from node 0; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> bfs_levels(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<std::size_t> level(adj.size(), std::numeric_limits<std::size_t>::max());
  if (adj.empty()) return level;
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto v : adj[u]) {
      if (level[v] == std::numeric_limits<std::size_t>::max()) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  return level;
}

bool all_reached(const std::vector<std::size_t>& level) {
  return std::none_of(level.begin(), level.end(), [](std::size_t l) {
    return l == std::numeric_limits<std::size_t>::max();
  });
}

}  // namespace

ArmSpec two_state_arm(double p01, double p10, double r1, double r0) {
  ArmSpec arm;
  arm.rewards = {r0, r1};
  arm.transition.resize(2, 2);
  arm.transition << 1.0 - p01, p01, p10, 1.0 - p10;
  return arm;
}

void validate_stochastic(const Eigen::MatrixXd& p) {
  if (p.rows() == 0 || p.rows() != p.cols()) {
    throw ValidationError("transition matrix must be square and non-empty");
  }
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      const double v = p(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream os;
        os << "transition row " << r << ": entry " << c << " = " << v << " is outside [0,1]";
        throw ValidationError(os.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      std::ostringstream os;
      os.precision(17);
      os << "transition row " << r << " sums to " << sum << ", expected 1";
      throw ValidationError(os.str());
    }
  }
}

bool is_irreducible(const Eigen::MatrixXd& p) {
  return all_reached(bfs_levels(support_graph(p, false))) &&
         all_reached(bfs_levels(support_graph(p, true)));
}

std::size_t period(const Eigen::MatrixXd& p) {
  const auto adj = support_graph(p, false);
  const auto level = bfs_levels(adj);
  if (!all_reached(level)) {
    throw StructureError("period is only defined for irreducible chains");
  }
  // For an irreducible chain the period is the gcd of level[u] + 1 - level[v]
  // over all support edges u -> v.
  std::size_t g = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (auto v : adj[u]) {
      const auto lu = static_cast<long long>(level[u]);
      const auto lv = static_cast<long long>(level[v]);
      g = std::gcd(g, static_cast<std::size_t>(std::llabs(lu + 1 - lv)));
    }
  }
  return g;
}

void validate_arm(const ArmSpec& arm) {
  const auto n = arm.rewards.size();
  if (n == 0) throw ValidationError("arm has no states");
  if (static_cast<std::size_t>(arm.transition.rows()) != n ||
      static_cast<std::size_t>(arm.transition.cols()) != n) {
    std::ostringstream os;
    os << "transition matrix is " << arm.transition.rows() << "x" << arm.transition.cols()
       << " but the arm has " << n << " reward states";
    throw ValidationError(os.str());
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(arm.rewards[k] > 0.0) || !std::isfinite(arm.rewards[k])) {
      std::ostringstream os;
      os << "reward of state " << k << " must be positive, got " << arm.rewards[k];
      throw ValidationError(os.str());
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (arm.rewards[j] == arm.rewards[k]) {
        std::ostringstream os;
        os << "states " << j << " and " << k << " share reward " << arm.rewards[k];
        throw ValidationError(os.str());
      }
    }
  }
  validate_stochastic(arm.transition);
  if (!is_irreducible(arm.transition)) throw StructureError("chain is not irreducible");
  if (period(arm.transition) != 1) throw StructureError("chain is periodic");
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
  validate_stochastic(p);
  if (!is_irreducible(p)) throw StructureError("chain is not irreducible");
  const Eigen::Index n = p.rows();
  if (n == 1) return Eigen::VectorXd::Ones(1);

  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = a.partialPivLu().solve(b);
  if (!pi.allFinite() || (pi.array() <= 0.0).any()) {
    throw NumericalError("stationary solve produced a non-positive component");
  }
  return pi / pi.sum();
}

double stationary_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  return (p.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd flow = pi.asDiagonal() * p;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

SpectralGap spectral_gap(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  if (p.rows() == 1) return {0.0, 1.0};
  const double residual = detailed_balance_residual(p, pi);
  if (residual > kReversibilityTol) {
    std::ostringstream os;
    os << "chain is not reversible (detailed-balance residual " << residual << ")";
    throw ReversibilityError(os.str());
  }
  const Eigen::VectorXd root = pi.cwiseSqrt();
  Eigen::MatrixXd sym = root.asDiagonal() * p * root.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  // Ascending order; the largest is 1.
  const auto& ev = solver.eigenvalues();
  const double lambda2 = ev(ev.size() - 2);
  return {lambda2, 1.0 - lambda2};
}

Eigen::MatrixXd mean_hitting_times(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return m;
  for (Eigen::Index y = 0; y < n; ++y) {
    // (I - Q) h = 1 where Q is P without row and column y.
    Eigen::MatrixXd a(n - 1, n - 1);
    for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
      if (r == y) continue;
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c == y) continue;
        a(rr, cc) = (r == c ? 1.0 : 0.0) - p(r, c);
        ++cc;
      }
      ++rr;
    }
    const Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(n - 1));
    if (!h.allFinite()) throw NumericalError("hitting-time system is singular");
    for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
      if (r == y) continue;
      m(r, y) = h(rr++);
    }
  }
  return m;
}

StateIndex sample_from(const Eigen::VectorXd& dist, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  StateIndex last_positive = 0;
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    if (dist(k) <= 0.0) continue;
    acc += dist(k);
    last_positive = static_cast<StateIndex>(k);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

StateIndex sample_next(const Eigen::MatrixXd& p, StateIndex state, Rng& rng) {
  const double u = uniform01(rng);
  const auto row = static_cast<Eigen::Index>(state);
  double acc = 0.0;
  StateIndex last_positive = 0;
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    const double v = p(row, k);
    if (v <= 0.0) continue;
    acc += v;
    last_positive = static_cast<StateIndex>(k);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

ChainStats chain_stats(const ArmSpec& arm) {
  validate_arm(arm);
  ChainStats cs;
  const auto n = static_cast<Eigen::Index>(arm.num_states());
  const Eigen::Map<const Eigen::VectorXd> r(arm.rewards.data(), n);

  cs.pi = stationary_distribution(arm.transition);
  cs.mu = r.dot(cs.pi);
  const auto sg = spectral_gap(arm.transition, cs.pi);
  cs.lambda2 = sg.lambda2;
  cs.gap = sg.gap;
  if (n > 1) {
    cs.hitting = mean_hitting_times(arm.transition);
    cs.max_hit = cs.hitting.maxCoeff();
  } else {
    cs.hitting.resize(0, 0);
    cs.max_hit = 0.0;
  }
  cs.reward_sum = r.sum();
  cs.a_p = cs.reward_sum / cs.pi.minCoeff();
  return cs;
}

double concentration_l(double r_max, double gap_min) {
  return 30.0 * r_max * r_max / ((3.0 - 2.0 * std::sqrt(2.0)) * gap_min);
}

double min_rate_i(double epsilon, double gap_min, double r_max, std::size_t cap_s_max,
                  double pi_hat_max) {
  if (epsilon == 0.0) return 0.0;
  const double s = static_cast<double>(cap_s_max);
  const double denom = 192.0 * (r_max + 2.0) * (r_max + 2.0) * s * s * r_max * r_max *
                       pi_hat_max * pi_hat_max;
  return epsilon * epsilon * gap_min / denom;
}

InstanceStats instance_stats(std::span<const ArmSpec> arms, std::span<const ChainStats> chains,
                             double epsilon, double delta) {
  if (arms.size() < 2) throw ConfigError("at least two arms are required");
  if (arms.size() != chains.size()) throw ConfigError("arm and chain-stat counts differ");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (!(delta >= 0.0)) throw ConfigError("delta must be non-negative");

  InstanceStats st;
  st.n_arms = arms.size();
  st.epsilon = epsilon;
  st.delta = delta;
  st.pi_min = std::numeric_limits<double>::infinity();
  st.lambda_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto& arm = arms[i];
    const auto& cs = chains[i];
    st.r_max = std::max(st.r_max, cs.reward_sum);
    st.s_max = std::max(st.s_max, *std::max_element(arm.rewards.begin(), arm.rewards.end()));
    st.cap_s_max = std::max(st.cap_s_max, arm.num_states());
    st.pi_min = std::min(st.pi_min, cs.pi.minCoeff());
    for (Eigen::Index s = 0; s < cs.pi.size(); ++s) {
      st.pi_hat_max = std::max(st.pi_hat_max, std::max(cs.pi(s), 1.0 - cs.pi(s)));
    }
    st.lambda_max = std::max(st.lambda_max, cs.lambda2);
    st.a_max = std::max(st.a_max, cs.a_p);
  }
  st.gap_min = 1.0 - st.lambda_max;
  st.big_l = concentration_l(st.r_max, st.gap_min);
  st.big_i = min_rate_i(epsilon, st.gap_min, st.r_max, st.cap_s_max, st.pi_hat_max);

  st.sigma.resize(arms.size());
  std::iota(st.sigma.begin(), st.sigma.end(), ArmIndex{0});
  std::stable_sort(st.sigma.begin(), st.sigma.end(),
                   [&](ArmIndex a, ArmIndex b) { return chains[a].mu > chains[b].mu; });
  for (auto i : st.sigma) st.mu_sorted.push_back(chains[i].mu);

  if (delta > 0.0) {
    const double top_gap = st.mu_sorted[0] - st.mu_sorted[1];
    if (!(delta < top_gap * top_gap)) {
      std::ostringstream os;
      os << "delta = " << delta << " must be below the squared top-two mean gap "
         << top_gap * top_gap;
      throw ConfigError(os.str());
    }
  }
  return st;
}

InstanceStats instance_stats(std::span<const ArmSpec> arms, double epsilon, double delta) {
  std::vector<ChainStats> chains;
  chains.reserve(arms.size());
  for (const auto& a : arms) chains.push_back(chain_stats(a));
  return instance_stats(arms, chains, epsilon, delta);
}

Instance make_instance(std::vector<ArmSpec> arms, double epsilon, double delta) {
  Instance inst;
  inst.arms = std::move(arms);
  inst.chains.reserve(inst.arms.size());
  for (const auto& a : inst.arms) inst.chains.push_back(chain_stats(a));
  inst.stats = instance_stats(inst.arms, inst.chains, epsilon, delta);
  return inst;
}

StateIndex state_of_reward(const ArmSpec& arm, double reward) {
  for (std::size_t k = 0; k < arm.rewards.size(); ++k) {
    if (arm.rewards[k] == reward) return k;
  }
  return arm.rewards.size();
}

}  // namespace rmab
