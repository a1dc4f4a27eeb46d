#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairenum/policy.hpp"

namespace fairenum {

/// Distribution of the number of distinct elements seen after t uniform draws
/// from a set of size n, as a Markov chain on the distinct count. Keeps only
/// the current row (O(n) memory).
class DistinctCountChain {
 public:
  /// Throws std::domain_error if n == 0.
  explicit DistinctCountChain(std::uint64_t n);

  std::uint64_t set_size() const noexcept { return n_; }
  std::uint64_t samples() const noexcept { return t_; }

  /// row()[i] = P(D_t = i), for 0 <= i <= n.
  std::span<const double> row() const noexcept { return row_; }
  std::span<double> mutable_row() noexcept { return row_; }

  void step();
  void advance_to(std::uint64_t t);

  /// P(D_t < m) = P(T_m > t).
  double mass_below(std::uint64_t m) const noexcept;

 private:
  std::uint64_t n_;
  std::uint64_t t_ = 0;
  std::vector<double> row_;
  std::vector<double> scratch_;
};

/// Full table p[t][i] = P(exactly i distinct after t draws | |X| = n) for
/// 0 <= t <= horizon.
class TailTable {
 public:
  TailTable(std::uint64_t n, std::uint64_t horizon);

  std::uint64_t set_size() const noexcept { return n_; }
  std::uint64_t horizon() const noexcept { return horizon_; }

  double p(std::uint64_t t, std::uint64_t i) const;
  std::span<const double> row(std::uint64_t t) const;

  /// P(T_m > tau | |X| = n). Throws std::domain_error if m > n or m < 1,
  /// std::out_of_range if tau > horizon.
  double tail(std::uint64_t m, std::uint64_t tau) const;

 private:
  std::uint64_t n_;
  std::uint64_t horizon_;
  std::vector<double> cells_;  // (horizon + 1) x (n + 1), row-major
};

/// Exact P(T_m > tau | |X| = n). Throws std::domain_error unless 1 <= m <= n.
double tail_probability(std::uint64_t m, std::uint64_t tau, std::uint64_t n);

/// E[T_m | |X| = n] = n * sum_{k=n-m+1}^{n} 1/k.
double exact_expected_samples(std::uint64_t m, std::uint64_t n);

/// Union bound n * exp(-tau / n) on P(T_n > tau | |X| = n).
double lemma2_bound(std::uint64_t n, std::uint64_t tau);

/// ln g_tau(x) with g_tau(x) = x^{-tau} * prod_{i=1}^{m} (x - (i - 1)).
/// Throws std::domain_error if x < m or m < 1.
double log_g(std::uint64_t tau, std::uint64_t m, double x);

/// ln rho_tau = ln(g_tau(n) / g_tau(m)) = ln C(n, m) + tau * (ln m - ln n).
double log_rho(std::uint64_t tau, std::uint64_t m, std::uint64_t n);

/// Exact probability that enumerate_improved fails to collect all of a set
/// of size n under `schedule`. Mass with fewer than m_i distinct elements
/// leaves at checkpoint i; mass still running after the last checkpoint
/// counts as a failure unless it has collected everything.
double exact_failure_probability(std::uint64_t n, const CheckpointSchedule& schedule);

}  // namespace fairenum
