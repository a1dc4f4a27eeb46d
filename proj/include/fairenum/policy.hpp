#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fairenum {

/// Largest admissible failure tolerance: the double nearest to 1/e.
inline constexpr double kMaxEpsilon = 0.36787944117144233;

/// Failure tolerance ε in (0, 1/e].
class FailureTolerance {
 public:
  /// Throws std::domain_error if epsilon is outside (0, 1/e] or not finite.
  explicit FailureTolerance(double epsilon);

  double value() const noexcept { return epsilon_; }

  friend bool operator==(const FailureTolerance&, const FailureTolerance&) = default;

 private:
  double epsilon_;
};

/// Number of draws after which fewer than `m` distinct elements means the
/// set is exhausted with failure probability at most `epsilon`:
/// ceil(m * ln(m / epsilon)).
///
/// Throws std::domain_error if m < 1 or epsilon is outside (0, 1/e].
std::uint64_t lemma1_threshold(std::uint64_t m, double epsilon);

/// ceil(m * ln(m * budget_divisor / epsilon)), i.e. the threshold with the
/// failure budget split evenly over `budget_divisor` checks.
std::uint64_t split_budget_threshold(std::uint64_t m, std::uint64_t budget_divisor,
                                     double epsilon);

/// A strictly increasing list of checkpoints [m_1, ..., m_M] together with the
/// failure tolerance. Thresholds L_i are computed once at construction.
class CheckpointSchedule {
 public:
  /// Throws std::invalid_argument for an empty, non-positive or
  /// non-increasing list and std::domain_error for a bad epsilon.
  CheckpointSchedule(std::vector<std::uint64_t> checkpoints, FailureTolerance epsilon);

  /// [2^1, 2^2, ..., 2^10] with ε = 0.01.
  static CheckpointSchedule powers_of_two(unsigned max_exponent = 10, double epsilon = 0.01);

  std::size_t size() const noexcept { return checkpoints_.size(); }
  std::span<const std::uint64_t> checkpoints() const noexcept { return checkpoints_; }
  std::span<const std::uint64_t> thresholds() const noexcept { return thresholds_; }
  FailureTolerance epsilon() const noexcept { return epsilon_; }

  /// m_i for 1-based i.
  std::uint64_t checkpoint(std::size_t i) const;
  /// L_i for 1-based i; throws std::out_of_range.
  std::uint64_t threshold(std::size_t i) const;

  std::uint64_t largest() const noexcept { return checkpoints_.back(); }

  /// 1-based index k with m_{k-1} < n <= m_k, or 0 if n > m_M.
  std::size_t covering_index(std::uint64_t n) const noexcept;

 private:
  std::vector<std::uint64_t> checkpoints_;
  std::vector<std::uint64_t> thresholds_;
  FailureTolerance epsilon_;
};

/// L_i of `schedule` for 1-based `i`. Equals lemma1_threshold(m_i, ε / M).
std::uint64_t checkpoint_threshold(const CheckpointSchedule& schedule, std::size_t i);

}  // namespace fairenum
