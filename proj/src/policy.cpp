#include "fairenum/policy.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace fairenum {

namespace {

// Distance from an integer below which the double result is not trusted.
constexpr double kNearIntegerBand = 1e-9;

std::uint64_t ceil_extended(std::uint64_t m, std::uint64_t divisor, double epsilon) {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 mm(m);
  const cpp_bin_float_50 value =
      mm * boost::multiprecision::log(mm * cpp_bin_float_50(divisor) / cpp_bin_float_50(epsilon));
  return static_cast<std::uint64_t>(boost::multiprecision::ceil(value));
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon <= kMaxEpsilon)) {
    throw std::domain_error(
        fmt::format("epsilon must lie in (0, 1/e] (natural log convention), got {}", epsilon));
  }
}

}  // namespace

FailureTolerance::FailureTolerance(double epsilon) : epsilon_(epsilon) { check_epsilon(epsilon); }

std::uint64_t split_budget_threshold(std::uint64_t m, std::uint64_t budget_divisor,
                                     double epsilon) {
  if (m < 1) throw std::domain_error("m must be a positive integer");
  if (budget_divisor < 1) throw std::domain_error("checkpoint count M must be positive");
  check_epsilon(epsilon);
  const double md = static_cast<double>(m);
  const double value =
      md * (std::log(md) + std::log(static_cast<double>(budget_divisor)) - std::log(epsilon));
  if (!(value < 9.0e18)) throw std::overflow_error("threshold exceeds 64-bit range");
  const double nearest = std::round(value);
  if (std::abs(value - nearest) < kNearIntegerBand * std::max(1.0, value)) {
    return ceil_extended(m, budget_divisor, epsilon);
  }
  return static_cast<std::uint64_t>(std::ceil(value));
}

std::uint64_t lemma1_threshold(std::uint64_t m, double epsilon) {
  return split_budget_threshold(m, 1, epsilon);
}

CheckpointSchedule::CheckpointSchedule(std::vector<std::uint64_t> checkpoints,
                                       FailureTolerance epsilon)
    : checkpoints_(std::move(checkpoints)), epsilon_(epsilon) {
  if (checkpoints_.empty()) throw std::invalid_argument("checkpoint list must not be empty");
  for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
    if (checkpoints_[i] < 1) {
      throw std::invalid_argument(fmt::format("checkpoint {} must be positive", i + 1));
    }
    if (i > 0 && checkpoints_[i] <= checkpoints_[i - 1]) {
      throw std::invalid_argument(fmt::format(
          "checkpoints must be strictly increasing (m_{} = {} after m_{} = {})", i + 1,
          checkpoints_[i], i, checkpoints_[i - 1]));
    }
  }
  const auto count = static_cast<std::uint64_t>(checkpoints_.size());
  thresholds_.reserve(checkpoints_.size());
  for (auto m : checkpoints_) {
    thresholds_.push_back(split_budget_threshold(m, count, epsilon_.value()));
  }
  // m * ln(m M / ε) is increasing in m for ε <= 1/e, so this cannot fire
  // for inputs that passed validation.
  for (std::size_t i = 1; i < thresholds_.size(); ++i) {
    if (thresholds_[i] < thresholds_[i - 1]) {
      throw std::logic_error("checkpoint thresholds are not non-decreasing");
    }
  }
}

CheckpointSchedule CheckpointSchedule::powers_of_two(unsigned max_exponent, double epsilon) {
  if (max_exponent < 1 || max_exponent > 62) {
    throw std::invalid_argument("power-of-two schedule needs an exponent in [1, 62]");
  }
  std::vector<std::uint64_t> cps;
  for (unsigned e = 1; e <= max_exponent; ++e) cps.push_back(std::uint64_t{1} << e);
  return CheckpointSchedule(std::move(cps), FailureTolerance(epsilon));
}

std::uint64_t CheckpointSchedule::checkpoint(std::size_t i) const {
  if (i < 1 || i > checkpoints_.size()) {
    throw std::out_of_range(
        fmt::format("checkpoint index {} outside 1..{}", i, checkpoints_.size()));
  }
  return checkpoints_[i - 1];
}

std::uint64_t CheckpointSchedule::threshold(std::size_t i) const {
  if (i < 1 || i > thresholds_.size()) {
    throw std::out_of_range(
        fmt::format("checkpoint index {} outside 1..{}", i, thresholds_.size()));
  }
  return thresholds_[i - 1];
}

std::size_t CheckpointSchedule::covering_index(std::uint64_t n) const noexcept {
  for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
    if (n <= checkpoints_[i]) return i + 1;
  }
  return 0;
}

std::uint64_t checkpoint_threshold(const CheckpointSchedule& schedule, std::size_t i) {
  return schedule.threshold(i);
}

}  // namespace fairenum
