#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fairenum/policy.hpp"

namespace fairenum {

enum class Algorithm { improved, baseline, both };

std::string_view to_string(Algorithm algorithm) noexcept;

struct ExperimentConfig {
  CheckpointSchedule schedule = CheckpointSchedule::powers_of_two(10, 0.01);
  std::vector<std::uint64_t> set_sizes;
  std::uint64_t runs_per_case = 10'000;
  std::uint64_t master_seed = 1;
  Algorithm algorithm = Algorithm::improved;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// C = [2, 4, ..., 1024], ε = 0.01, n = 50, 100, ..., 1000, 10^4 runs per case.
ExperimentConfig default_experiment_config();

struct Fig1Row {
  std::uint64_t n = 0;
  std::size_t k = 0;  // m_{k-1} < n <= m_k
  std::uint64_t theoretical_samples = 0;
  double mean_samples_success = 0.0;
  double std_samples_success = 0.0;  // sample standard deviation
  double failure_rate = 0.0;
  double failure_stderr = 0.0;  // sqrt(r (1 - r) / runs)
  /// 3 / runs when no failure was observed.
  std::optional<double> failure_rule_of_three;
  double exact_failure = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const Fig1Row&, const Fig1Row&) = default;
};

struct CompareRow {
  std::uint64_t n = 0;
  double mean_diff = 0.0;  // mean(baseline draws - improved draws)
  double diff_stderr = 0.0;
  double predicted_diff = 0.0;  // E[T_{m_{k-1}+1} | n], 0 for k = 1
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CompareRow&, const CompareRow&) = default;
};

struct TightnessPoint {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t tau = 0;
  double log10_rho = 0.0;

  friend bool operator==(const TightnessPoint&, const TightnessPoint&) = default;
};

/// Seed for run `trial` of the case with set size `n`.
std::uint64_t case_trial_seed(std::uint64_t master_seed, std::uint64_t n, std::uint64_t trial) noexcept;

/// Monte Carlo of the configured driver (improved or baseline) against a
/// uniform sampler for every set size. Throws std::invalid_argument if some
/// n exceeds m_M, the config is empty, or algorithm == both.
std::vector<Fig1Row> run_fig1(const ExperimentConfig& config);

/// Paired runs of both drivers on identical sample sequences.
std::vector<CompareRow> run_comparison(const ExperimentConfig& config);

/// Tightness ratio sweep with tau = lemma1_threshold(m, epsilon). An empty
/// m_values means m = 1..n. Throws std::domain_error if some m > n.
std::vector<TightnessPoint> run_fig2(std::uint64_t n, double epsilon,
                                     std::vector<std::uint64_t> m_values = {});

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows);
void write_fig2_csv(std::ostream& out, const std::vector<TightnessPoint>& points);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// Real formatting used for CSV and CLI output: 12 significant digits.
std::string format_real(double value);

}  // namespace fairenum
