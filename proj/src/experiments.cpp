#include "fairenum/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fairenum/enumerator.hpp"
#include "fairenum/exact.hpp"
#include "fairenum/sampler.hpp"

namespace fairenum {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// Integer sums make merging exact, so the result does not depend on how
// trials were split across workers.
struct SuccessTally {
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  u128 sum = 0;
  u128 sum_sq = 0;

  void merge(const SuccessTally& o) {
    successes += o.successes;
    failures += o.failures;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

struct DiffTally {
  std::uint64_t count = 0;
  i128 sum = 0;
  u128 sum_sq = 0;

  void merge(const DiffTally& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

unsigned resolve_workers(unsigned requested, std::uint64_t runs) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(runs, 1)));
}

template <typename Tally, typename Body>
Tally parallel_tally(std::uint64_t runs, unsigned workers, Body body) {
  workers = resolve_workers(workers, runs);
  std::vector<Tally> partial(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = runs * w / workers;
    const std::uint64_t end = runs * (w + 1) / workers;
    for (std::uint64_t trial = begin; trial < end; ++trial) body(trial, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  Tally total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

double to_double(u128 v) { return static_cast<double>(v); }

double to_double(i128 v) { return static_cast<double>(v); }

void validate(const ExperimentConfig& config) {
  if (config.set_sizes.empty()) throw std::invalid_argument("no set sizes configured");
  if (config.runs_per_case < 1) throw std::invalid_argument("runs per case must be >= 1");
  for (auto n : config.set_sizes) {
    if (n < 1) throw std::invalid_argument("set sizes must be positive");
    if (n > config.schedule.largest()) {
      throw std::invalid_argument(fmt::format(
          "set size n = {} exceeds the largest checkpoint m_M = {}", n, config.schedule.largest()));
    }
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::improved: return "improved";
    case Algorithm::baseline: return "baseline";
    case Algorithm::both: return "both";
  }
  return "unknown";
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig config;
  for (std::uint64_t n = 50; n <= 1000; n += 50) config.set_sizes.push_back(n);
  return config;
}

std::uint64_t case_trial_seed(std::uint64_t master_seed, std::uint64_t n,
                              std::uint64_t trial) noexcept {
  return derive_trial_seed(derive_trial_seed(master_seed, n), trial);
}

std::vector<Fig1Row> run_fig1(const ExperimentConfig& config) {
  validate(config);
  if (config.algorithm == Algorithm::both) {
    throw std::invalid_argument("fig1 runs a single algorithm (improved or baseline)");
  }
  const bool baseline = config.algorithm == Algorithm::baseline;
  std::vector<Fig1Row> rows;
  for (auto n : config.set_sizes) {
    const auto tally = parallel_tally<SuccessTally>(
        config.runs_per_case, config.workers, [&](std::uint64_t trial, SuccessTally& t) {
          UniformSampler sampler(n, case_trial_seed(config.master_seed, n, trial));
          const auto out = baseline ? enumerate_baseline(sampler, config.schedule)
                                    : enumerate_improved(sampler, config.schedule);
          if (out.collected.size() == n) {
            ++t.successes;
            t.sum += out.total_samples;
            t.sum_sq += static_cast<u128>(out.total_samples) * out.total_samples;
          } else {
            ++t.failures;
          }
        });

    Fig1Row row;
    row.n = n;
    row.k = config.schedule.covering_index(n);
    row.theoretical_samples = config.schedule.threshold(row.k);
    row.runs = config.runs_per_case;
    row.successes = tally.successes;
    row.seed = config.master_seed;
    if (tally.successes > 0) {
      row.mean_samples_success = to_double(tally.sum) / static_cast<double>(tally.successes);
    }
    if (tally.successes > 1) {
      const u128 s = tally.successes;
      const u128 numerator = s * tally.sum_sq - tally.sum * tally.sum;
      row.std_samples_success = std::sqrt(to_double(numerator) / to_double(s * (s - 1)));
    }
    const double r = static_cast<double>(tally.failures) / static_cast<double>(row.runs);
    row.failure_rate = r;
    row.failure_stderr = std::sqrt(r * (1.0 - r) / static_cast<double>(row.runs));
    if (tally.failures == 0) row.failure_rule_of_three = 3.0 / static_cast<double>(row.runs);
    row.exact_failure = exact_failure_probability(n, config.schedule);
    rows.push_back(row);
  }
  return rows;
}

std::vector<CompareRow> run_comparison(const ExperimentConfig& config) {
  validate(config);
  if (config.algorithm != Algorithm::both) {
    throw std::invalid_argument("comparison needs algorithm = both");
  }
  std::vector<CompareRow> rows;
  for (auto n : config.set_sizes) {
    const auto tally = parallel_tally<DiffTally>(
        config.runs_per_case, config.workers, [&](std::uint64_t trial, DiffTally& t) {
          const auto seed = case_trial_seed(config.master_seed, n, trial);
          UniformSampler improved_sampler(n, seed);
          UniformSampler baseline_sampler(n, seed);
          const auto improved = enumerate_improved(improved_sampler, config.schedule);
          const auto baseline = enumerate_baseline(baseline_sampler, config.schedule);
          const i128 diff = static_cast<i128>(baseline.total_samples) -
                            static_cast<i128>(improved.total_samples);
          ++t.count;
          t.sum += diff;
          t.sum_sq += static_cast<u128>(diff * diff);
        });

    CompareRow row;
    row.n = n;
    row.runs = config.runs_per_case;
    row.seed = config.master_seed;
    const double count = static_cast<double>(tally.count);
    row.mean_diff = to_double(tally.sum) / count;
    if (tally.count > 1) {
      const i128 c = static_cast<i128>(tally.count);
      const i128 numerator = c * static_cast<i128>(tally.sum_sq) - tally.sum * tally.sum;
      const double variance = to_double(numerator) / (count * (count - 1.0));
      row.diff_stderr = std::sqrt(variance / count);
    }
    const auto k = config.schedule.covering_index(n);
    row.predicted_diff = k <= 1 ? 0.0 : exact_expected_samples(config.schedule.checkpoint(k - 1) + 1, n);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TightnessPoint> run_fig2(std::uint64_t n, double epsilon,
                                     std::vector<std::uint64_t> m_values) {
  if (n < 1) throw std::domain_error("set size n must be positive");
  if (m_values.empty()) {
    for (std::uint64_t m = 1; m <= n; ++m) m_values.push_back(m);
  }
  std::vector<TightnessPoint> points;
  points.reserve(m_values.size());
  for (auto m : m_values) {
    if (m < 1 || m > n) {
      throw std::domain_error(fmt::format("tightness sweep needs 1 <= m <= n, got m = {}", m));
    }
    const auto tau = lemma1_threshold(m, epsilon);
    points.push_back({m, n, tau, log_rho(tau, m, n) / std::log(10.0)});
  }
  return points;
}

std::string format_real(double value) {
  if (value == 0.0) return "0";  // no "-0"
  return fmt::format("{:.12g}", value);
}

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows) {
  out << "n,k,theoretical_samples,mean_samples_success,std_samples_success,failure_rate,"
         "failure_stderr,exact_failure,runs,seed\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.n, r.k, r.theoretical_samples,
                       format_real(r.mean_samples_success), format_real(r.std_samples_success),
                       format_real(r.failure_rate), format_real(r.failure_stderr),
                       format_real(r.exact_failure), r.runs, r.seed);
  }
}

void write_fig2_csv(std::ostream& out, const std::vector<TightnessPoint>& points) {
  out << "m,n,tau,log10_rho\n";
  for (const auto& p : points) {
    out << fmt::format("{},{},{},{}\n", p.m, p.n, p.tau, format_real(p.log10_rho));
  }
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "n,mean_diff,diff_stderr,predicted_diff,runs,seed\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{}\n", r.n, format_real(r.mean_diff),
                       format_real(r.diff_stderr), format_real(r.predicted_diff), r.runs, r.seed);
  }
}

}  // namespace fairenum
