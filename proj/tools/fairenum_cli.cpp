// fairenum: enumeration by fair sampling, exact oracles, and the Monte Carlo
// experiments. Exit status: 0 success, 1 usage error, 2 runtime/stream error.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairenum/enumerator.hpp"
#include "fairenum/exact.hpp"
#include "fairenum/experiments.hpp"
#include "fairenum/policy.hpp"
#include "fairenum/sampler.hpp"

namespace {

using namespace fairenum;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Bad argument values; reported as usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint64_t> default_checkpoints() {
  std::vector<std::uint64_t> cps;
  for (unsigned e = 1; e <= 10; ++e) cps.push_back(std::uint64_t{1} << e);
  return cps;
}

FailureTolerance parse_epsilon(double epsilon) {
  try {
    return FailureTolerance(epsilon);
  } catch (const std::domain_error& e) {
    throw UsageError(fmt::format("--epsilon: {}", e.what()));
  }
}

CheckpointSchedule make_schedule(const std::vector<std::uint64_t>& checkpoints, double epsilon) {
  const auto tolerance = parse_epsilon(epsilon);
  try {
    return CheckpointSchedule(checkpoints, tolerance);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("--checkpoints: {}", e.what()));
  }
}

void announce(std::string_view command, const std::string& details) {
  std::cerr << "# fairenum " << command << ' ' << details << '\n';
}

std::string describe(const CheckpointSchedule& s) {
  return fmt::format("checkpoints=[{}] M={} epsilon={} thresholds=[{}]",
                     fmt::join(s.checkpoints(), ","), s.size(), format_real(s.epsilon().value()),
                     fmt::join(s.thresholds(), ","));
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FAIRENUM_WORKERS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw UsageError(fmt::format("FAIRENUM_WORKERS: not an unsigned integer: '{}'", env));
    }
  }
  return 0;
}

template <typename Element>
int report_outcome(const EnumerationOutcome<Element>& out, bool list, bool trace) {
  std::cout << "collected " << out.collected.size() << '\n'
            << "total_samples " << out.total_samples << '\n'
            << "stop_reason " << to_string(out.reason) << '\n'
            << "stop_checkpoint " << out.stop_checkpoint << '\n';
  if (trace) {
    for (const auto& r : out.trace) {
      std::cout << "check " << r.checkpoint << ' ' << r.samples << ' ' << r.distinct << '\n';
    }
  }
  if (list) {
    for (const auto& e : out.collected) std::cout << e << '\n';
  }
  switch (out.reason) {
    case StopReason::stream_exhausted:
      std::cerr << "error: token stream ended before the run could stop\n";
      return kExitRuntime;
    case StopReason::malformed_token:
      std::cerr << "error: malformed (empty) token at position " << out.error_position << '\n';
      return kExitRuntime;
    default:
      return 0;
  }
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enumerate a finite set by fair sampling with a (1 - epsilon) guarantee"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "run the enumeration driver");
  std::uint64_t en_n = 0;
  std::uint64_t en_seed = 1;
  std::vector<std::uint64_t> en_checkpoints = default_checkpoints();
  double en_epsilon = 0.01;
  bool en_baseline = false;
  bool en_stdin = false;
  std::string en_input;
  bool en_list = false;
  bool en_trace = false;
  auto* en_n_opt = enumerate->add_option("--n", en_n, "set size for the simulated uniform sampler");
  enumerate->add_option("--seed", en_seed, "sampler seed");
  enumerate->add_option("--checkpoints", en_checkpoints, "strictly increasing checkpoints")
      ->delimiter(',');
  enumerate->add_option("--epsilon", en_epsilon, "failure tolerance in (0, 1/e]");
  enumerate->add_flag("--baseline", en_baseline, "use the counter-reset baseline driver");
  auto* en_stdin_opt =
      enumerate->add_flag("--stdin", en_stdin, "read newline-delimited tokens from standard input");
  auto* en_input_opt =
      enumerate->add_option("--input", en_input, "read newline-delimited tokens from a file");
  enumerate->add_flag("--list", en_list, "print the collected elements");
  enumerate->add_flag("--trace", en_trace, "print the per-checkpoint trace");
  en_stdin_opt->excludes(en_input_opt);
  en_n_opt->excludes(en_stdin_opt)->excludes(en_input_opt);

  // bound
  auto* bound = app.add_subcommand("bound", "print the sampling threshold ceil(m ln(m M / epsilon))");
  std::uint64_t b_m = 0;
  double b_epsilon = 0.01;
  std::uint64_t b_checkpoint_count = 1;
  bound->add_option("--m", b_m, "collection size m")->required();
  bound->add_option("--epsilon", b_epsilon, "failure tolerance in (0, 1/e]")->required();
  bound->add_option("--M", b_checkpoint_count, "number of checkpoints the budget is split over");

  // tail
  auto* tail = app.add_subcommand("tail", "print the exact P(T_m > tau | |X| = n)");
  std::uint64_t t_m = 0;
  std::uint64_t t_tau = 0;
  std::uint64_t t_n = 0;
  tail->add_option("--m", t_m)->required();
  tail->add_option("--tau", t_tau)->required();
  tail->add_option("--n", t_n)->required();

  // expect
  auto* expect = app.add_subcommand("expect", "print the exact E[T_m | |X| = n]");
  std::uint64_t x_m = 0;
  std::uint64_t x_n = 0;
  expect->add_option("--m", x_m)->required();
  expect->add_option("--n", x_n)->required();

  // failure
  auto* failure = app.add_subcommand("failure", "print the exact failure probability");
  std::uint64_t f_n = 0;
  std::vector<std::uint64_t> f_checkpoints = default_checkpoints();
  double f_epsilon = 0.01;
  failure->add_option("--n", f_n)->required();
  failure->add_option("--checkpoints", f_checkpoints)->delimiter(',');
  failure->add_option("--epsilon", f_epsilon);

  // fig1 / compare
  struct MonteCarloFlags {
    std::uint64_t runs = 10'000;
    std::uint64_t seed = 1;
    std::string out;
    std::vector<std::uint64_t> checkpoints = default_checkpoints();
    double epsilon = 0.01;
    std::vector<std::uint64_t> sizes;
    std::optional<unsigned> workers;
    bool baseline = false;
  };
  MonteCarloFlags fig1_flags;
  MonteCarloFlags compare_flags;
  auto add_monte_carlo = [](CLI::App* cmd, MonteCarloFlags& f) {
    cmd->add_option("--runs", f.runs, "runs per set size (paper scale: 100000)");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--out", f.out, "CSV output path (default: standard output)");
    cmd->add_option("--checkpoints", f.checkpoints)->delimiter(',');
    cmd->add_option("--epsilon", f.epsilon);
    cmd->add_option("--sizes", f.sizes, "set sizes (default: 50,100,...,1000)")->delimiter(',');
    cmd->add_option("--workers", f.workers, "worker threads (default: $FAIRENUM_WORKERS or all cores)");
  };
  auto* fig1 = app.add_subcommand("fig1", "Monte Carlo sample counts and failure rates");
  add_monte_carlo(fig1, fig1_flags);
  fig1->add_flag("--baseline", fig1_flags.baseline, "run the baseline driver instead");
  auto* compare = app.add_subcommand("compare", "paired improved vs baseline draw counts");
  add_monte_carlo(compare, compare_flags);

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "tightness ratio sweep over m = 1..n");
  std::uint64_t g_n = 100;
  double g_epsilon = 0.01;
  std::string g_out;
  fig2->add_option("--n", g_n);
  fig2->add_option("--epsilon", g_epsilon);
  fig2->add_option("--out", g_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*enumerate) {
      const auto schedule = make_schedule(en_checkpoints, en_epsilon);
      const auto algorithm = en_baseline ? Algorithm::baseline : Algorithm::improved;
      if (en_stdin || !en_input.empty()) {
        announce("enumerate", fmt::format("source={} algorithm={} {}",
                                          en_stdin ? "stdin" : en_input, to_string(algorithm),
                                          describe(schedule)));
        std::ifstream file;
        std::istream* in = &std::cin;
        if (!en_input.empty()) {
          file.open(en_input, std::ios::binary);
          if (!file) throw std::runtime_error(fmt::format("cannot open '{}'", en_input));
          in = &file;
        }
        const auto out = en_baseline ? enumerate_stream_baseline(*in, schedule)
                                     : enumerate_stream(*in, schedule);
        return report_outcome(out, en_list, en_trace);
      }
      if (en_n < 1) throw UsageError("--n: a positive set size is required without --stdin/--input");
      announce("enumerate", fmt::format("n={} seed={} algorithm={} {}", en_n, en_seed,
                                        to_string(algorithm), describe(schedule)));
      UniformSampler sampler(en_n, en_seed);
      const auto out = en_baseline ? enumerate_baseline(sampler, schedule)
                                   : enumerate_improved(sampler, schedule);
      return report_outcome(out, en_list, en_trace);
    }

    if (*bound) {
      parse_epsilon(b_epsilon);
      if (b_m < 1) throw UsageError("--m: must be a positive integer");
      if (b_checkpoint_count < 1) throw UsageError("--M: must be a positive integer");
      announce("bound", fmt::format("m={} epsilon={} M={}", b_m, format_real(b_epsilon),
                                    b_checkpoint_count));
      std::cout << split_budget_threshold(b_m, b_checkpoint_count, b_epsilon) << '\n';
      return 0;
    }

    if (*tail) {
      if (t_m < 1 || t_m > t_n) throw UsageError("--m: must satisfy 1 <= m <= n");
      announce("tail", fmt::format("m={} tau={} n={}", t_m, t_tau, t_n));
      std::cout << format_real(tail_probability(t_m, t_tau, t_n)) << '\n';
      return 0;
    }

    if (*expect) {
      if (x_m < 1 || x_m > x_n) throw UsageError("--m: must satisfy 1 <= m <= n");
      announce("expect", fmt::format("m={} n={}", x_m, x_n));
      std::cout << format_real(exact_expected_samples(x_m, x_n)) << '\n';
      return 0;
    }

    if (*failure) {
      if (f_n < 1) throw UsageError("--n: must be a positive integer");
      const auto schedule = make_schedule(f_checkpoints, f_epsilon);
      announce("failure", fmt::format("n={} {}", f_n, describe(schedule)));
      std::cout << format_real(exact_failure_probability(f_n, schedule)) << '\n';
      return 0;
    }

    if (*fig1 || *compare) {
      auto& f = *fig1 ? fig1_flags : compare_flags;
      ExperimentConfig config = default_experiment_config();
      config.schedule = make_schedule(f.checkpoints, f.epsilon);
      if (!f.sizes.empty()) config.set_sizes = f.sizes;
      config.runs_per_case = f.runs;
      config.master_seed = f.seed;
      config.workers = resolve_workers(f.workers);
      config.algorithm =
          *compare ? Algorithm::both : (f.baseline ? Algorithm::baseline : Algorithm::improved);
      if (config.runs_per_case < 1) throw UsageError("--runs: must be >= 1");
      for (auto n : config.set_sizes) {
        if (n < 1 || n > config.schedule.largest()) {
          throw UsageError(fmt::format("--sizes: n = {} must lie in 1..m_M = {}", n,
                                       config.schedule.largest()));
        }
      }
      announce(*fig1 ? "fig1" : "compare",
               fmt::format("runs={} seed={} algorithm={} workers={} sizes=[{}] {}",
                           config.runs_per_case, config.master_seed, to_string(config.algorithm),
                           config.workers == 0 ? std::string("auto") : std::to_string(config.workers),
                           fmt::join(config.set_sizes, ","), describe(config.schedule)));
      std::ofstream file;
      auto& out = open_output(f.out, file);
      if (*fig1) {
        write_fig1_csv(out, run_fig1(config));
      } else {
        write_compare_csv(out, run_comparison(config));
      }
      out.flush();
      return out ? 0 : kExitRuntime;
    }

    if (*fig2) {
      parse_epsilon(g_epsilon);
      if (g_n < 1) throw UsageError("--n: must be a positive integer");
      announce("fig2", fmt::format("n={} epsilon={} m=1..{}", g_n, format_real(g_epsilon), g_n));
      std::ofstream file;
      auto& out = open_output(g_out, file);
      write_fig2_csv(out, run_fig2(g_n, g_epsilon));
      out.flush();
      return out ? 0 : kExitRuntime;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
