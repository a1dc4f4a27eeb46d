#include "fairenum/exact.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairenum {

namespace {

void require_m_le_n(std::uint64_t m, std::uint64_t n) {
  if (m < 1) throw std::domain_error("m must be a positive integer");
  if (m > n) throw std::domain_error(fmt::format("m = {} exceeds n = {}", m, n));
}

// Kahan-compensated sum of a contiguous range.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// One draw: p'[i] = p[i] * i/n + p[i-1] * (n-i+1)/n. Only indices up to
// min(t+1, n) can be non-zero.
void chain_step(std::span<const double> from, std::span<double> to, std::uint64_t n,
                std::uint64_t t) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::uint64_t top = std::min<std::uint64_t>(t + 1, n);
  to[0] = 0.0;
  for (std::uint64_t i = 1; i <= top; ++i) {
    const double stay = from[i] * static_cast<double>(i) * inv_n;
    const double grow = from[i - 1] * static_cast<double>(n - i + 1) * inv_n;
    to[i] = stay + grow;
  }
  for (std::uint64_t i = top + 1; i <= n; ++i) to[i] = 0.0;
}

}  // namespace

DistinctCountChain::DistinctCountChain(std::uint64_t n) : n_(n) {
  if (n == 0) throw std::domain_error("set size n must be positive");
  row_.assign(n + 1, 0.0);
  scratch_.assign(n + 1, 0.0);
  row_[0] = 1.0;
}

void DistinctCountChain::step() {
  chain_step(row_, scratch_, n_, t_);
  row_.swap(scratch_);
  ++t_;
}

void DistinctCountChain::advance_to(std::uint64_t t) {
  while (t_ < t) step();
}

double DistinctCountChain::mass_below(std::uint64_t m) const noexcept {
  const auto count = std::min<std::uint64_t>(m, n_ + 1);
  return compensated_sum(std::span<const double>(row_).first(count));
}

TailTable::TailTable(std::uint64_t n, std::uint64_t horizon) : n_(n), horizon_(horizon) {
  if (n == 0) throw std::domain_error("set size n must be positive");
  const std::uint64_t width = n + 1;
  cells_.assign((horizon + 1) * width, 0.0);
  cells_[0] = 1.0;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    std::span<const double> from(cells_.data() + t * width, width);
    std::span<double> to(cells_.data() + (t + 1) * width, width);
    chain_step(from, to, n, t);
  }
}

std::span<const double> TailTable::row(std::uint64_t t) const {
  if (t > horizon_) {
    throw std::out_of_range(fmt::format("t = {} beyond table horizon {}", t, horizon_));
  }
  return {cells_.data() + t * (n_ + 1), n_ + 1};
}

double TailTable::p(std::uint64_t t, std::uint64_t i) const {
  if (i > n_) return 0.0;
  return row(t)[i];
}

double TailTable::tail(std::uint64_t m, std::uint64_t tau) const {
  require_m_le_n(m, n_);
  return compensated_sum(row(tau).first(m));
}

double tail_probability(std::uint64_t m, std::uint64_t tau, std::uint64_t n) {
  require_m_le_n(m, n);
  DistinctCountChain chain(n);
  chain.advance_to(tau);
  return chain.mass_below(m);
}

double exact_expected_samples(std::uint64_t m, std::uint64_t n) {
  require_m_le_n(m, n);
  // Smallest terms (largest k) first.
  double sum = 0.0;
  for (std::uint64_t k = n; k >= n - m + 1; --k) {
    sum += 1.0 / static_cast<double>(k);
    if (k == 1) break;
  }
  return static_cast<double>(n) * sum;
}

double lemma2_bound(std::uint64_t n, std::uint64_t tau) {
  if (n == 0) throw std::domain_error("set size n must be positive");
  const double nd = static_cast<double>(n);
  return nd * std::exp(-static_cast<double>(tau) / nd);
}

double log_g(std::uint64_t tau, std::uint64_t m, double x) {
  if (m < 1) throw std::domain_error("m must be a positive integer");
  if (!(x >= static_cast<double>(m))) {
    throw std::domain_error(fmt::format("log g needs x >= m, got x = {} < m = {}", x, m));
  }
  double log_f = 0.0;
  for (std::uint64_t i = 0; i < m; ++i) log_f += std::log(x - static_cast<double>(i));
  return log_f - static_cast<double>(tau) * std::log(x);
}

double log_rho(std::uint64_t tau, std::uint64_t m, std::uint64_t n) {
  require_m_le_n(m, n);
  if (m == n) return 0.0;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double log_binom = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(nd - md + 1.0);
  return log_binom + static_cast<double>(tau) * (std::log(md) - std::log(nd));
}

double exact_failure_probability(std::uint64_t n, const CheckpointSchedule& schedule) {
  if (n == 0) throw std::domain_error("set size n must be positive");
  DistinctCountChain chain(n);
  const auto checkpoints = schedule.checkpoints();
  const auto thresholds = schedule.thresholds();
  double failure = 0.0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    chain.advance_to(thresholds[i]);
    auto row = chain.mutable_row();
    const auto exit_below = std::min<std::uint64_t>(checkpoints[i], n + 1);
    for (std::uint64_t d = 0; d < exit_below; ++d) {
      if (d < n) failure += row[d];
      row[d] = 0.0;
    }
    if (compensated_sum(row) == 0.0) return failure;
  }
  // Checkpoints exhausted: whatever is still running without all n elements failed.
  const auto row = chain.row();
  failure += compensated_sum(row.first(n));
  return failure;
}

}  // namespace fairenum
