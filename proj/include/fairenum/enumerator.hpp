#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fairenum/policy.hpp"
#include "fairenum/sampler.hpp"

namespace fairenum {

enum class StopReason {
  checkpoint_break,       // |S| < m_i at checkpoint i (baseline: |S| did not pass m_i)
  checkpoints_exhausted,  // every checkpoint passed without a break
  stream_exhausted,       // the sampler ran dry before the run could stop
  malformed_token,        // the stream delivered an invalid token
};

std::string_view to_string(StopReason reason) noexcept;

/// One membership check (improved driver) or counter reset (baseline).
struct CheckRecord {
  std::size_t checkpoint = 0;  // 1-based
  std::uint64_t samples = 0;   // cumulative draws when recorded
  std::uint64_t distinct = 0;  // |S| when recorded

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

template <typename Element>
struct EnumerationOutcome {
  /// Distinct elements in order of first appearance.
  std::vector<Element> collected;
  std::uint64_t total_samples = 0;
  StopReason reason = StopReason::checkpoints_exhausted;
  /// 1-based checkpoint of the break; 0 unless reason == checkpoint_break.
  std::size_t stop_checkpoint = 0;
  std::vector<CheckRecord> trace;
  /// 1-based token position of a malformed token, 0 otherwise.
  std::uint64_t error_position = 0;

  friend bool operator==(const EnumerationOutcome&, const EnumerationOutcome&) = default;
};

namespace detail {

template <typename Element>
class HashCollection {
 public:
  bool insert(const Element& e, std::vector<Element>& order) {
    if (!seen_.insert(e).second) return false;
    order.push_back(e);
    return true;
  }

 private:
  std::unordered_set<Element> seen_;
};

class DenseCollection {
 public:
  explicit DenseCollection(std::uint64_t universe) : seen_(universe, 0) {}

  bool insert(std::uint64_t e, std::vector<std::uint64_t>& order) {
    if (seen_[e]) return false;
    seen_[e] = 1;
    order.push_back(e);
    return true;
  }

 private:
  std::vector<unsigned char> seen_;
};

template <Sampler S>
auto make_collection(const S& sampler) {
  if constexpr (DenseSampler<S>) {
    return DenseCollection(sampler.universe_size());
  } else {
    return HashCollection<typename S::element_type>{};
  }
}

}  // namespace detail

/// Checkpointed enumeration. At checkpoint i the driver has drawn exactly
/// L_i samples in total; it stops at the first i with |S| < m_i. When
/// m_M >= |X| it collects all of X with probability >= 1 - ε, and a
/// successful run with m_{k-1} < |X| < m_k draws exactly L_k samples.
template <Sampler S>
EnumerationOutcome<typename S::element_type> enumerate_improved(
    S& sampler, const CheckpointSchedule& schedule) {
  EnumerationOutcome<typename S::element_type> out;
  auto seen = detail::make_collection(sampler);
  const auto checkpoints = schedule.checkpoints();
  const auto thresholds = schedule.thresholds();

  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    while (out.total_samples < thresholds[i]) {
      auto element = sampler.draw();
      if (!element) {
        out.reason = StopReason::stream_exhausted;
        return out;
      }
      ++out.total_samples;
      seen.insert(*element, out.collected);
    }
    out.trace.push_back({i + 1, out.total_samples, out.collected.size()});
    if (out.collected.size() < checkpoints[i]) {
      out.reason = StopReason::checkpoint_break;
      out.stop_checkpoint = i + 1;
      return out;
    }
  }
  out.reason = StopReason::checkpoints_exhausted;
  return out;
}

/// Counter-reset baseline. Tracks the smallest checkpoint m_i >= |S|; each
/// time |S| grows past m_i it moves to the next checkpoint and restarts the
/// draw counter. Stops once L_i draws since the last reset did not push |S|
/// past m_i. A trace record is written at every reset and at the stop.
template <Sampler S>
EnumerationOutcome<typename S::element_type> enumerate_baseline(
    S& sampler, const CheckpointSchedule& schedule) {
  EnumerationOutcome<typename S::element_type> out;
  auto seen = detail::make_collection(sampler);
  const auto checkpoints = schedule.checkpoints();
  const auto thresholds = schedule.thresholds();

  std::size_t i = 0;
  std::uint64_t since_reset = 0;
  for (;;) {
    if (since_reset >= thresholds[i]) {
      out.trace.push_back({i + 1, out.total_samples, out.collected.size()});
      out.reason = StopReason::checkpoint_break;
      out.stop_checkpoint = i + 1;
      return out;
    }
    auto element = sampler.draw();
    if (!element) {
      out.reason = StopReason::stream_exhausted;
      return out;
    }
    ++out.total_samples;
    ++since_reset;
    if (seen.insert(*element, out.collected) && out.collected.size() > checkpoints[i]) {
      while (i < checkpoints.size() && checkpoints[i] < out.collected.size()) ++i;
      if (i == checkpoints.size()) {
        out.trace.push_back({checkpoints.size(), out.total_samples, out.collected.size()});
        out.reason = StopReason::checkpoints_exhausted;
        return out;
      }
      since_reset = 0;
      out.trace.push_back({i + 1, out.total_samples, out.collected.size()});
    }
  }
}

/// Reads newline-delimited tokens. A token is any non-empty byte sequence
/// without '\n', compared as exact bytes. An empty line is malformed.
class LineTokenSampler {
 public:
  using element_type = std::string;

  explicit LineTokenSampler(std::istream& in) : in_(&in) {}

  std::optional<std::string> draw();

  /// Tokens successfully read so far.
  std::uint64_t position() const noexcept { return position_; }
  /// 1-based position of the malformed token that stopped reading, if any.
  std::optional<std::uint64_t> malformed_at() const noexcept { return malformed_at_; }

 private:
  std::istream* in_;
  std::uint64_t position_ = 0;
  std::optional<std::uint64_t> malformed_at_;
};

/// enumerate_improved fed from a token stream. A short stream yields
/// StopReason::stream_exhausted with the partial collection; an empty line
/// yields StopReason::malformed_token with its position.
EnumerationOutcome<std::string> enumerate_stream(std::istream& tokens,
                                                 const CheckpointSchedule& schedule);

/// Same as enumerate_stream, using the baseline driver.
EnumerationOutcome<std::string> enumerate_stream_baseline(std::istream& tokens,
                                                          const CheckpointSchedule& schedule);

}  // namespace fairenum
