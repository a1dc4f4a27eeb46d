#include "fairenum/enumerator.hpp"

namespace fairenum {

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::checkpoint_break: return "checkpoint_break";
    case StopReason::checkpoints_exhausted: return "checkpoints_exhausted";
    case StopReason::stream_exhausted: return "stream_exhausted";
    case StopReason::malformed_token: return "malformed_token";
  }
  return "unknown";
}

std::optional<std::string> LineTokenSampler::draw() {
  if (malformed_at_) return std::nullopt;
  std::string line;
  if (!std::getline(*in_, line)) return std::nullopt;
  if (line.empty()) {
    malformed_at_ = position_ + 1;
    return std::nullopt;
  }
  ++position_;
  return line;
}

namespace {

template <typename Driver>
EnumerationOutcome<std::string> run_stream(std::istream& tokens,
                                           const CheckpointSchedule& schedule, Driver driver) {
  LineTokenSampler sampler(tokens);
  auto out = driver(sampler, schedule);
  if (out.reason == StopReason::stream_exhausted && sampler.malformed_at()) {
    out.reason = StopReason::malformed_token;
    out.error_position = *sampler.malformed_at();
  }
  return out;
}

}  // namespace

EnumerationOutcome<std::string> enumerate_stream(std::istream& tokens,
                                                 const CheckpointSchedule& schedule) {
  return run_stream(tokens, schedule, [](auto& s, const auto& c) { return enumerate_improved(s, c); });
}

EnumerationOutcome<std::string> enumerate_stream_baseline(std::istream& tokens,
                                                          const CheckpointSchedule& schedule) {
  return run_stream(tokens, schedule, [](auto& s, const auto& c) { return enumerate_baseline(s, c); });
}

}  // namespace fairenum
