#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fairenum/enumerator.hpp"

using namespace fairenum;

namespace {

const CheckpointSchedule& paper_schedule() {
  static const auto s = CheckpointSchedule::powers_of_two(10, 0.01);
  return s;
}

// Replays a fixed sequence of strings; returns nullopt at the end.
class ReplaySampler {
 public:
  using element_type = std::string;
  explicit ReplaySampler(std::vector<std::string> seq) : seq_(std::move(seq)) {}
  std::optional<std::string> draw() {
    if (pos_ == seq_.size()) return std::nullopt;
    return seq_[pos_++];
  }

 private:
  std::vector<std::string> seq_;
  std::size_t pos_ = 0;
};

template <typename E>
void check_trace_shape(const EnumerationOutcome<E>& out) {
  ASSERT_LE(out.collected.size(), out.total_samples);
  for (std::size_t j = 1; j < out.trace.size(); ++j) {
    ASSERT_GT(out.trace[j].samples, out.trace[j - 1].samples);
    ASSERT_GE(out.trace[j].distinct, out.trace[j - 1].distinct);
  }
}

}  // namespace

TEST(EnumerateImproved, SingletonSet) {
  CheckpointSchedule s({1, 2}, FailureTolerance(0.01));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    UniformSampler sampler(1, seed);
    const auto out = enumerate_improved(sampler, s);
    EXPECT_EQ(out.collected, std::vector<std::uint64_t>{0});
    EXPECT_EQ(out.reason, StopReason::checkpoint_break);
    EXPECT_EQ(out.stop_checkpoint, 2u);
    ASSERT_EQ(out.trace.size(), 2u);
    EXPECT_EQ(out.trace.back().distinct, 1u);
    EXPECT_EQ(out.total_samples, checkpoint_threshold(s, 2));
  }
}

TEST(EnumerateImproved, SuccessfulRunsDrawExactlyLk) {
  struct Case {
    std::uint64_t n;
    std::uint64_t expected;
  };
  for (const auto& c : {Case{50, 709}, Case{1000, 14172}, Case{3, 34}, Case{100, 1506}}) {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      UniformSampler sampler(c.n, seed);
      CountingSampler counting(sampler);
      const auto out = enumerate_improved(counting, paper_schedule());
      EXPECT_EQ(out.total_samples, counting.calls());
      check_trace_shape(out);
      if (out.collected.size() != c.n) continue;
      ++successes;
      EXPECT_EQ(out.total_samples, c.expected) << "n=" << c.n << " seed=" << seed;
      EXPECT_EQ(out.stop_checkpoint, paper_schedule().covering_index(c.n));
    }
    EXPECT_GT(successes, 45);
  }
}

TEST(EnumerateImproved, BreaksAtFirstViolatedCheckpoint) {
  for (std::uint64_t n : {1u, 2u, 5u, 33u, 200u, 777u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      UniformSampler sampler(n, seed * 31 + n);
      const auto out = enumerate_improved(sampler, paper_schedule());
      ASSERT_EQ(out.reason, StopReason::checkpoint_break);
      ASSERT_EQ(out.trace.size(), out.stop_checkpoint);
      for (std::size_t j = 0; j + 1 < out.trace.size(); ++j) {
        ASSERT_GE(out.trace[j].distinct, paper_schedule().checkpoint(out.trace[j].checkpoint));
        ASSERT_EQ(out.trace[j].samples, checkpoint_threshold(paper_schedule(), j + 1));
      }
      ASSERT_LT(out.trace.back().distinct, paper_schedule().checkpoint(out.stop_checkpoint));
    }
  }
}

TEST(EnumerateImproved, Deterministic) {
  UniformSampler a(321, 8);
  UniformSampler b(321, 8);
  EXPECT_EQ(enumerate_improved(a, paper_schedule()), enumerate_improved(b, paper_schedule()));
}

// n equal to a checkpoint: the break test |S| < m_k cannot fire once all
// elements are in, so the run continues to checkpoint k + 1.
TEST(EnumerateImproved, CheckpointEqualSetSizeRunsOneCheckpointLonger) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    UniformSampler sampler(64, seed);
    const auto out = enumerate_improved(sampler, paper_schedule());
    if (out.collected.size() != 64) continue;
    EXPECT_EQ(out.stop_checkpoint, 7u);
    EXPECT_EQ(out.total_samples, checkpoint_threshold(paper_schedule(), 7));
  }
  // ...and with no further checkpoint the loop runs out.
  CheckpointSchedule s({2, 4}, FailureTolerance(0.01));
  UniformSampler sampler(4, 1);
  const auto out = enumerate_improved(sampler, s);
  EXPECT_EQ(out.reason, StopReason::checkpoints_exhausted);
  EXPECT_EQ(out.stop_checkpoint, 0u);
  EXPECT_EQ(out.total_samples, checkpoint_threshold(s, 2));
}

TEST(EnumerateImproved, HashedElements) {
  std::vector<std::string> seq;
  for (int i = 0; i < 200; ++i) seq.push_back(i % 3 == 0 ? "x" : (i % 3 == 1 ? "y" : "z"));
  ReplaySampler sampler(seq);
  CheckpointSchedule s({2, 4}, FailureTolerance(0.01));
  const auto out = enumerate_improved(sampler, s);
  EXPECT_EQ(out.collected, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(out.stop_checkpoint, 2u);
}

TEST(EnumerateBaseline, SingletonSet) {
  CheckpointSchedule s({1, 2}, FailureTolerance(0.01));
  UniformSampler sampler(1, 4);
  const auto out = enumerate_baseline(sampler, s);
  EXPECT_EQ(out.collected.size(), 1u);
  EXPECT_EQ(out.reason, StopReason::checkpoint_break);
  EXPECT_EQ(out.stop_checkpoint, 1u);
  EXPECT_EQ(out.total_samples, checkpoint_threshold(s, 1));
}

// On an identical sample sequence, a successful baseline run draws exactly
// T_{m_{k-1}+1} (the draw of its last reset) more than the improved run.
TEST(EnumerateBaseline, OverheadIsDrawOfLastReset) {
  for (std::uint64_t n : {50u, 100u, 1000u}) {
    const auto k = paper_schedule().covering_index(n);
    const auto previous = paper_schedule().checkpoint(k - 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      UniformSampler a(n, seed);
      UniformSampler b(n, seed);
      const auto improved = enumerate_improved(a, paper_schedule());
      const auto baseline = enumerate_baseline(b, paper_schedule());
      check_trace_shape(baseline);
      if (improved.collected.size() != n || baseline.collected.size() != n) continue;
      ASSERT_GE(baseline.trace.size(), 2u);
      const auto& last_reset = baseline.trace[baseline.trace.size() - 2];
      EXPECT_EQ(last_reset.distinct, previous + 1);
      EXPECT_EQ(last_reset.checkpoint, k);
      EXPECT_EQ(baseline.total_samples, last_reset.samples + checkpoint_threshold(paper_schedule(), k));
      EXPECT_EQ(baseline.total_samples - improved.total_samples, last_reset.samples);
    }
  }
}

TEST(EnumerateBaseline, ExhaustsWhenSetOutgrowsSchedule) {
  CheckpointSchedule s({2, 4}, FailureTolerance(0.01));
  UniformSampler sampler(10, 1);
  const auto out = enumerate_baseline(sampler, s);
  EXPECT_EQ(out.reason, StopReason::checkpoints_exhausted);
  EXPECT_EQ(out.collected.size(), 5u);
}

TEST(EnumerateStream, TwoTokens) {
  std::string text;
  for (int i = 0; i < 50; ++i) text += (i % 2 == 0) ? "a\n" : "b\n";
  std::istringstream in(text);
  CheckpointSchedule s({2, 4}, FailureTolerance(0.01));
  const auto out = enumerate_stream(in, s);
  EXPECT_EQ(out.reason, StopReason::checkpoint_break);
  EXPECT_EQ(out.stop_checkpoint, 2u);
  EXPECT_EQ(out.collected, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(out.total_samples, checkpoint_threshold(s, 2));
}

TEST(EnumerateStream, EmptyStream) {
  std::istringstream in("");
  const auto out = enumerate_stream(in, paper_schedule());
  EXPECT_EQ(out.reason, StopReason::stream_exhausted);
  EXPECT_TRUE(out.collected.empty());
  EXPECT_EQ(out.total_samples, 0u);
}

TEST(EnumerateStream, ShortStreamKeepsPartialCollection) {
  std::istringstream in("p\nq\nr\n");
  const auto out = enumerate_stream(in, paper_schedule());
  EXPECT_EQ(out.reason, StopReason::stream_exhausted);
  EXPECT_EQ(out.collected.size(), 3u);
  EXPECT_EQ(out.total_samples, 3u);
}

TEST(EnumerateStream, MalformedTokenReportsPosition) {
  std::istringstream in("a\nb\n\nc\n");
  const auto out = enumerate_stream(in, paper_schedule());
  EXPECT_EQ(out.reason, StopReason::malformed_token);
  EXPECT_EQ(out.error_position, 3u);
  EXPECT_EQ(out.collected.size(), 2u);
}

TEST(EnumerateStream, BytesCompareExactly) {
  std::string text;
  for (int i = 0; i < 40; ++i) text += (i % 2 == 0) ? "a\n" : "a \n";
  std::istringstream in(text);
  CheckpointSchedule s({2, 4}, FailureTolerance(0.01));
  EXPECT_EQ(enumerate_stream(in, s).collected.size(), 2u);
}

// A recorded simulation sequence replayed through the stream gives the same
// outcome as the simulation itself.
TEST(EnumerateStream, ReplayMatchesSimulation) {
  for (std::uint64_t n : {7u, 50u, 300u}) {
    UniformSampler sim(n, 77);
    const auto direct = enumerate_improved(sim, paper_schedule());

    UniformSampler recorder(n, 77);
    std::string text;
    for (std::uint64_t t = 0; t < direct.total_samples; ++t) text += std::to_string(*recorder.draw()) + "\n";
    std::istringstream in(text);
    const auto replayed = enumerate_stream(in, paper_schedule());

    EXPECT_EQ(replayed.total_samples, direct.total_samples);
    EXPECT_EQ(replayed.reason, direct.reason);
    EXPECT_EQ(replayed.stop_checkpoint, direct.stop_checkpoint);
    EXPECT_EQ(replayed.trace, direct.trace);
    ASSERT_EQ(replayed.collected.size(), direct.collected.size());
    for (std::size_t j = 0; j < direct.collected.size(); ++j) {
      EXPECT_EQ(replayed.collected[j], std::to_string(direct.collected[j]));
    }
  }
}
