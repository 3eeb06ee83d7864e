#include <gtest/gtest.h>

#include <algorithm>

#include "densecap/errors.hpp"
#include "densecap/rerank.hpp"
#include "densecap/rng.hpp"

using namespace densecap;

namespace {

std::vector<RerankInput> random_events(Rng& rng, std::size_t n) {
  std::vector<RerankInput> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double start = static_cast<double>(rng.integer(0, 20));
    const double len = static_cast<double>(rng.integer(1, 5));
    // Coarse scores so that ties actually occur.
    const double sp = static_cast<double>(rng.integer(1, 4)) / 4.0;
    const double sc = static_cast<double>(rng.integer(1, 4)) / 4.0;
    out.push_back({Interval(start, start + len), sp, "c" + std::to_string(rng.integer(0, 3)), sc});
  }
  return out;
}

}  // namespace

TEST(Rerank, MatchesStableSortOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto events = random_events(rng, 30);
    const auto got = rerank(events, 10);
    // Oracle: selection by repeated linear scan for the best remaining key.
    std::vector<bool> used(events.size(), false);
    for (std::size_t r = 0; r < got.size(); ++r) {
      std::size_t best = events.size();
      for (std::size_t i = 0; i < events.size(); ++i) {
        if (used[i]) continue;
        if (best == events.size()) {
          best = i;
          continue;
        }
        const auto& a = events[i];
        const auto& b = events[best];
        const double sa = a.s_p * a.s_c;
        const double sb = b.s_p * b.s_c;
        bool better = false;
        if (sa != sb) {
          better = sa > sb;
        } else if (a.interval.start() != b.interval.start()) {
          better = a.interval.start() < b.interval.start();
        } else if (a.interval.length() != b.interval.length()) {
          better = a.interval.length() < b.interval.length();
        } else {
          better = a.caption < b.caption;
        }
        if (better) best = i;
      }
      used[best] = true;
      EXPECT_EQ(got[r].s, events[best].s_p * events[best].s_c);
      EXPECT_EQ(got[r].interval.start(), events[best].interval.start());
      EXPECT_EQ(got[r].interval.length(), events[best].interval.length());
      EXPECT_EQ(got[r].caption, events[best].caption);
    }
    EXPECT_EQ(got.size(), 10u);
  }
}

TEST(Rerank, KeepsAllWhenFewerThanK) {
  Rng rng(2);
  const auto events = random_events(rng, 4);
  EXPECT_EQ(rerank(events, 10).size(), 4u);
  EXPECT_TRUE(rerank(std::span<const RerankInput>{}, 10).empty());
}

TEST(Rerank, UnitCaptionScoresFallBackToProposalOrder) {
  std::vector<RerankInput> events = {{Interval(0, 2), 0.6, "a", 1.0},
                                     {Interval(1, 3), 0.9, "b", 1.0},
                                     {Interval(2, 4), 0.7, "c", 1.0}};
  const auto got = rerank(events, 2);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].caption, "b");
  EXPECT_EQ(got[1].caption, "c");
  EXPECT_DOUBLE_EQ(got[0].s, 0.9);
}

TEST(Rerank, InvariantToPositiveScaling) {
  Rng rng(3);
  auto events = random_events(rng, 25);
  const auto base = rerank(events, 10);
  for (auto& e : events) e.s_c *= 0.5;  // exact in binary
  const auto scaled = rerank(events, 10);
  ASSERT_EQ(base.size(), scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(base[i].interval, scaled[i].interval);
    EXPECT_EQ(base[i].caption, scaled[i].caption);
  }
}

TEST(Rerank, ProductIsTheFinalScore) {
  const std::vector<RerankInput> events = {{Interval(0, 1), 0.9, "x", 0.2}, {Interval(0, 1), 0.5, "y", 0.5}};
  const auto got = rerank(events, 1);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].caption, "y");
  EXPECT_DOUBLE_EQ(got[0].s, 0.25);
}

TEST(Submission, JsonRoundTrip) {
  Submission sub;
  sub["v_2"] = rerank(std::vector<RerankInput>{{Interval(1.0, 2.5), 0.8, "a man is cooking", 0.5}});
  sub["v_1"] = rerank(std::vector<RerankInput>{{Interval(0.0, 4.0), 0.7, "a dog runs", 0.9},
                                               {Interval(3.0, 9.0), 0.6, "a man sings", 0.9}});
  const auto text = submission_to_json(sub);
  const auto back = parse_submission(text);
  ASSERT_EQ(back.size(), 2u);
  ASSERT_EQ(back.at("v_1").size(), 2u);
  EXPECT_EQ(back.at("v_1")[0].sentence, "a dog runs");
  EXPECT_EQ(back.at("v_1")[1].interval, Interval(3.0, 9.0));
  EXPECT_EQ(back.at("v_2")[0].interval, Interval(1.0, 2.5));
  EXPECT_EQ(submission_to_json(sub), text);
}

TEST(Submission, MalformedRejected) {
  EXPECT_THROW(parse_submission("[1, 2]"), Error);
  EXPECT_THROW(parse_submission(R"({"v": [{"sentence": "x"}]})"), Error);
  EXPECT_THROW(parse_submission(R"({"v": [{"sentence": "x", "timestamp": [3, 1]}]})"), Error);
}
