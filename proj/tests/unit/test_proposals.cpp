#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "densecap/errors.hpp"
#include "densecap/proposals.hpp"
#include "densecap/rng.hpp"
#include "oracles.hpp"

using namespace densecap;

TEST(Cluster, ConstantInputSingleCenter) {
  const std::vector<double> p(20, 0.5);
  EXPECT_EQ(cluster_proportions(p, 1).centers, std::vector<double>{0.5});
}

TEST(Cluster, SeparatedGroups) {
  std::vector<double> p(50, 0.1);
  p.insert(p.end(), 50, 0.9);
  const auto bank = cluster_proportions(p, 2);
  ASSERT_EQ(bank.K(), 2u);
  EXPECT_NEAR(bank.centers[0], 0.1, 1e-12);
  EXPECT_NEAR(bank.centers[1], 0.9, 1e-12);
}

TEST(Cluster, TooFewDistinctValues) {
  const std::vector<double> p{0.2, 0.2, 0.4};
  EXPECT_THROW(cluster_proportions(p, 3), ConfigError);
  EXPECT_THROW(cluster_proportions(p, 0), ConfigError);
  EXPECT_THROW(cluster_proportions(std::vector<double>{0.0, 0.5}, 1), DataError);
  EXPECT_THROW(cluster_proportions(std::vector<double>{1.5, 0.5}, 1), DataError);
}

TEST(Cluster, MixtureMatchesExactDynamicProgram) {
  Rng rng(2024);
  const double means[] = {0.1, 0.3, 0.7};
  std::vector<double> p;
  for (int i = 0; i < 1000; ++i) {
    double x = rng.normal(means[rng.index(3)], 0.03);
    p.push_back(std::clamp(x, 1e-3, 1.0));
  }
  const auto bank = cluster_proportions(p, 3);
  const auto exact = oracle::dp_kmeans(p, 3);
  ASSERT_EQ(bank.K(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(bank.centers[k], exact.centers[k], 1e-9);
    EXPECT_NEAR(bank.centers[k], means[k], 0.02);
  }
}

TEST(Cluster, CentersSortedDistinctAndDeterministic) {
  Rng rng(5);
  std::vector<double> p;
  for (int i = 0; i < 300; ++i) p.push_back(rng.uniform(0.01, 1.0));
  const auto a = cluster_proportions(p, 20);
  const auto b = cluster_proportions(p, 20);
  EXPECT_EQ(a.centers, b.centers);
  for (std::size_t k = 1; k < a.K(); ++k) EXPECT_LT(a.centers[k - 1], a.centers[k]);
  // Lloyd ends at a local optimum; it must not be far from the global one.
  double cost = 0.0;
  for (double x : p) {
    double best = 1e9;
    for (double c : a.centers) best = std::min(best, (x - c) * (x - c));
    cost += best;
  }
  EXPECT_LE(cost, 1.5 * oracle::dp_kmeans(p, 20).cost + 1e-12);
}

TEST(Cluster, EmptyClusterReseeded) {
  // Quantile init puts two centers on the same value; one cluster starts empty.
  std::vector<double> p(10, 0.2);
  p.push_back(0.8);
  const auto bank = cluster_proportions(p, 2);
  EXPECT_DOUBLE_EQ(bank.centers[0], 0.2);
  EXPECT_DOUBLE_EQ(bank.centers[1], 0.8);
}

TEST(Candidates, StrideRuleHandExample) {
  const auto meta = VideoMeta::make("v", 100.0, 64.0, 6400);
  const auto c = generate_candidates(meta, WindowBank{{1.0}});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].interval, Interval(0, 100));
  EXPECT_EQ(c[1].interval, Interval(25, 100));
  EXPECT_EQ(c[2].interval, Interval(50, 100));
}

TEST(Candidates, TinyVideoKeepsFirstWindow) {
  const auto meta = VideoMeta::make("v", 0.5, 64.0, 32);
  const auto c = generate_candidates(meta, WindowBank{{1.0}});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].interval, Interval(0.0, 0.5));
}

TEST(Candidates, DeduplicatedBySegmentSpan) {
  // Windows of 0.25 s on 1 s segments: stride 1/16 s, most share a segment.
  const auto meta = VideoMeta::make("v", 4.0, 64.0, 256);
  const auto c = generate_candidates(meta, WindowBank{{0.0625}});
  std::set<std::pair<std::size_t, std::size_t>> spans;
  for (const auto& x : c) {
    const auto s = interval_to_segments(x.interval, meta);
    EXPECT_TRUE(spans.insert({s.first, s.last}).second);
  }
  EXPECT_EQ(spans.size(), 7u);  // {0},{0,1},{1},{1,2},{2},{2,3},{3}
}

TEST(Candidates, CountMatchesIndependentEnumeration) {
  Rng rng(9);
  std::vector<double> centers;
  for (int k = 0; k < 20; ++k) centers.push_back(0.04 + 0.048 * k);
  const WindowBank bank{centers};
  for (int trial = 0; trial < 5; ++trial) {
    const long long segs = rng.integer(30, 120);
    const auto meta = VideoMeta::make("v", static_cast<double>(segs), 64.0, segs * 64);
    std::set<std::pair<long long, long long>> spans;
    for (double p : centers) {
      const double w = p * meta.duration_sec;
      for (int j = 0; j * w / 4.0 < meta.duration_sec; ++j) {
        const double s = j * w / 4.0;
        const double e = std::min(s + w, meta.duration_sec);
        if (j > 0 && e - s < w / 2.0) continue;
        const auto first = static_cast<long long>(std::floor(s));
        const auto last = std::max(first, static_cast<long long>(std::ceil(e)) - 1);
        spans.insert({first, last});
      }
    }
    const auto n = generate_candidates(meta, bank).size();
    EXPECT_NEAR(static_cast<double>(n), static_cast<double>(spans.size()), 0.3 * spans.size());
  }
}

TEST(Labels, ThresholdRule) {
  const std::vector<Interval> gt{Interval(5, 15)};
  std::vector<CandidateProposal> c;
  for (const auto& iv : {Interval(5, 15), Interval(30, 40), Interval(0, 10), Interval(5, 13), Interval(5, 20)}) {
    c.push_back({iv, 0.1, Label::kUnlabeled, 0.0});
  }
  const auto l = label_candidates(c, gt);
  EXPECT_EQ(l[0].label, Label::kPositive);
  EXPECT_DOUBLE_EQ(l[0].best_tiou, 1.0);
  EXPECT_EQ(l[1].label, Label::kNegative);
  EXPECT_DOUBLE_EQ(l[1].best_tiou, 0.0);
  EXPECT_EQ(l[2].label, Label::kNegative);
  EXPECT_DOUBLE_EQ(l[2].best_tiou, 1.0 / 3.0);
  EXPECT_EQ(l[3].label, Label::kPositive);  // 0.8
  EXPECT_EQ(l[4].label, Label::kIgnore);    // 10/15
  EXPECT_EQ(label_candidates(c, {})[0].label, Label::kNegative);
}

TEST(Io, BankAndCandidatesRoundTrip) {
  const WindowBank bank{{0.1, 0.35, 0.7}};
  EXPECT_EQ(bank_from_json(bank_to_json(bank)).centers, bank.centers);
  EXPECT_THROW(bank_from_json("{\"K\": 2, \"centers\": [0.5, 0.2]}"), DataError);
  EXPECT_THROW(bank_from_json("{\"K\": 3, \"centers\": [0.2, 0.5]}"), DataError);

  const CandidateProposal c{Interval(1.5, 7.25), 0.35, Label::kIgnore, 0.625};
  const auto back = parse_candidates_jsonl(candidate_to_jsonl("vid", c) + "\n");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].video_id, "vid");
  EXPECT_EQ(back[0].candidate.interval, c.interval);
  EXPECT_EQ(back[0].candidate.label, Label::kIgnore);
  EXPECT_DOUBLE_EQ(back[0].candidate.best_tiou, 0.625);
  EXPECT_THROW(parse_candidates_jsonl("{\"video_id\": 1}\n"), DataError);
}
