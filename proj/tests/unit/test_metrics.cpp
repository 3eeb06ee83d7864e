#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "densecap/errors.hpp"
#include "densecap/metrics.hpp"
#include "densecap/rng.hpp"
#include "oracles.hpp"

using namespace densecap;

namespace {

Tokens T(const char* s) { return tokenize(s); }

std::vector<Tokens> refs(std::initializer_list<const char*> r) {
  std::vector<Tokens> out;
  for (const char* s : r) out.push_back(T(s));
  return out;
}

}  // namespace

TEST(Bleu, IdenticalIsOne) {
  EXPECT_DOUBLE_EQ(bleu4(T("a man is cooking the soup"), refs({"a man is cooking the soup"})), 1.0);
  EXPECT_DOUBLE_EQ(bleu4(T("hello"), refs({"hello"})), 1.0);
}

TEST(Bleu, HandWorkedFiveTokens) {
  // precisions 5/5, 3/4, 2/3, 1/2; brevity penalty exp(1 - 6/5)
  const double expected = std::exp(1.0 - 6.0 / 5.0) * std::pow(1.0 * 0.75 * (2.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(bleu4(T("the cat sat on mat"), refs({"the cat sat on the mat"})), expected, 1e-9);
}

TEST(Bleu, SmoothingOnHigherOrders) {
  // precisions 2/4, 1/3, smoothed 1/3, smoothed 1/2
  EXPECT_NEAR(bleu4(T("a b c d"), refs({"a b x y"})), std::pow(0.5 / 3.0 / 3.0 * 0.5, 0.25), 1e-9);
}

TEST(Bleu, NoUnigramOverlapIsZero) {
  EXPECT_EQ(bleu4(T("a b c d e f g h i j"), refs({"k l m n o p q r s t"})), 0.0);
  EXPECT_THROW(bleu4(T("a"), {}), DataError);
}

TEST(Bleu, ClosestReferenceLengthAndClipping) {
  // "the" clipped to one match; higher orders smoothed; reference shorter, so no penalty.
  EXPECT_NEAR(bleu4(T("the the the"), refs({"the cat"})),
              std::pow((1.0 / 3.0) * (1.0 / 3.0) * 0.5 * 1.0, 0.25), 1e-12);
  // Reference lengths 2 and 4 are equally close to 3; the shorter wins (no penalty).
  const double b = bleu4(T("x y z"), refs({"x y", "x y z w"}));
  EXPECT_NEAR(b, std::pow(1.0 * 1.0 * 1.0 * 1.0, 0.25), 1e-12);
}

TEST(Cider, HandTwoDocumentCorpus) {
  const std::vector<std::vector<Tokens>> docs{refs({"a b"}), refs({"c d"})};
  const CiderCorpus corpus(docs);
  EXPECT_EQ(corpus.n_docs(), 2);
  EXPECT_DOUBLE_EQ(corpus.idf(T("a")), std::log(2.0));
  // n=1: cand (2,1), ref (1,1) -> 3/sqrt(10); n=2: "a a","a b" vs "a b" -> 1/sqrt(2); n=3,4: 0
  const double cos_sum = 3.0 / std::sqrt(10.0) + 1.0 / std::sqrt(2.0);
  const auto r = refs({"a b"});
  EXPECT_NEAR(cider(T("a a b"), r, corpus), 10.0 * std::exp(-1.0 / 72.0) * cos_sum / 4.0, 1e-9);
  EXPECT_NEAR(cider(T("a a b"), r, corpus, {.cider_d = false}), cos_sum / 4.0, 1e-9);
  EXPECT_NEAR(cider(T("a b"), r, corpus), 10.0 * 2.0 / 4.0, 1e-9);
}

TEST(Cider, ZeroIdfGivesZero) {
  const std::vector<std::vector<Tokens>> docs{refs({"a b"}), refs({"a b"})};
  const CiderCorpus corpus(docs);
  EXPECT_EQ(cider(T("a b"), refs({"a b"}), corpus), 0.0);
  EXPECT_THROW(cider(T("a"), refs({"a"}), CiderCorpus{}), DataError);
}

TEST(Cider, ReferenceIsBestAmongSameLengthCandidates) {
  const std::vector<std::vector<Tokens>> docs{refs({"a b c"}), refs({"b c d"}), refs({"d a"})};
  const CiderCorpus corpus(docs);
  const auto r = refs({"a b c"});
  const double self = cider(T("a b c"), r, corpus);
  const char* words[] = {"a", "b", "c", "d"};
  for (const char* x : words) {
    for (const char* y : words) {
      for (const char* z : words) {
        EXPECT_LE(cider(Tokens{x, y, z}, r, corpus), self + 1e-12);
      }
    }
  }
}

TEST(Meteor, IdenticalTenTokens) {
  const auto c = T("a b c d e f g h i j");
  EXPECT_NEAR(meteor_lite(c, std::vector<Tokens>{c}), 0.9995, 1e-12);
}

TEST(Meteor, NoOverlapAndReversed) {
  EXPECT_EQ(meteor_lite(T("a b"), refs({"c d"})), 0.0);
  const auto a = meteor_align(T("d c b a"), T("a b c d"));
  EXPECT_EQ(a.matches, 4);
  EXPECT_EQ(a.chunks, 4);
  EXPECT_NEAR(meteor_lite(T("d c b a"), refs({"a b c d"})), 0.5, 1e-12);
}

TEST(Meteor, HandWorkedExample) {
  // m = 5, P = 1, R = 5/6, chunks 2
  const double f = 10.0 * 1.0 * (5.0 / 6.0) / (5.0 / 6.0 + 9.0);
  const double expected = f * (1.0 - 0.5 * std::pow(2.0 / 5.0, 3));
  EXPECT_NEAR(meteor_lite(T("the cat sat on mat"), refs({"the cat sat on the mat"})), expected, 1e-9);
}

TEST(Meteor, AlignmentPrefersFewestChunks) {
  const auto a = meteor_align(T("a b a b"), T("a b"));
  EXPECT_EQ(a.matches, 2);
  EXPECT_EQ(a.chunks, 1);
  const auto b = meteor_align(T("x a b y a b"), T("a b a b"));
  EXPECT_EQ(b.matches, 4);
  EXPECT_EQ(b.chunks, 2);
  EXPECT_NEAR(meteor_lite(T("a b a b"), refs({"a b"})), (10.0 * 0.5 / 5.5) * (1.0 - 0.5 / 8.0), 1e-12);
}

TEST(Metrics, BoundedAndReferenceOrderInvariant) {
  Rng rng(4);
  const char* words[] = {"a", "b", "c", "d", "e"};
  const auto draw = [&] {
    Tokens t;
    const auto n = rng.integer(1, 7);
    for (long long i = 0; i < n; ++i) t.push_back(words[rng.index(5)]);
    return t;
  };
  std::vector<std::vector<Tokens>> docs;
  for (int i = 0; i < 10; ++i) docs.push_back({draw(), draw()});
  const CiderCorpus corpus(docs);
  for (int i = 0; i < 200; ++i) {
    const Tokens c = draw();
    std::vector<Tokens> r{draw(), draw(), draw()};
    std::vector<Tokens> rev(r.rbegin(), r.rend());
    const double b = bleu4(c, r);
    const double m = meteor_lite(c, r);
    const double d = cider(c, r, corpus);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0 + 1e-12);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
    EXPECT_GE(d, 0.0);
    EXPECT_DOUBLE_EQ(b, bleu4(c, rev));
    EXPECT_DOUBLE_EQ(m, meteor_lite(c, rev));
    EXPECT_NEAR(d, cider(c, rev, corpus), 1e-12);
  }
}

TEST(ProposalPr, IdenticalAndEmpty) {
  const std::vector<Interval> gt{Interval(0, 10), Interval(20, 30)};
  const auto same = proposal_pr(gt, gt);
  for (const auto& row : same.rows) {
    EXPECT_EQ(row.precision, 1.0);
    EXPECT_EQ(row.recall, 1.0);
  }
  const auto none = proposal_pr({}, gt);
  for (const auto& row : none.rows) {
    EXPECT_TRUE(row.precision_undefined);
    EXPECT_EQ(row.precision, 0.0);
    EXPECT_EQ(row.recall, 0.0);
  }
}

TEST(ProposalPr, HandCaseAgainstPairwiseTable) {
  const std::vector<Interval> gt{Interval(0, 10), Interval(20, 30)};
  const std::vector<Interval> pred{Interval(0, 10), Interval(5, 15), Interval(18, 30)};
  const std::vector<double> th{0.3, 0.5, 0.7, 0.9};
  const auto pr = proposal_pr(pred, gt, th);
  // best tIoU per prediction: 1, 1/3, 10/12; per groundtruth: 1, 10/12
  const double p[] = {1.0, 2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0};
  const double r[] = {1.0, 1.0, 1.0, 0.5};
  for (std::size_t k = 0; k < th.size(); ++k) {
    EXPECT_DOUBLE_EQ(pr.rows[k].precision, p[k]);
    EXPECT_DOUBLE_EQ(pr.rows[k].recall, r[k]);
  }
  EXPECT_DOUBLE_EQ(pr.avg_precision, (p[0] + p[1] + p[2] + p[3]) / 4.0);
}

TEST(ProposalPr, MonotoneInThreshold) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Interval> a, b;
    for (int i = 0; i < 6; ++i) {
      const double s = rng.uniform(0, 50);
      a.emplace_back(s, s + rng.uniform(1, 20));
      const double t = rng.uniform(0, 50);
      b.emplace_back(t, t + rng.uniform(1, 20));
    }
    const std::vector<double> th{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto pr = proposal_pr(a, b, th);
    for (std::size_t k = 1; k < th.size(); ++k) {
      EXPECT_LE(pr.rows[k].precision, pr.rows[k - 1].precision);
      EXPECT_LE(pr.rows[k].recall, pr.rows[k - 1].recall);
    }
  }
}

TEST(ProposalPr, CorpusIsMeanOverGroundtruthVideos) {
  VideoIntervals gt{{"a", {Interval(0, 10)}}, {"b", {Interval(0, 10)}}};
  VideoIntervals pred{{"a", {Interval(0, 10)}}, {"zzz", {Interval(0, 10)}}};
  const auto pr = proposal_pr_corpus(pred, gt, std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(pr.rows[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(pr.rows[0].precision, 0.5);
  EXPECT_TRUE(pr.rows[0].precision_undefined);
}

TEST(DenseEval, IdenticalPredictions) {
  VideoEvents gt{{"a", {{Interval(0, 10), "a man is cooking the soup"}, {Interval(10, 25), "a woman plays piano"}}},
                 {"b", {{Interval(3, 9), "the dog runs fast"}}}};
  const auto report = dense_caption_eval(gt, gt);
  ASSERT_EQ(report.per_threshold.size(), 3u);
  for (const auto& s : report.per_threshold) {
    EXPECT_DOUBLE_EQ(s.bleu4, 1.0);
    EXPECT_GT(s.meteor, 0.99);
  }
  EXPECT_DOUBLE_EQ(report.mean.bleu4, 1.0);
}

TEST(DenseEval, DisjointPredictionsScoreZero) {
  VideoEvents gt{{"a", {{Interval(0, 10), "a man is cooking"}}}};
  VideoEvents pred{{"a", {{Interval(20, 30), "a man is cooking"}}}};
  const auto report = dense_caption_eval(pred, gt);
  EXPECT_EQ(report.mean.bleu4, 0.0);
  EXPECT_EQ(report.mean.meteor, 0.0);
  EXPECT_EQ(report.mean.cider, 0.0);
}

TEST(DenseEval, HandBuiltTwoVideoCase) {
  VideoEvents gt{{"A", {{Interval(0, 10), "a man cooks food"}, {Interval(10, 20), "a woman plays piano"}}},
                 {"B", {{Interval(0, 5), "dog runs"}}}};
  VideoEvents pred{{"A", {{Interval(0, 10), "a man cooks food"}, {Interval(5, 15), "a woman plays piano"}}},
                   {"B", {{Interval(0, 5), "cat runs"}}},
                   {"C", {{Interval(0, 5), "ignored entirely"}}}};
  const auto report = dense_caption_eval(pred, gt);
  const double same = 1.0 - 0.5 / 64.0;  // 4 tokens, one chunk
  const double one_of_four = 0.25 * 0.5;  // m=1, F=1/4, penalty 1/2
  const double one_of_two = 0.5 * 0.5;    // m=1, F=1/2, penalty 1/2
  const double at03 = (same + 0.5 * (one_of_four + same) + one_of_two) / 3.0;
  const double at05 = (same + 0.0 + one_of_two) / 3.0;
  EXPECT_NEAR(report.per_threshold[0].meteor, at03, 1e-9);
  EXPECT_NEAR(report.per_threshold[1].meteor, at05, 1e-9);
  EXPECT_NEAR(report.per_threshold[2].meteor, at05, 1e-9);
  EXPECT_NEAR(report.mean.meteor, (at03 + 2.0 * at05) / 3.0, 1e-9);
  EXPECT_EQ(report.n_predictions, 3u);
}

TEST(DenseEval, PredictionOrderInvariant) {
  VideoEvents gt{{"a", {{Interval(0, 10), "a man is cooking"}, {Interval(8, 20), "a woman is singing"}}}};
  VideoEvents p1{{"a", {{Interval(0, 9), "a man is singing"}, {Interval(7, 20), "a woman is cooking"}}}};
  VideoEvents p2{{"a", {p1["a"][1], p1["a"][0]}}};
  const auto r1 = dense_caption_eval(p1, gt);
  const auto r2 = dense_caption_eval(p2, gt);
  EXPECT_NEAR(r1.mean.cider, r2.mean.cider, 1e-12);
  EXPECT_NEAR(r1.mean.bleu4, r2.mean.bleu4, 1e-12);
  EXPECT_NEAR(r1.mean.meteor, r2.mean.meteor, 1e-12);
}

TEST(EvalReport, JsonAndTable) {
  VideoEvents gt{{"a", {{Interval(0, 10), "a man is cooking"}}}};
  const auto report = dense_caption_eval(gt, gt);
  const std::string j = report.to_json();
  EXPECT_NE(j.find("\"thresholds\""), std::string::npos);
  EXPECT_NE(report.to_table().find("Meteor"), std::string::npos);
}
