#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "densecap/text.hpp"
#include "densecap/timeline.hpp"

namespace densecap {

inline constexpr int kMaxNgram = 4;

using NGramCounts = std::map<Tokens, int>;

NGramCounts ngram_counts(const Tokens& tokens, int n);

// Sentence BLEU-4: clipped n-gram precisions, orders 2..4 with zero matches
// smoothed to 1 / (count + 1), brevity penalty against the closest reference
// length. Returns 0 for an empty candidate or no unigram match.
double bleu4(const Tokens& candidate, std::span<const Tokens> references);

// Document frequencies for CIDEr. One document is the reference set of one
// groundtruth event.
class CiderCorpus {
 public:
  CiderCorpus() = default;
  explicit CiderCorpus(std::span<const std::vector<Tokens>> documents);

  int n_docs() const noexcept { return n_docs_; }
  bool empty() const noexcept { return n_docs_ == 0; }
  int df(const Tokens& ngram) const;
  double idf(const Tokens& ngram) const;

 private:
  std::map<Tokens, int> df_;
  int n_docs_ = 0;
};

struct CiderOptions {
  bool cider_d = true;  // gaussian length penalty and x10 scale; false gives plain CIDEr
  double sigma = 6.0;
};

double cider(const Tokens& candidate, std::span<const Tokens> references, const CiderCorpus& corpus,
             const CiderOptions& options = {});

struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
};

// Exact-match unigram alignment with the most matches and, among those, the
// fewest chunks.
MeteorAlignment meteor_align(const Tokens& candidate, const Tokens& reference);

// Exact-match METEOR: F = 10PR / (R + 9P), penalty 0.5 (chunks / m)^3,
// best over references.
double meteor_lite(const Tokens& candidate, std::span<const Tokens> references);

inline constexpr std::array<double, 3> kDefaultTiouThresholds = {0.3, 0.5, 0.7};

struct PrRow {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_undefined = false;  // no predictions (in some video, for corpus rows); reported as 0
  bool recall_undefined = false;     // no groundtruth; recall reported as 0
};

struct ProposalPr {
  std::vector<PrRow> rows;
  double avg_precision = 0.0;
  double avg_recall = 0.0;
};

// Many-to-one matching at each threshold: a prediction is correct when its
// best tIoU against any groundtruth reaches the threshold, and likewise for
// recall.
ProposalPr proposal_pr(std::span<const Interval> predictions, std::span<const Interval> groundtruth,
                       std::span<const double> thresholds = kDefaultTiouThresholds);

using VideoIntervals = std::map<std::string, std::vector<Interval>>;

// Per-video precision/recall averaged over the videos of `groundtruth`.
ProposalPr proposal_pr_corpus(const VideoIntervals& predictions, const VideoIntervals& groundtruth,
                              std::span<const double> thresholds = kDefaultTiouThresholds);

struct CaptionedEvent {
  Interval interval;
  std::string caption;
};

using VideoEvents = std::map<std::string, std::vector<CaptionedEvent>>;

struct MetricScores {
  double bleu4 = 0.0;
  double meteor = 0.0;
  double cider = 0.0;
};

struct EvalReport {
  std::vector<double> thresholds;
  ProposalPr proposals;
  std::vector<MetricScores> per_threshold;
  MetricScores mean;  // averaged over thresholds
  std::vector<std::size_t> matched_pairs;
  std::size_t n_predictions = 0;
  std::size_t n_groundtruth = 0;

  std::string to_json() const;
  std::string to_table() const;
};

// At each threshold every predicted event is scored against each groundtruth
// event of its video with tIoU >= threshold (mean over those pairs, 0 when
// none); the metric is the mean over predicted events. Predictions for videos
// absent from the groundtruth are ignored.
EvalReport dense_caption_eval(const VideoEvents& predictions, const VideoEvents& groundtruth,
                              std::span<const double> thresholds = kDefaultTiouThresholds,
                              const CiderOptions& cider_options = {});

// Proposal-only report (no caption metrics).
EvalReport proposal_eval(const VideoIntervals& predictions, const VideoIntervals& groundtruth,
                         std::span<const double> thresholds = kDefaultTiouThresholds);

}  // namespace densecap
