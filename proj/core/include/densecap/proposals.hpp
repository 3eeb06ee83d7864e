#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "densecap/timeline.hpp"

namespace densecap {

// Window-length proportions w^p_k (fraction of video length), sorted ascending.
struct WindowBank {
  std::vector<double> centers;

  std::size_t K() const noexcept { return centers.size(); }
};

enum class Label { kUnlabeled, kPositive, kNegative, kIgnore };

std::string_view to_string(Label label);
Label label_from_string(std::string_view s);

inline constexpr double kPositiveTiou = 0.7;
inline constexpr double kNegativeTiou = 0.5;

struct CandidateProposal {
  Interval interval;
  double window_proportion = 0.0;
  Label label = Label::kUnlabeled;
  double best_tiou = 0.0;
};

inline constexpr int kDefaultClusters = 20;
inline constexpr int kMaxLloydIterations = 100;

// Deterministic 1-D k-means over groundtruth length proportions: quantile
// initialization, Lloyd iterations to an assignment fixpoint (at most 100),
// empty clusters re-seeded at the point farthest from its center.
WindowBank cluster_proportions(std::span<const double> proportions, int K = kDefaultClusters);

// Sliding windows of length w_k = centers[k] * duration with stride w_k / 4.
// Windows are clipped to the video; clipped windows shorter than w_k / 2 are
// dropped, and windows covering an already emitted segment span are skipped.
std::vector<CandidateProposal> generate_candidates(const VideoMeta& meta, const WindowBank& bank);

// Assigns best_tiou against the groundtruth and the positive/negative/ignore
// label. With no groundtruth every candidate is negative.
std::vector<CandidateProposal> label_candidates(std::vector<CandidateProposal> cands,
                                                std::span<const Interval> groundtruth);

std::string bank_to_json(const WindowBank& bank);
WindowBank bank_from_json(const std::string& text);

// One JSON line {video_id, start, end, best_tiou, label}, no trailing newline.
std::string candidate_to_jsonl(const std::string& video_id, const CandidateProposal& cand);

struct VideoCandidate {
  std::string video_id;
  CandidateProposal candidate;
};
std::vector<VideoCandidate> parse_candidates_jsonl(const std::string& text);

}  // namespace densecap
