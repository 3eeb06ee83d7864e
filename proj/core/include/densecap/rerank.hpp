#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "densecap/timeline.hpp"

namespace densecap {

inline constexpr std::size_t kDefaultTopK = 10;

struct RerankInput {
  Interval interval;
  double s_p = 0.0;
  std::string caption;
  double s_c = 0.0;
};

struct RankedEvent {
  Interval interval;
  std::string caption;
  double s_p = 0.0;
  double s_c = 0.0;
  double s = 0.0;  // s_p * s_c
};

// Sorts by s = s_p * s_c descending (earlier start, then shorter duration on
// ties) and keeps the first top_k.
std::vector<RankedEvent> rerank(std::span<const RerankInput> events, std::size_t top_k = kDefaultTopK);

using Submission = std::map<std::string, std::vector<RankedEvent>>;

// {video_id: [{"sentence": ..., "timestamp": [start, end]}, ...]}
std::string submission_to_json(const Submission& submission);

struct SubmissionEvent {
  Interval interval;
  std::string sentence;
};
std::map<std::string, std::vector<SubmissionEvent>> parse_submission(const std::string& text);

}  // namespace densecap
