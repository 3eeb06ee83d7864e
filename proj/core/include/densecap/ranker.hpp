#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "densecap/features.hpp"
#include "densecap/optim.hpp"
#include "densecap/rng.hpp"
#include "densecap/timeline.hpp"

namespace densecap {

// The four feature groups scored by the proposal ranker.
struct RankingFeatures {
  Eigen::VectorXd internal;        // mean of segment features inside the proposal
  Eigen::VectorXd external_left;   // mean forward context before the proposal
  Eigen::VectorXd external_right;  // mean backward context after the proposal
  Eigen::VectorXd boundary_start;  // data[first] - data[first - 1]
  Eigen::VectorXd boundary_end;    // data[last] - data[last + 1]
  Eigen::Vector2d location = Eigen::Vector2d::Zero();  // (center / l, duration / l)

  // Concatenation in declaration order; length 5D + 2.
  Eigen::VectorXd flatten() const;
};

RankingFeatures assemble_features(const FeatureSequence& seq, const ContextSequence& ctx, const Interval& proposal,
                                  const VideoMeta& meta);

// s_p = sigmoid(W2 . relu(W1 x + b1) + b2)
struct RankerModel {
  int hidden = 0;
  int dims = 0;  // D, the per-segment feature width
  Eigen::MatrixXd W1;
  Eigen::VectorXd b1;
  Eigen::VectorXd W2;
  double b2 = 0.0;

  Eigen::Index input_size() const noexcept { return 5 * dims + 2; }

  static RankerModel zeros(int dims, int hidden);
  static RankerModel random(int dims, int hidden, Rng& rng);

  TensorViews tensors();
  ConstTensorViews tensors() const;
};

struct ScoredProposal {
  Interval interval;
  double s_p = 0.0;
  RankingFeatures features;
};

double ranker_logit(const RankerModel& model, const Eigen::VectorXd& x);
double ranker_forward(const RankerModel& model, const Eigen::VectorXd& x);
double ranker_forward(const RankerModel& model, const RankingFeatures& feats);

// Mean binary cross-entropy of the rows of X against labels y in {0, 1}.
// When grad is non-null the gradient of that mean is added into it.
double ranker_loss(const RankerModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   RankerModel* grad = nullptr);

struct RankerSample {
  Eigen::VectorXd x;
  bool positive = false;
};

struct RankerConfig {
  int hidden = 128;
  AdamConfig adam{};
  int batch_size = 256;
  int epochs = 20;
  std::uint64_t seed = 0;
};

struct RankerFit {
  RankerModel model;
  double initial_loss = 0.0;  // class-balanced BCE over the training set
  double final_loss = 0.0;
  std::vector<double> epoch_loss;
};

// Mini-batch Adam on BCE; every batch holds equal numbers of positives and
// negatives, the minority class resampled. Throws DataError if either class
// is missing.
RankerFit train_ranker(std::span<const RankerSample> samples, const RankerConfig& config);

struct FeaturizedCandidate {
  Interval interval;
  RankingFeatures features;
};

// Strict ordering: s_p descending, then earlier start, then shorter duration.
bool scored_before(const ScoredProposal& a, const ScoredProposal& b);

// Keeps candidates with s_p > threshold, best first.
std::vector<ScoredProposal> score_and_filter(const RankerModel& model, std::span<const FeaturizedCandidate> candidates,
                                             double threshold = 0.5);

std::string ranker_to_json(const RankerModel& model);
RankerModel ranker_from_json(const std::string& text);

std::string scored_to_jsonl(const std::string& video_id, const ScoredProposal& p);

struct ScoredRecord {
  std::string video_id;
  Interval interval;
  double s_p = 0.0;
};
std::vector<ScoredRecord> parse_scored_jsonl(const std::string& text);

}  // namespace densecap
