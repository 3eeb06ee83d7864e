#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "densecap/features.hpp"
#include "densecap/metrics.hpp"
#include "densecap/optim.hpp"
#include "densecap/rng.hpp"
#include "densecap/text.hpp"

namespace densecap {

// ---------------------------------------------------------------------------
// Topic predictor: single-layer softmax classifier over pooled features.

struct TopicPredictor {
  Eigen::MatrixXd W;  // n_topics x D
  Eigen::VectorXd b;

  int n_topics() const noexcept { return static_cast<int>(W.rows()); }
  int dims() const noexcept { return static_cast<int>(W.cols()); }

  Eigen::VectorXd predict(const Eigen::VectorXd& pooled) const;

  static TopicPredictor zeros(int dims, int n_topics);
  TensorViews tensors();
  ConstTensorViews tensors() const;
};

// Mean softmax cross-entropy; gradient of that mean added into grad.
double topic_loss(const TopicPredictor& model, std::span<const Eigen::VectorXd> features, std::span<const int> labels,
                  TopicPredictor* grad = nullptr);

struct TopicConfig {
  AdamConfig adam{.lr = 1e-2};
  int epochs = 200;
  std::uint64_t seed = 0;
};

// Full-batch Adam on softmax cross-entropy. Requires at least two distinct
// labels, all inside [0, n_topics).
TopicPredictor train_topic_predictor(std::span<const Eigen::VectorXd> features, std::span<const int> labels,
                                     int n_topics, const TopicConfig& config = {});

// ---------------------------------------------------------------------------
// Recurrent caption decoder.
//
//   h_t   = tanh(W_h h_{t-1} + W_x E[y_{t-1}] + b_h)
//   p_t   = softmax(W_o [h_t; c_t] + b_o)
//
// The conditioning vector c_t depends on the variant:
//   vanilla    mean pool of the proposal segments
//   attention  sum_i a_i f_i with a = softmax_i(h_{t-1}' W_a f_i)
//   topic      [mean pool; topic distribution of the mean pool]

enum class DecoderVariant { kVanilla, kAttention, kTopic };

std::string_view to_string(DecoderVariant v);
DecoderVariant variant_from_string(std::string_view s);

struct DecoderShape {
  DecoderVariant variant = DecoderVariant::kVanilla;
  int vocab = 0;
  int embed = 64;
  int hidden = 128;
  int dims = 0;      // D
  int n_topics = 0;  // topic variant only
};

struct DecoderModel {
  DecoderShape shape;
  Eigen::MatrixXd E;    // V x d_e
  Eigen::MatrixXd W_h;  // d_h x d_h
  Eigen::MatrixXd W_x;  // d_h x d_e
  Eigen::VectorXd b_h;
  Eigen::MatrixXd W_o;  // V x (d_h + d_c)
  Eigen::VectorXd b_o;
  Eigen::MatrixXd W_a;   // d_h x D, attention only
  TopicPredictor topic;  // topic only; held fixed while the decoder trains

  int cond_dim() const noexcept;

  static DecoderModel zeros(const DecoderShape& shape);
  static DecoderModel random(const DecoderShape& shape, Rng& rng);

  // Trainable tensors; excludes the topic predictor.
  TensorViews tensors();
  ConstTensorViews tensors() const;
};

// Segment rows a proposal is decoded from.
struct CaptionInput {
  Eigen::MatrixXd segments;  // n x D
  Eigen::VectorXd pooled;    // mean of segments

  static CaptionInput from_rows(Eigen::MatrixXd rows);
};

// Rows first..last of the feature sequence. With a context sequence, the
// forward context at `first` and the backward context at `last` are appended.
CaptionInput make_caption_input(const FeatureSequence& seq, const SegmentSpan& span,
                                const ContextSequence* ctx = nullptr);

Eigen::VectorXd initial_hidden(const DecoderModel& model);

// Conditioning vector for one step; alpha receives attention weights.
Eigen::VectorXd conditioning(const DecoderModel& model, const Eigen::VectorXd& h_prev, const CaptionInput& input,
                             Eigen::VectorXd* alpha = nullptr);

struct StepResult {
  Eigen::VectorXd h;
  Eigen::VectorXd prob;
};

StepResult decode_step(const DecoderModel& model, const Eigen::VectorXd& h_prev, int prev_token,
                       const CaptionInput& input);

// Teacher-forced negative log-likelihood of `target` (ending in <eos>).
// When grad is non-null, grad_scale times the BPTT gradient is added into it.
double sequence_nll(const DecoderModel& model, const CaptionInput& input, std::span<const int> target,
                    DecoderModel* grad = nullptr, double grad_scale = 1.0);

struct CaptionPair {
  CaptionInput input;
  std::vector<int> target;
};

struct XeConfig {
  AdamConfig adam{.lr = 2e-3, .clip_norm = 5.0};
  int epochs = 30;
  int batch_size = 16;
  std::uint64_t seed = 0;
};

struct XeFit {
  DecoderModel model;
  std::vector<double> epoch_perplexity;
};

XeFit train_xe(DecoderModel model, std::span<const CaptionPair> pairs, const XeConfig& config);

// ---------------------------------------------------------------------------
// Decoding. Generated sequences never contain <bos>; a sequence reaching
// max_length tokens ends with <eos>.

inline constexpr int kDefaultBeam = 5;
inline constexpr int kDefaultMaxLength = 20;

struct CaptionHypothesis {
  std::vector<int> tokens;  // ends with <eos>
  double log_prob = 0.0;
  double s_c = 0.0;          // exp(log_prob / token count)
  bool partial = false;      // no hypothesis completed; <eos> appended
};

double caption_score(double log_prob, std::size_t n_tokens);

struct EnsembleState {
  std::vector<Eigen::VectorXd> h;
};

EnsembleState initial_state(std::span<const DecoderModel> models);

// Arithmetic mean of the member distributions; each member's hidden state
// advances independently.
Eigen::VectorXd ensemble_step(std::span<const DecoderModel> models, EnsembleState& state, int prev_token,
                              const CaptionInput& input);

CaptionHypothesis greedy_decode(std::span<const DecoderModel> models, const CaptionInput& input,
                                int max_length = kDefaultMaxLength);

// Length-synchronous beam search over the ensemble. Each step keeps the best
// `beam` non-<eos> expansions; an <eos> expansion joins the completed pool
// when fewer than `beam` non-<eos> expansions outrank it. At max_length every
// live hypothesis is closed with <eos>. Stops once the pool holds `beam`
// entries.
// Returns the completed hypothesis with the best mean token log-probability.
CaptionHypothesis beam_search(std::span<const DecoderModel> models, const CaptionInput& input,
                              int beam = kDefaultBeam, int max_length = kDefaultMaxLength);

// Multinomial sample at temperature 1.
std::vector<int> sample_caption(const DecoderModel& model, const CaptionInput& input, int max_length, Rng& rng);

// ---------------------------------------------------------------------------
// Self-critical sequence training.

class CaptionReward {
 public:
  CaptionReward(const CiderCorpus* corpus, double alpha_cider, double alpha_meteor);

  double operator()(const Tokens& candidate, std::span<const Tokens> references) const;
  bool is_zero() const noexcept { return alpha_cider_ == 0.0 && alpha_meteor_ == 0.0; }

 private:
  const CiderCorpus* corpus_;
  double alpha_cider_;
  double alpha_meteor_;
};

struct ScstConfig {
  double alpha_cider = 1.0;
  double alpha_meteor = 1.0;
  int max_length = kDefaultMaxLength;
  AdamConfig adam{.lr = 5e-5, .clip_norm = 5.0};
};

struct ScstState {
  ScstState(const DecoderModel& model, const ScstConfig& config, std::uint64_t seed);

  Adam adam;
  Rng rng;
};

struct ScstStepResult {
  std::vector<int> sample;
  std::vector<int> greedy;
  double sample_reward = 0.0;
  double greedy_reward = 0.0;
  double advantage = 0.0;
  bool updated = false;
  bool skipped = false;  // sampled caption empty twice
};

// One policy-gradient step with the greedy decode as baseline:
// grad = -(r(sample) - r(greedy)) * d/dtheta sum_t log p(sample_t).
// No parameter changes when the advantage is zero.
ScstStepResult scst_update(DecoderModel& model, ScstState& state, const CaptionInput& input,
                           std::span<const Tokens> references, const Vocabulary& vocab, const CaptionReward& reward,
                           const ScstConfig& config);

// ---------------------------------------------------------------------------
// Checkpoints and caption dumps.

struct CaptionCheckpoint {
  DecoderModel model;
  Vocabulary vocab;
  bool use_context = false;
};

std::string checkpoint_to_json(const CaptionCheckpoint& ckpt);
CaptionCheckpoint checkpoint_from_json(const std::string& text);

struct CaptionRecord {
  std::string video_id;
  Interval interval;
  std::string caption;
  double s_c = 0.0;
  double log_prob = 0.0;
};

std::string caption_to_jsonl(const CaptionRecord& rec);
std::vector<CaptionRecord> parse_captions_jsonl(const std::string& text);

}  // namespace densecap
