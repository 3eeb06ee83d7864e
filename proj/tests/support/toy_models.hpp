#pragma once

// Tiny decoders and the one-proposal SCST task shared by the caption unit
// tests and the acceptance binary.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "densecap/caption.hpp"
#include "densecap/metrics.hpp"
#include "densecap/rng.hpp"
#include "densecap/text.hpp"

namespace densecap::toy {

inline void fill(Eigen::MatrixXd& m, double scale, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
}

inline void fill(Eigen::VectorXd& v, double scale, Rng& rng) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = scale * rng.normal();
}

inline DecoderShape shape(DecoderVariant variant, int vocab, int embed, int hidden, int dims, int n_topics = 3) {
  DecoderShape s;
  s.variant = variant;
  s.vocab = vocab;
  s.embed = embed;
  s.hidden = hidden;
  s.dims = dims;
  s.n_topics = variant == DecoderVariant::kTopic ? n_topics : 0;
  return s;
}

// Every parameter, biases and topic predictor included, drawn N(0, scale^2).
inline DecoderModel random_model(const DecoderShape& s, Rng& rng, double scale = 0.5) {
  DecoderModel m = DecoderModel::zeros(s);
  fill(m.E, scale, rng);
  fill(m.W_h, scale, rng);
  fill(m.W_x, scale, rng);
  fill(m.b_h, scale, rng);
  fill(m.W_o, scale, rng);
  fill(m.b_o, scale, rng);
  if (s.variant == DecoderVariant::kAttention) fill(m.W_a, scale, rng);
  if (s.variant == DecoderVariant::kTopic) {
    fill(m.topic.W, scale, rng);
    fill(m.topic.b, scale, rng);
  }
  return m;
}

inline CaptionInput random_input(int rows, int dims, Rng& rng) {
  Eigen::MatrixXd f(rows, dims);
  fill(f, 1.0, rng);
  return CaptionInput::from_rows(std::move(f));
}

struct ScstToyResult {
  double reward_at_start = 0.0;
  double mean_reward = 0.0;  // greedy reward averaged over the steps
  int updates = 0;
};

// One proposal, one reference caption. The decoder is briefly pretrained with
// cross-entropy so that sampling explores near the reference, then fine-tuned
// with SCST; the greedy reward is recorded after every step.
inline ScstToyResult run_scst_toy(std::uint64_t seed, int steps = 200) {
  const std::string reference = "a man is cutting the onion";
  const std::vector<std::string> corpus_text = {reference, "a woman is washing the car",
                                                "a dog is chasing the ball", "a man is playing the guitar"};
  const Vocabulary vocab = build_vocab(corpus_text);
  std::vector<std::vector<Tokens>> docs;
  for (const auto& c : corpus_text) docs.push_back({tokenize(c)});
  const CiderCorpus corpus(docs);
  const std::vector<Tokens> refs = {tokenize(reference)};

  Rng rng(seed);
  const DecoderShape s = shape(DecoderVariant::kVanilla, vocab.size(), 8, 16, 4);
  const CaptionInput input = random_input(3, 4, rng);
  DecoderModel model = DecoderModel::random(s, rng);

  XeConfig xe;
  xe.epochs = 3;
  xe.batch_size = 1;
  xe.seed = seed;
  const std::vector<CaptionPair> pairs = {{input, vocab.encode(reference)}};
  model = train_xe(std::move(model), pairs, xe).model;

  ScstConfig cfg;
  cfg.adam.lr = 1e-2;
  const CaptionReward reward(&corpus, cfg.alpha_cider, cfg.alpha_meteor);
  const auto greedy_reward = [&] {
    const auto g = greedy_decode(std::span<const DecoderModel>(&model, 1), input, cfg.max_length);
    return reward(vocab.words(g.tokens), refs);
  };

  ScstToyResult out;
  out.reward_at_start = greedy_reward();
  ScstState state(model, cfg, seed);
  double sum = 0.0;
  for (int step = 0; step < steps; ++step) {
    const auto r = scst_update(model, state, input, refs, vocab, reward, cfg);
    out.updates += r.updated ? 1 : 0;
    sum += greedy_reward();
  }
  out.mean_reward = sum / static_cast<double>(steps);
  return out;
}

}  // namespace densecap::toy
