#include "densecap/caption.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "densecap/errors.hpp"

namespace densecap {
namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - m).exp().matrix();
  return e / e.sum();
}

void fill_uniform(Eigen::MatrixXd& m, double a, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
}

void check_input(const DecoderModel& model, const CaptionInput& input) {
  if (input.segments.rows() == 0) throw DataError("caption input has no segments");
  if (input.segments.cols() != model.shape.dims || input.pooled.size() != model.shape.dims) {
    throw DataError("caption input width " + std::to_string(input.segments.cols()) + " does not match decoder D=" +
                    std::to_string(model.shape.dims));
  }
}

void check_token(const DecoderModel& model, int token) {
  if (token < 0 || token >= model.shape.vocab) {
    throw DataError("token id " + std::to_string(token) + " outside decoder vocabulary of size " +
                    std::to_string(model.shape.vocab));
  }
}

}  // namespace

// --- topic predictor -------------------------------------------------------

Eigen::VectorXd TopicPredictor::predict(const Eigen::VectorXd& pooled) const { return softmax(W * pooled + b); }

TopicPredictor TopicPredictor::zeros(int dims, int n_topics) {
  return TopicPredictor{Eigen::MatrixXd::Zero(n_topics, dims), Eigen::VectorXd::Zero(n_topics)};
}

TensorViews TopicPredictor::tensors() { return {view(W), view(b)}; }
ConstTensorViews TopicPredictor::tensors() const { return {view(W), view(b)}; }

double topic_loss(const TopicPredictor& model, std::span<const Eigen::VectorXd> features, std::span<const int> labels,
                  TopicPredictor* grad) {
  if (features.size() != labels.size()) throw InternalError("topic_loss: feature/label count mismatch");
  if (features.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(features.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    Eigen::VectorXd p = model.predict(features[i]);
    loss -= std::log(p(labels[i]));
    if (grad != nullptr) {
      p(labels[i]) -= 1.0;
      grad->W += inv_n * p * features[i].transpose();
      grad->b += inv_n * p;
    }
  }
  loss *= inv_n;
  if (!std::isfinite(loss)) throw NumericError("non-finite topic loss");
  return loss;
}

TopicPredictor train_topic_predictor(std::span<const Eigen::VectorXd> features, std::span<const int> labels,
                                     int n_topics, const TopicConfig& config) {
  if (n_topics < 2) throw ConfigError("topic predictor needs n_topics >= 2");
  if (features.empty() || features.size() != labels.size()) throw DataError("topic predictor: missing labels");
  std::vector<int> distinct(labels.begin(), labels.end());
  for (int l : distinct) {
    if (l < 0 || l >= n_topics) throw DataError("topic label " + std::to_string(l) + " outside [0, n_topics)");
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw DataError("topic predictor needs at least two distinct topics in the data");

  const auto dims = static_cast<int>(features[0].size());
  TopicPredictor model = TopicPredictor::zeros(dims, n_topics);
  Rng rng(config.seed);
  Eigen::MatrixXd w(n_topics, dims);
  fill_uniform(w, 0.01, rng);
  model.W = w;
  Adam adam(config.adam, total_size(std::as_const(model).tensors()));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    TopicPredictor grad = TopicPredictor::zeros(dims, n_topics);
    topic_loss(model, features, labels, &grad);
    adam.step(model.tensors(), std::as_const(grad).tensors());
  }
  return model;
}

// --- decoder ---------------------------------------------------------------

std::string_view to_string(DecoderVariant v) {
  switch (v) {
    case DecoderVariant::kVanilla: return "vanilla";
    case DecoderVariant::kAttention: return "attention";
    case DecoderVariant::kTopic: return "topic";
  }
  return "vanilla";
}

DecoderVariant variant_from_string(std::string_view s) {
  if (s == "vanilla") return DecoderVariant::kVanilla;
  if (s == "attention") return DecoderVariant::kAttention;
  if (s == "topic") return DecoderVariant::kTopic;
  throw ConfigError("unknown decoder variant '" + std::string(s) + "' (expected vanilla|attention|topic)");
}

int DecoderModel::cond_dim() const noexcept {
  return shape.variant == DecoderVariant::kTopic ? shape.dims + shape.n_topics : shape.dims;
}

DecoderModel DecoderModel::zeros(const DecoderShape& shape) {
  if (shape.vocab < 3 || shape.embed < 1 || shape.hidden < 1 || shape.dims < 1) {
    throw ConfigError("decoder sizes must be positive and the vocabulary must hold the reserved tokens");
  }
  if (shape.variant == DecoderVariant::kTopic && shape.n_topics < 2) {
    throw ConfigError("topic decoder needs n_topics >= 2");
  }
  DecoderModel m;
  m.shape = shape;
  if (shape.variant != DecoderVariant::kTopic) m.shape.n_topics = 0;
  m.E = Eigen::MatrixXd::Zero(shape.vocab, shape.embed);
  m.W_h = Eigen::MatrixXd::Zero(shape.hidden, shape.hidden);
  m.W_x = Eigen::MatrixXd::Zero(shape.hidden, shape.embed);
  m.b_h = Eigen::VectorXd::Zero(shape.hidden);
  m.W_o = Eigen::MatrixXd::Zero(shape.vocab, shape.hidden + m.cond_dim());
  m.b_o = Eigen::VectorXd::Zero(shape.vocab);
  if (shape.variant == DecoderVariant::kAttention) m.W_a = Eigen::MatrixXd::Zero(shape.hidden, shape.dims);
  if (shape.variant == DecoderVariant::kTopic) m.topic = TopicPredictor::zeros(shape.dims, shape.n_topics);
  return m;
}

DecoderModel DecoderModel::random(const DecoderShape& shape, Rng& rng) {
  DecoderModel m = zeros(shape);
  fill_uniform(m.E, 0.1, rng);
  fill_uniform(m.W_h, 1.0 / std::sqrt(static_cast<double>(shape.hidden)), rng);
  fill_uniform(m.W_x, 1.0 / std::sqrt(static_cast<double>(shape.embed)), rng);
  fill_uniform(m.W_o, 1.0 / std::sqrt(static_cast<double>(m.W_o.cols())), rng);
  if (shape.variant == DecoderVariant::kAttention) {
    fill_uniform(m.W_a, 1.0 / std::sqrt(static_cast<double>(shape.dims)), rng);
  }
  return m;
}

TensorViews DecoderModel::tensors() {
  TensorViews v{view(E), view(W_h), view(W_x), view(b_h), view(W_o), view(b_o)};
  if (shape.variant == DecoderVariant::kAttention) v.push_back(view(W_a));
  return v;
}

ConstTensorViews DecoderModel::tensors() const {
  ConstTensorViews v{view(E), view(W_h), view(W_x), view(b_h), view(W_o), view(b_o)};
  if (shape.variant == DecoderVariant::kAttention) v.push_back(view(W_a));
  return v;
}

CaptionInput CaptionInput::from_rows(Eigen::MatrixXd rows) {
  if (rows.rows() == 0) throw DataError("caption input needs at least one segment row");
  CaptionInput in;
  in.pooled = rows.colwise().mean().transpose();
  in.segments = std::move(rows);
  return in;
}

CaptionInput make_caption_input(const FeatureSequence& seq, const SegmentSpan& span, const ContextSequence* ctx) {
  if (span.last < span.first || span.last >= seq.rows()) {
    throw RangeError("video " + seq.video_id + ": caption span out of range");
  }
  const auto n = static_cast<Eigen::Index>(span.size());
  const Eigen::Index extra = ctx != nullptr ? 2 : 0;
  Eigen::MatrixXd rows(n + extra, static_cast<Eigen::Index>(seq.dims()));
  for (Eigen::Index i = 0; i < n; ++i) {
    rows.row(i) = seq.data.row(static_cast<Eigen::Index>(span.first) + i).cast<double>();
  }
  if (ctx != nullptr) {
    rows.row(n) = ctx->forward.row(static_cast<Eigen::Index>(span.first));
    rows.row(n + 1) = ctx->backward.row(static_cast<Eigen::Index>(span.last));
  }
  return CaptionInput::from_rows(std::move(rows));
}

Eigen::VectorXd initial_hidden(const DecoderModel& model) { return Eigen::VectorXd::Zero(model.shape.hidden); }

Eigen::VectorXd conditioning(const DecoderModel& model, const Eigen::VectorXd& h_prev, const CaptionInput& input,
                             Eigen::VectorXd* alpha) {
  switch (model.shape.variant) {
    case DecoderVariant::kVanilla:
      return input.pooled;
    case DecoderVariant::kAttention: {
      const Eigen::VectorXd u = model.W_a.transpose() * h_prev;  // score_i = h_prev' W_a f_i
      const Eigen::VectorXd a = softmax(input.segments * u);
      if (alpha != nullptr) *alpha = a;
      return input.segments.transpose() * a;
    }
    case DecoderVariant::kTopic: {
      Eigen::VectorXd c(model.cond_dim());
      c << input.pooled, model.topic.predict(input.pooled);
      return c;
    }
  }
  throw InternalError("unknown decoder variant");
}

namespace {

struct StepCache {
  int token_in = 0;
  Eigen::VectorXd h_prev;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  Eigen::VectorXd alpha;
  Eigen::VectorXd prob;
};

void forward_step(const DecoderModel& model, const Eigen::VectorXd& h_prev, int token, const CaptionInput& input,
                  StepCache& out) {
  out.token_in = token;
  out.h_prev = h_prev;
  out.c = conditioning(model, h_prev, input, &out.alpha);
  out.h = (model.W_h * h_prev + model.W_x * model.E.row(token).transpose() + model.b_h).array().tanh().matrix();
  const Eigen::Index dh = model.shape.hidden;
  const Eigen::VectorXd logits =
      model.W_o.leftCols(dh) * out.h + model.W_o.rightCols(model.cond_dim()) * out.c + model.b_o;
  if (!logits.allFinite()) throw NumericError("non-finite decoder logits");
  out.prob = softmax(logits);
}

}  // namespace

StepResult decode_step(const DecoderModel& model, const Eigen::VectorXd& h_prev, int prev_token,
                       const CaptionInput& input) {
  check_input(model, input);
  check_token(model, prev_token);
  StepCache cache;
  forward_step(model, h_prev, prev_token, input, cache);
  return {std::move(cache.h), std::move(cache.prob)};
}

double sequence_nll(const DecoderModel& model, const CaptionInput& input, std::span<const int> target,
                    DecoderModel* grad, double grad_scale) {
  check_input(model, input);
  if (target.empty()) throw DataError("empty caption target");
  for (int tok : target) check_token(model, tok);

  const std::size_t n = target.size();
  std::vector<StepCache> steps(n);
  Eigen::VectorXd h = initial_hidden(model);
  double nll = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const int in_tok = t == 0 ? Vocabulary::kBos : target[t - 1];
    forward_step(model, h, in_tok, input, steps[t]);
    nll -= std::log(steps[t].prob(target[t]));
    h = steps[t].h;
  }
  if (!std::isfinite(nll)) throw NumericError("non-finite caption likelihood");
  if (grad == nullptr) return nll;

  const Eigen::Index dh = model.shape.hidden;
  const Eigen::Index dc = model.cond_dim();
  const bool attention = model.shape.variant == DecoderVariant::kAttention;
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(dh);
  for (std::size_t t = n; t-- > 0;) {
    const StepCache& s = steps[t];
    Eigen::VectorXd dz = s.prob;
    dz(target[t]) -= 1.0;
    dz *= grad_scale;
    grad->W_o.leftCols(dh) += dz * s.h.transpose();
    grad->W_o.rightCols(dc) += dz * s.c.transpose();
    grad->b_o += dz;

    const Eigen::VectorXd dhid = model.W_o.leftCols(dh).transpose() * dz + dh_next;
    const Eigen::VectorXd da = dhid.cwiseProduct((1.0 - s.h.array().square()).matrix());
    grad->W_h += da * s.h_prev.transpose();
    grad->W_x += da * model.E.row(s.token_in);
    grad->b_h += da;
    grad->E.row(s.token_in) += (model.W_x.transpose() * da).transpose();
    Eigen::VectorXd dh_prev = model.W_h.transpose() * da;

    if (attention) {
      const Eigen::VectorXd dcond = model.W_o.rightCols(dc).transpose() * dz;
      const Eigen::VectorXd dalpha = input.segments * dcond;
      const double mean = s.alpha.dot(dalpha);
      const Eigen::VectorXd dscore = s.alpha.cwiseProduct((dalpha.array() - mean).matrix());
      const Eigen::VectorXd du = input.segments.transpose() * dscore;
      grad->W_a += s.h_prev * du.transpose();
      dh_prev += model.W_a * du;
    }
    dh_next = std::move(dh_prev);
  }
  return nll;
}

XeFit train_xe(DecoderModel model, std::span<const CaptionPair> pairs, const XeConfig& config) {
  if (pairs.empty()) throw DataError("train_xe needs at least one training pair");
  if (config.batch_size < 1) throw ConfigError("captioner batch_size must be >= 1");
  for (const auto& p : pairs) {
    check_input(model, p.input);
    if (p.target.empty()) throw DataError("empty caption target");
    for (int tok : p.target) check_token(model, tok);
  }
  XeFit fit;
  if (config.epochs <= 0) {
    fit.model = std::move(model);
    return fit;
  }
  Rng rng(config.seed);
  Adam adam(config.adam, total_size(std::as_const(model).tensors()));
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double nll = 0.0;
    std::size_t tokens = 0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      std::size_t batch_tokens = 0;
      for (std::size_t i = b; i < end; ++i) batch_tokens += pairs[order[i]].target.size();
      DecoderModel grad = DecoderModel::zeros(model.shape);
      const double scale = 1.0 / static_cast<double>(batch_tokens);
      for (std::size_t i = b; i < end; ++i) {
        const auto& p = pairs[order[i]];
        nll += sequence_nll(model, p.input, p.target, &grad, scale);
      }
      tokens += batch_tokens;
      adam.step(model.tensors(), std::as_const(grad).tensors());
    }
    fit.epoch_perplexity.push_back(std::exp(nll / static_cast<double>(tokens)));
  }
  fit.model = std::move(model);
  return fit;
}

// --- decoding --------------------------------------------------------------

double caption_score(double log_prob, std::size_t n_tokens) {
  return std::exp(log_prob / static_cast<double>(std::max<std::size_t>(1, n_tokens)));
}

EnsembleState initial_state(std::span<const DecoderModel> models) {
  EnsembleState s;
  for (const auto& m : models) s.h.push_back(initial_hidden(m));
  return s;
}

Eigen::VectorXd ensemble_step(std::span<const DecoderModel> models, EnsembleState& state, int prev_token,
                              const CaptionInput& input) {
  if (models.empty()) throw ConfigError("ensemble needs at least one model");
  if (state.h.size() != models.size()) throw InternalError("ensemble state does not match model count");
  const int vocab = models[0].shape.vocab;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(vocab);
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (models[k].shape.vocab != vocab) throw DataError("ensemble members use different vocabularies");
    StepResult r = decode_step(models[k], state.h[k], prev_token, input);
    acc += r.prob;
    state.h[k] = std::move(r.h);
  }
  return acc / static_cast<double>(models.size());
}

namespace {

// Best non-<bos> token, lowest index on ties.
int argmax_token(const Eigen::VectorXd& prob) {
  int best = Vocabulary::kEos;
  for (int v = 1; v < prob.size(); ++v) {
    if (prob(v) > prob(best)) best = v;
  }
  return best;
}

struct Hyp {
  std::vector<int> tokens;
  double log_prob = 0.0;
  EnsembleState state;
};

// Higher score first; lexicographically smaller token sequence on ties.
bool hyp_before(double sa, const std::vector<int>& ta, double sb, const std::vector<int>& tb) {
  if (sa != sb) return sa > sb;
  return ta < tb;
}

double normalized(const Hyp& h) { return h.log_prob / static_cast<double>(std::max<std::size_t>(1, h.tokens.size())); }

CaptionHypothesis finish(const Hyp& h, bool partial) {
  CaptionHypothesis out;
  out.tokens = h.tokens;
  out.log_prob = h.log_prob;
  out.partial = partial;
  if (partial) out.tokens.push_back(Vocabulary::kEos);
  out.s_c = caption_score(out.log_prob, h.tokens.size());
  return out;
}

}  // namespace

CaptionHypothesis greedy_decode(std::span<const DecoderModel> models, const CaptionInput& input, int max_length) {
  if (max_length < 1) throw ConfigError("max caption length must be >= 1");
  Hyp h{{}, 0.0, initial_state(models)};
  int prev = Vocabulary::kBos;
  for (int t = 1; t <= max_length; ++t) {
    const Eigen::VectorXd prob = ensemble_step(models, h.state, prev, input);
    const int tok = t == max_length ? Vocabulary::kEos : argmax_token(prob);
    h.log_prob += std::log(prob(tok));
    h.tokens.push_back(tok);
    if (tok == Vocabulary::kEos) break;
    prev = tok;
  }
  return finish(h, false);
}

CaptionHypothesis beam_search(std::span<const DecoderModel> models, const CaptionInput& input, int beam,
                              int max_length) {
  if (beam < 1) throw ConfigError("beam size must be >= 1");
  if (max_length < 1) throw ConfigError("max caption length must be >= 1");
  if (models.empty()) throw ConfigError("beam search needs at least one model");

  struct Expansion {
    std::size_t parent;
    int token;
    double score;
    std::vector<int> tokens;
  };

  std::vector<Hyp> live{Hyp{{}, 0.0, initial_state(models)}};
  std::vector<Hyp> pool;
  for (int t = 1; t <= max_length && !live.empty(); ++t) {
    std::vector<EnsembleState> next_states;
    std::vector<Eigen::VectorXd> probs;
    for (const auto& h : live) {
      EnsembleState s = h.state;
      const int prev = h.tokens.empty() ? Vocabulary::kBos : h.tokens.back();
      probs.push_back(ensemble_step(models, s, prev, input));
      next_states.push_back(std::move(s));
    }
    if (t == max_length) {
      for (std::size_t i = 0; i < live.size(); ++i) {
        const double lp = std::log(probs[i](Vocabulary::kEos));
        if (!std::isfinite(lp)) continue;
        Hyp done{live[i].tokens, live[i].log_prob + lp, {}};
        done.tokens.push_back(Vocabulary::kEos);
        pool.push_back(std::move(done));
      }
      break;
    }
    std::vector<Expansion> cands;
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (int v = 1; v < probs[i].size(); ++v) {
        const double lp = std::log(probs[i](v));
        if (!std::isfinite(lp)) continue;
        std::vector<int> toks = live[i].tokens;
        toks.push_back(v);
        cands.push_back({i, v, live[i].log_prob + lp, std::move(toks)});
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Expansion& a, const Expansion& b) { return hyp_before(a.score, a.tokens, b.score, b.tokens); });
    // An <eos> expansion completes when fewer than `beam` continuing
    // expansions outrank it, i.e. it would have survived in the live beam.
    const auto width = static_cast<std::size_t>(beam);
    std::vector<Hyp> next;
    for (const auto& c : cands) {
      if (c.token == Vocabulary::kEos) {
        if (next.size() < width) pool.push_back(Hyp{c.tokens, c.score, {}});
      } else if (next.size() < width) {
        next.push_back(Hyp{c.tokens, c.score, next_states[c.parent]});
      }
    }
    if (pool.size() >= width) break;
    live = std::move(next);
  }

  if (pool.empty()) {
    if (live.empty()) throw NumericError("beam search produced no finite hypothesis");
    const auto best = std::min_element(live.begin(), live.end(), [](const Hyp& a, const Hyp& b) {
      return hyp_before(normalized(a), a.tokens, normalized(b), b.tokens);
    });
    return finish(*best, true);
  }
  const auto best = std::min_element(pool.begin(), pool.end(), [](const Hyp& a, const Hyp& b) {
    return hyp_before(normalized(a), a.tokens, normalized(b), b.tokens);
  });
  return finish(*best, false);
}

std::vector<int> sample_caption(const DecoderModel& model, const CaptionInput& input, int max_length, Rng& rng) {
  if (max_length < 1) throw ConfigError("max caption length must be >= 1");
  check_input(model, input);
  std::vector<int> out;
  Eigen::VectorXd h = initial_hidden(model);
  int prev = Vocabulary::kBos;
  for (int t = 1; t <= max_length; ++t) {
    StepResult r = decode_step(model, h, prev, input);
    h = std::move(r.h);
    int tok = Vocabulary::kEos;
    if (t < max_length) {
      const double mass = 1.0 - r.prob(Vocabulary::kBos);
      double u = rng.uniform() * mass;
      tok = static_cast<int>(r.prob.size()) - 1;
      for (int v = 1; v < r.prob.size(); ++v) {
        u -= r.prob(v);
        if (u < 0.0) {
          tok = v;
          break;
        }
      }
    }
    out.push_back(tok);
    if (tok == Vocabulary::kEos) break;
    prev = tok;
  }
  return out;
}

// --- SCST ------------------------------------------------------------------

CaptionReward::CaptionReward(const CiderCorpus* corpus, double alpha_cider, double alpha_meteor)
    : corpus_(corpus), alpha_cider_(alpha_cider), alpha_meteor_(alpha_meteor) {
  if (alpha_cider_ != 0.0 && (corpus_ == nullptr || corpus_->empty())) {
    throw ConfigError("CIDEr reward needs a non-empty document-frequency table");
  }
}

double CaptionReward::operator()(const Tokens& candidate, std::span<const Tokens> references) const {
  double r = 0.0;
  if (alpha_cider_ != 0.0) r += alpha_cider_ * cider(candidate, references, *corpus_);
  if (alpha_meteor_ != 0.0) r += alpha_meteor_ * meteor_lite(candidate, references);
  return r;
}

ScstState::ScstState(const DecoderModel& model, const ScstConfig& config, std::uint64_t seed)
    : adam(config.adam, total_size(model.tensors())), rng(seed) {}

ScstStepResult scst_update(DecoderModel& model, ScstState& state, const CaptionInput& input,
                           std::span<const Tokens> references, const Vocabulary& vocab, const CaptionReward& reward,
                           const ScstConfig& config) {
  if (references.empty()) throw DataError("scst_update needs at least one reference");
  if (vocab.size() != model.shape.vocab) throw DataError("vocabulary does not match the decoder");
  ScstStepResult res;
  res.sample = sample_caption(model, input, config.max_length, state.rng);
  if (res.sample.size() == 1) res.sample = sample_caption(model, input, config.max_length, state.rng);
  if (res.sample.size() == 1) {
    res.skipped = true;
    return res;
  }
  res.greedy = greedy_decode(std::span<const DecoderModel>(&model, 1), input, config.max_length).tokens;
  if (reward.is_zero()) return res;
  res.sample_reward = reward(vocab.words(res.sample), references);
  res.greedy_reward = reward(vocab.words(res.greedy), references);
  res.advantage = res.sample_reward - res.greedy_reward;
  if (res.advantage == 0.0) return res;

  // d/dtheta of -A * sum log p(sample) equals A times the NLL gradient.
  DecoderModel grad = DecoderModel::zeros(model.shape);
  sequence_nll(model, input, res.sample, &grad, res.advantage);
  state.adam.step(model.tensors(), std::as_const(grad).tensors());
  res.updated = true;
  return res;
}

}  // namespace densecap
