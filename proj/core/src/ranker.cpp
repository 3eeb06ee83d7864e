#include "densecap/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void fill_uniform(Eigen::MatrixXd& m, double a, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
}

double balanced_loss(const RankerModel& model, const Eigen::MatrixXd& pos, const Eigen::MatrixXd& neg) {
  return 0.5 * ranker_loss(model, pos, Eigen::VectorXd::Ones(pos.rows())) +
         0.5 * ranker_loss(model, neg, Eigen::VectorXd::Zero(neg.rows()));
}

}  // namespace

Eigen::VectorXd RankingFeatures::flatten() const {
  const Eigen::Index d = internal.size();
  Eigen::VectorXd x(5 * d + 2);
  x << internal, external_left, external_right, boundary_start, boundary_end, location;
  return x;
}

RankingFeatures assemble_features(const FeatureSequence& seq, const ContextSequence& ctx, const Interval& proposal,
                                  const VideoMeta& meta) {
  if (seq.rows() != meta.n_segments || static_cast<std::size_t>(ctx.forward.rows()) != seq.rows() ||
      static_cast<std::size_t>(ctx.backward.rows()) != seq.rows()) {
    throw InternalError("video " + meta.video_id + ": feature/context/meta segment counts disagree");
  }
  const SegmentSpan span = interval_to_segments(proposal, meta);
  const auto first = static_cast<std::ptrdiff_t>(span.first);
  const auto last = static_cast<std::ptrdiff_t>(span.last);
  const auto n = static_cast<std::ptrdiff_t>(seq.rows());
  const auto d = static_cast<Eigen::Index>(seq.dims());

  RankingFeatures f;
  f.internal = mean_pool(seq, span);
  f.external_left = mean_rows(ctx.forward, 0, first - 1);
  f.external_right = mean_rows(ctx.backward, last + 1, n - 1);
  f.boundary_start = first > 0 ? Eigen::VectorXd(seq.row(span.first) - seq.row(span.first - 1))
                               : Eigen::VectorXd::Zero(d);
  f.boundary_end = last < n - 1 ? Eigen::VectorXd(seq.row(span.last) - seq.row(span.last + 1))
                                : Eigen::VectorXd::Zero(d);
  const double l = meta.duration_sec;
  f.location << std::clamp(proposal.center() / l, 0.0, 1.0), std::clamp(proposal.length() / l, 0.0, 1.0);
  return f;
}

RankerModel RankerModel::zeros(int dims, int hidden) {
  if (dims < 1 || hidden < 1) throw ConfigError("ranker dims and hidden width must be >= 1");
  RankerModel m;
  m.dims = dims;
  m.hidden = hidden;
  m.W1 = Eigen::MatrixXd::Zero(hidden, m.input_size());
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.W2 = Eigen::VectorXd::Zero(hidden);
  m.b2 = 0.0;
  return m;
}

RankerModel RankerModel::random(int dims, int hidden, Rng& rng) {
  RankerModel m = zeros(dims, hidden);
  fill_uniform(m.W1, std::sqrt(6.0 / static_cast<double>(m.input_size() + hidden)), rng);
  Eigen::MatrixXd w2(hidden, 1);
  fill_uniform(w2, std::sqrt(6.0 / static_cast<double>(hidden + 1)), rng);
  m.W2 = w2.col(0);
  return m;
}

TensorViews RankerModel::tensors() { return {view(W1), view(b1), view(W2), std::span<double>(&b2, 1)}; }

ConstTensorViews RankerModel::tensors() const {
  return {view(W1), view(b1), view(W2), std::span<const double>(&b2, 1)};
}

double ranker_logit(const RankerModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.input_size()) throw InternalError("ranker input has wrong length");
  const Eigen::VectorXd a = (model.W1 * x + model.b1).cwiseMax(0.0);
  const double z = model.W2.dot(a) + model.b2;
  if (!std::isfinite(z)) throw NumericError("non-finite ranker activation");
  return z;
}

double ranker_forward(const RankerModel& model, const Eigen::VectorXd& x) { return sigmoid(ranker_logit(model, x)); }

double ranker_forward(const RankerModel& model, const RankingFeatures& feats) {
  return ranker_forward(model, feats.flatten());
}

double ranker_loss(const RankerModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, RankerModel* grad) {
  const Eigen::Index n = X.rows();
  if (n == 0) return 0.0;
  if (X.cols() != model.input_size() || y.size() != n) throw InternalError("ranker batch shape mismatch");
  const Eigen::MatrixXd pre = (X * model.W1.transpose()).rowwise() + model.b1.transpose();
  const Eigen::MatrixXd act = pre.cwiseMax(0.0);
  const Eigen::VectorXd z = (act * model.W2).array() + model.b2;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) loss += softplus(z(i)) - y(i) * z(i);
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericError("non-finite ranker loss");
  if (grad != nullptr) {
    Eigen::VectorXd dz(n);
    for (Eigen::Index i = 0; i < n; ++i) dz(i) = (sigmoid(z(i)) - y(i)) / static_cast<double>(n);
    grad->W2 += act.transpose() * dz;
    grad->b2 += dz.sum();
    Eigen::MatrixXd dpre = dz * model.W2.transpose();
    dpre = dpre.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grad->W1 += dpre.transpose() * X;
    grad->b1 += dpre.colwise().sum().transpose();
  }
  return loss;
}

RankerFit train_ranker(std::span<const RankerSample> samples, const RankerConfig& config) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].positive ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) {
    throw DataError("train_ranker needs at least one positive and one negative sample (got " +
                    std::to_string(pos.size()) + " positive, " + std::to_string(neg.size()) + " negative)");
  }
  if (config.batch_size < 2) throw ConfigError("ranker batch_size must be >= 2");
  if (config.epochs < 0) throw ConfigError("ranker epochs must be >= 0");
  const Eigen::Index in = samples[0].x.size();
  if ((in - 2) % 5 != 0 || in < 7) throw DataError("ranker feature length must be 5D + 2");
  const int dims = static_cast<int>((in - 2) / 5);

  auto stack = [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(idx.size()), in);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (samples[idx[r]].x.size() != in) throw DataError("ranker samples have inconsistent feature lengths");
      m.row(static_cast<Eigen::Index>(r)) = samples[idx[r]].x.transpose();
    }
    return m;
  };
  const Eigen::MatrixXd pos_x = stack(pos);
  const Eigen::MatrixXd neg_x = stack(neg);

  Rng rng(config.seed);
  RankerFit fit;
  fit.model = RankerModel::random(dims, config.hidden, rng);
  fit.initial_loss = balanced_loss(fit.model, pos_x, neg_x);

  Adam adam(config.adam, total_size(std::as_const(fit.model).tensors()));
  const std::size_t half = static_cast<std::size_t>(config.batch_size / 2);
  const std::size_t n_major = std::max(pos.size(), neg.size());

  // Epoch order over each class: a shuffled permutation, extended with
  // further shuffled passes for the minority class.
  auto epoch_order = [&](std::size_t n_class) {
    std::vector<std::size_t> order;
    order.reserve(n_major);
    while (order.size() < n_major) {
      std::vector<std::size_t> pass(n_class);
      for (std::size_t i = 0; i < n_class; ++i) pass[i] = i;
      rng.shuffle(pass);
      for (std::size_t i = 0; i < n_class && order.size() < n_major; ++i) order.push_back(pass[i]);
    }
    return order;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto pos_order = epoch_order(pos.size());
    const auto neg_order = epoch_order(neg.size());
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < n_major; b += half) {
      const std::size_t m = std::min(half, n_major - b);
      Eigen::MatrixXd X(static_cast<Eigen::Index>(2 * m), in);
      Eigen::VectorXd y(static_cast<Eigen::Index>(2 * m));
      for (std::size_t i = 0; i < m; ++i) {
        X.row(static_cast<Eigen::Index>(2 * i)) = pos_x.row(static_cast<Eigen::Index>(pos_order[b + i]));
        y(static_cast<Eigen::Index>(2 * i)) = 1.0;
        X.row(static_cast<Eigen::Index>(2 * i + 1)) = neg_x.row(static_cast<Eigen::Index>(neg_order[b + i]));
        y(static_cast<Eigen::Index>(2 * i + 1)) = 0.0;
      }
      RankerModel grad = RankerModel::zeros(dims, config.hidden);
      epoch_loss += ranker_loss(fit.model, X, y, &grad);
      ++batches;
      adam.step(fit.model.tensors(), std::as_const(grad).tensors());
    }
    fit.epoch_loss.push_back(epoch_loss / static_cast<double>(batches));
  }
  fit.final_loss = balanced_loss(fit.model, pos_x, neg_x);
  return fit;
}

bool scored_before(const ScoredProposal& a, const ScoredProposal& b) {
  if (a.s_p != b.s_p) return a.s_p > b.s_p;
  if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
  return a.interval.length() < b.interval.length();
}

std::vector<ScoredProposal> score_and_filter(const RankerModel& model, std::span<const FeaturizedCandidate> candidates,
                                             double threshold) {
  std::vector<ScoredProposal> out;
  for (const auto& c : candidates) {
    const double s = ranker_forward(model, c.features);
    if (s > threshold) out.push_back(ScoredProposal{c.interval, s, c.features});
  }
  std::sort(out.begin(), out.end(), scored_before);
  return out;
}

std::string ranker_to_json(const RankerModel& model) {
  nlohmann::ordered_json j;
  j["H"] = model.hidden;
  j["D"] = model.dims;
  nlohmann::ordered_json w1 = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < model.W1.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(model.W1.cols()));
    for (Eigen::Index c = 0; c < model.W1.cols(); ++c) row[static_cast<std::size_t>(c)] = model.W1(r, c);
    w1.push_back(row);
  }
  j["W1"] = std::move(w1);
  j["b1"] = std::vector<double>(model.b1.data(), model.b1.data() + model.b1.size());
  j["W2"] = std::vector<double>(model.W2.data(), model.W2.data() + model.W2.size());
  j["b2"] = model.b2;
  return j.dump() + "\n";
}

RankerModel ranker_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RankerModel m = RankerModel::zeros(j.at("D").get<int>(), j.at("H").get<int>());
    const auto& w1 = j.at("W1");
    if (static_cast<Eigen::Index>(w1.size()) != m.W1.rows()) throw DataError("ranker W1 has wrong row count");
    for (Eigen::Index r = 0; r < m.W1.rows(); ++r) {
      const auto row = w1.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != m.W1.cols()) throw DataError("ranker W1 has wrong column count");
      for (Eigen::Index c = 0; c < m.W1.cols(); ++c) m.W1(r, c) = row[static_cast<std::size_t>(c)];
    }
    const auto b1 = j.at("b1").get<std::vector<double>>();
    const auto w2 = j.at("W2").get<std::vector<double>>();
    if (static_cast<int>(b1.size()) != m.hidden || static_cast<int>(w2.size()) != m.hidden) {
      throw DataError("ranker b1/W2 have wrong length");
    }
    m.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), m.hidden);
    m.W2 = Eigen::Map<const Eigen::VectorXd>(w2.data(), m.hidden);
    m.b2 = j.at("b2").get<double>();
    if (!all_finite(std::as_const(m).tensors())) throw DataError("ranker checkpoint contains non-finite values");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed ranker checkpoint: ") + e.what());
  }
}

std::string scored_to_jsonl(const std::string& video_id, const ScoredProposal& p) {
  nlohmann::ordered_json j;
  j["video_id"] = video_id;
  j["start"] = p.interval.start();
  j["end"] = p.interval.end();
  j["s_p"] = p.s_p;
  return j.dump();
}

std::vector<ScoredRecord> parse_scored_jsonl(const std::string& text) {
  std::vector<ScoredRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("video_id").get<std::string>(),
                     Interval(j.at("start").get<double>(), j.at("end").get<double>()), j.at("s_p").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw DataError("scored proposal line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace densecap
