#include <sstream>

#include "densecap/caption.hpp"
#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Row-major flattening so checkpoints read naturally.
std::vector<double> flat(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

std::vector<double> flat(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void unflat(const json& j, const char* name, Eigen::MatrixXd& m) {
  const auto v = j.at(name).get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != m.size()) {
    throw DataError(std::string("checkpoint tensor ") + name + " has " + std::to_string(v.size()) +
                    " values, expected " + std::to_string(m.size()));
  }
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = v[k++];
  }
}

void unflat(const json& j, const char* name, Eigen::VectorXd& m) {
  const auto v = j.at(name).get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != m.size()) {
    throw DataError(std::string("checkpoint tensor ") + name + " has wrong length");
  }
  m = Eigen::Map<const Eigen::VectorXd>(v.data(), m.size());
}

}  // namespace

std::string checkpoint_to_json(const CaptionCheckpoint& ckpt) {
  const DecoderModel& m = ckpt.model;
  ordered_json j;
  j["variant"] = std::string(to_string(m.shape.variant));
  j["shape"] = {{"V", m.shape.vocab},      {"d_e", m.shape.embed}, {"d_h", m.shape.hidden},
                {"D", m.shape.dims},       {"n_topics", m.shape.n_topics}, {"d_c", m.cond_dim()}};
  j["use_context"] = ckpt.use_context;
  j["vocab"] = ckpt.vocab.tokens();
  ordered_json p;
  p["E"] = flat(m.E);
  p["W_h"] = flat(m.W_h);
  p["W_x"] = flat(m.W_x);
  p["b_h"] = flat(m.b_h);
  p["W_o"] = flat(m.W_o);
  p["b_o"] = flat(m.b_o);
  if (m.shape.variant == DecoderVariant::kAttention) p["W_a"] = flat(m.W_a);
  j["params"] = std::move(p);
  if (m.shape.variant == DecoderVariant::kTopic) {
    j["topic"] = {{"W", flat(m.topic.W)}, {"b", flat(m.topic.b)}};
  }
  return j.dump() + "\n";
}

CaptionCheckpoint checkpoint_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DecoderShape shape;
    shape.variant = variant_from_string(j.at("variant").get<std::string>());
    const auto& s = j.at("shape");
    shape.vocab = s.at("V").get<int>();
    shape.embed = s.at("d_e").get<int>();
    shape.hidden = s.at("d_h").get<int>();
    shape.dims = s.at("D").get<int>();
    shape.n_topics = s.at("n_topics").get<int>();
    CaptionCheckpoint ckpt{DecoderModel::zeros(shape), Vocabulary(j.at("vocab").get<std::vector<std::string>>()),
                           j.at("use_context").get<bool>()};
    if (ckpt.vocab.size() != shape.vocab) throw DataError("checkpoint vocabulary size does not match V");
    if (s.at("d_c").get<int>() != ckpt.model.cond_dim()) throw DataError("checkpoint d_c inconsistent with shape");
    const auto& p = j.at("params");
    DecoderModel& m = ckpt.model;
    unflat(p, "E", m.E);
    unflat(p, "W_h", m.W_h);
    unflat(p, "W_x", m.W_x);
    unflat(p, "b_h", m.b_h);
    unflat(p, "W_o", m.W_o);
    unflat(p, "b_o", m.b_o);
    if (shape.variant == DecoderVariant::kAttention) unflat(p, "W_a", m.W_a);
    if (shape.variant == DecoderVariant::kTopic) {
      unflat(j.at("topic"), "W", m.topic.W);
      unflat(j.at("topic"), "b", m.topic.b);
    }
    if (!all_finite(std::as_const(m).tensors()) || !all_finite(std::as_const(m.topic).tensors())) {
      throw DataError("checkpoint contains non-finite parameters");
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed caption checkpoint: ") + e.what());
  }
}

std::string caption_to_jsonl(const CaptionRecord& rec) {
  ordered_json j;
  j["video_id"] = rec.video_id;
  j["start"] = rec.interval.start();
  j["end"] = rec.interval.end();
  j["caption"] = rec.caption;
  j["s_c"] = rec.s_c;
  j["log_prob"] = rec.log_prob;
  return j.dump();
}

std::vector<CaptionRecord> parse_captions_jsonl(const std::string& text) {
  std::vector<CaptionRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back({j.at("video_id").get<std::string>(),
                     Interval(j.at("start").get<double>(), j.at("end").get<double>()),
                     j.at("caption").get<std::string>(), j.at("s_c").get<double>(), j.at("log_prob").get<double>()});
    } catch (const json::exception& e) {
      throw DataError("caption line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace densecap
