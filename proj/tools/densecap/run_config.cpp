#include "densecap/run_config.hpp"

#include <algorithm>
#include <filesystem>

#include "densecap/caption.hpp"
#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LengthComponent, mean, weight, stddev)
}

namespace densecap::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PathsSection, run_dir, data_dir, train_manifest, val_manifest)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SynthSection, n_videos, min_duration_sec, max_duration_sec, fps, dims,
                                                n_topics, min_events, max_events, length_mixture, noise_sigma,
                                                val_fraction)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FeaturesSection, context_decay)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClusterSection, K)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RankerSection, hidden, lr, batch_size, epochs, threshold)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CaptionerSection, embed, hidden, lr, clip_norm, epochs, batch_size,
                                                min_count, use_context, topic_lr, topic_epochs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScstSection, variants, alpha_cider, alpha_meteor, lr, clip_norm, epochs,
                                                max_length)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CaptionSection, beam, max_length, checkpoints)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RerankSection, top_k)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvalSection, thresholds, cider_d)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, seed, paths, synth, features, cluster, ranker, captioner,
                                                scst, caption, rerank, eval)

namespace {

using Json = nlohmann::json;

void reject_unknown(const Json& given, const Json& defaults, const std::string& where) {
  if (given.is_object()) {
    if (!defaults.is_object()) throw ConfigError("config key '" + where + "' must not be an object");
    for (const auto& [key, value] : given.items()) {
      const std::string path = where.empty() ? key : where + "." + key;
      if (!defaults.contains(key)) throw ConfigError("unknown config key '" + path + "'");
      reject_unknown(value, defaults.at(key), path);
    }
  } else if (given.is_array() && defaults.is_array() && !defaults.empty() && defaults.front().is_object()) {
    for (std::size_t i = 0; i < given.size(); ++i) {
      reject_unknown(given[i], defaults.front(), where + "[" + std::to_string(i) + "]");
    }
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::resolve() {
  require(!paths.run_dir.empty(), "paths.run_dir must not be empty");
  namespace fs = std::filesystem;
  if (paths.data_dir.empty()) paths.data_dir = (fs::path(paths.run_dir) / "data").generic_string();
  if (paths.train_manifest.empty()) paths.train_manifest = (fs::path(paths.data_dir) / "train.json").generic_string();
  if (paths.val_manifest.empty()) paths.val_manifest = (fs::path(paths.data_dir) / "val.json").generic_string();

  require(features.context_decay > 0.0 && features.context_decay < 1.0, "features.context_decay must lie in (0, 1)");
  require(cluster.K >= 1, "cluster.K must be >= 1");
  require(ranker.hidden >= 1 && ranker.batch_size >= 2 && ranker.epochs >= 0 && ranker.lr > 0.0,
          "ranker needs hidden >= 1, batch_size >= 2, epochs >= 0, lr > 0");
  require(ranker.threshold >= 0.0 && ranker.threshold <= 1.0, "ranker.threshold must lie in [0, 1]");
  require(captioner.embed >= 1 && captioner.hidden >= 1 && captioner.epochs >= 0 && captioner.batch_size >= 1,
          "captioner sizes must be positive and epochs >= 0");
  require(captioner.lr > 0.0 && captioner.clip_norm >= 0.0 && captioner.topic_lr > 0.0 && captioner.topic_epochs >= 0,
          "captioner learning rates must be positive");
  require(captioner.min_count >= 1, "captioner.min_count must be >= 1");
  for (const auto& v : scst.variants) variant_from_string(v);
  require(scst.alpha_cider >= 0.0 && scst.alpha_meteor >= 0.0, "scst reward weights must be >= 0");
  require(scst.lr > 0.0 && scst.clip_norm >= 0.0 && scst.epochs >= 0 && scst.max_length >= 1,
          "scst needs lr > 0, epochs >= 0, max_length >= 1");
  require(caption.beam >= 1 && caption.max_length >= 1, "caption.beam and caption.max_length must be >= 1");
  require(rerank.top_k >= 1, "rerank.top_k must be >= 1");
  require(!eval.thresholds.empty(), "eval.thresholds must not be empty");
  for (double t : eval.thresholds) require(t > 0.0 && t <= 1.0, "eval thresholds must lie in (0, 1]");
}

RunConfig parse_run_config(const std::string& json_text) {
  Json given;
  try {
    given = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!given.is_object()) throw ConfigError("config must be a JSON object");
  const Json defaults = RunConfig{};
  reject_unknown(given, defaults, "");
  try {
    return given.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

std::string run_config_to_json(const RunConfig& config) {
  const Json j = config;
  return j.dump(2) + "\n";
}

SynthConfig to_synth_config(const RunConfig& config) {
  const SynthSection& s = config.synth;
  SynthConfig c;
  c.n_videos = s.n_videos;
  c.min_duration_sec = s.min_duration_sec;
  c.max_duration_sec = s.max_duration_sec;
  c.fps = s.fps;
  c.dims = s.dims;
  c.n_topics = s.n_topics;
  c.min_events = s.min_events;
  c.max_events = s.max_events;
  c.length_mixture = s.length_mixture;
  c.noise_sigma = s.noise_sigma;
  c.val_fraction = s.val_fraction;
  c.seed = config.seed;
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
  // FNV-1a of the purpose, then one splitmix64 round.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : purpose) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace densecap::cli
