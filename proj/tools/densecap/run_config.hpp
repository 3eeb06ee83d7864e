#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densecap/synth.hpp"

namespace densecap::cli {

struct PathsSection {
  std::string run_dir = "run";
  // Empty paths are derived from run_dir when the config is resolved.
  std::string data_dir;        // <run_dir>/data
  std::string train_manifest;  // <data_dir>/train.json
  std::string val_manifest;    // <data_dir>/val.json
};

struct SynthSection {
  int n_videos = 200;
  double min_duration_sec = 30.0;
  double max_duration_sec = 120.0;
  double fps = 64.0;
  int dims = 32;
  int n_topics = 8;
  int min_events = 1;
  int max_events = 4;
  std::vector<LengthComponent> length_mixture = SynthConfig{}.length_mixture;
  double noise_sigma = 0.3;
  double val_fraction = 0.2;
};

struct FeaturesSection {
  double context_decay = 0.9;
};

struct ClusterSection {
  int K = 20;
};

struct RankerSection {
  int hidden = 128;
  double lr = 1e-3;
  int batch_size = 256;
  int epochs = 20;
  double threshold = 0.5;
};

struct CaptionerSection {
  int embed = 64;
  int hidden = 128;
  double lr = 2e-3;
  double clip_norm = 5.0;
  int epochs = 30;
  int batch_size = 16;
  int min_count = 1;
  bool use_context = false;
  double topic_lr = 1e-2;
  int topic_epochs = 200;
};

struct ScstSection {
  std::vector<std::string> variants{"vanilla", "attention", "topic"};
  double alpha_cider = 1.0;
  double alpha_meteor = 1.0;
  double lr = 5e-5;
  double clip_norm = 5.0;
  int epochs = 1;
  int max_length = 20;
};

struct CaptionSection {
  int beam = 5;
  int max_length = 20;
  // Empty: every variant's scst_<v>.json, else captioner_<v>.json, found in run_dir.
  std::vector<std::string> checkpoints;
};

struct RerankSection {
  int top_k = 10;
};

struct EvalSection {
  std::vector<double> thresholds{0.3, 0.5, 0.7};
  bool cider_d = true;
};

struct RunConfig {
  std::uint64_t seed = 0;
  PathsSection paths;
  SynthSection synth;
  FeaturesSection features;
  ClusterSection cluster;
  RankerSection ranker;
  CaptionerSection captioner;
  ScstSection scst;
  CaptionSection caption;
  RerankSection rerank;
  EvalSection eval;

  // Fills derived paths and checks value ranges; throws ConfigError.
  void resolve();
};

// Every key must exist in the defaults; missing keys keep their default.
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& config);

SynthConfig to_synth_config(const RunConfig& config);

// Stable per-purpose seed derived from the global seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

}  // namespace densecap::cli
