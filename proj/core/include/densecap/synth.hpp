#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "densecap/features.hpp"
#include "densecap/rng.hpp"

namespace densecap {

struct LengthComponent {
  double mean = 0.0;    // event length as a fraction of video length
  double weight = 1.0;
  double stddev = 0.03;
};

struct SynthConfig {
  int n_videos = 200;
  double min_duration_sec = 30.0;
  double max_duration_sec = 120.0;
  double fps = 64.0;
  int segment_frames = kSegmentFrames;
  int dims = 32;
  int n_topics = 8;
  int min_events = 1;
  int max_events = 4;
  std::vector<LengthComponent> length_mixture{{0.1, 1.0, 0.03}, {0.3, 1.0, 0.03}, {0.7, 1.0, 0.03}};
  double noise_sigma = 0.3;
  double val_fraction = 0.2;
  std::optional<std::uint64_t> seed;  // required
};

// Per-topic caption templates "<subject> is <verb> the <object>".
class TopicGrammar {
 public:
  static constexpr int kMaxTopics = 12;

  explicit TopicGrammar(int n_topics);

  int n_topics() const noexcept { return static_cast<int>(verbs_.size()); }
  std::string sample(int topic, Rng& rng) const;
  std::set<std::string> terminals(int topic) const;
  std::set<std::string> all_terminals() const;
  // Every caption the grammar can produce for a topic.
  std::vector<std::string> surfaces(int topic) const;

 private:
  std::vector<std::vector<std::string>> verbs_;
  std::vector<std::vector<std::string>> objects_;
};

struct SynthEventInfo {
  std::string video_id;
  int component = 0;        // mixture component the length was drawn from
  double proportion = 0.0;  // realized length / video length
  int topic = 0;
};

struct SynthCorpus {
  DatasetManifest train;
  DatasetManifest val;
  std::map<std::string, FeatureSequence> features;
  std::vector<Eigen::VectorXd> topic_prototypes;
  std::vector<SynthEventInfo> events;
};

// Deterministic under config.seed; each video draws from its own stream
// derived from (seed, video index).
SynthCorpus generate(const SynthConfig& config);

// Writes <dir>/train.json, <dir>/val.json and <dir>/features/<video_id>.segf.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace densecap
