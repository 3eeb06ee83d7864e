#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "densecap/timeline.hpp"

namespace densecap {

using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-segment features of one video: row t is the concatenated multimodal
// feature of segment t. Stored as float32, matching the on-disk format.
struct FeatureSequence {
  std::string video_id;
  FeatureMatrix data;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(data.cols()); }
  Eigen::VectorXd row(std::size_t t) const { return data.row(static_cast<Eigen::Index>(t)).transpose().cast<double>(); }
};

// Bidirectional exponential moving average over the segment features.
struct ContextSequence {
  std::string video_id;
  Eigen::MatrixXd forward;
  Eigen::MatrixXd backward;
};

// SEGF binary format: "SEGF", u32 version = 1, u32 T, u32 D, T*D float32,
// all little-endian, row-major, no padding and no footer.
inline constexpr std::uint32_t kFeatureFileVersion = 1;

FeatureSequence read_features(const std::filesystem::path& path, std::string video_id = {});
FeatureSequence decode_features(const std::string& bytes, std::string video_id = {});
std::string encode_features(const FeatureSequence& seq);
void write_features(const FeatureSequence& seq, const std::filesystem::path& path);

// Mean of rows span.first..span.last.
Eigen::VectorXd mean_pool(const FeatureSequence& seq, const SegmentSpan& span);

// Mean of rows [first, last] of a dense matrix; zero vector when first > last.
Eigen::VectorXd mean_rows(const Eigen::MatrixXd& m, std::ptrdiff_t first, std::ptrdiff_t last);

ContextSequence context_summary(const FeatureSequence& seq, double decay = 0.9);

struct Event {
  Interval interval;
  std::string caption;
  std::optional<int> topic_id;
};

struct ManifestEntry {
  VideoMeta meta;
  std::string feature_file;  // relative to the manifest directory
  std::vector<Event> events;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;  // directory feature_file paths are resolved against

  const ManifestEntry& find(const std::string& video_id) const;
};

// Throws DataError on any event outside its video, empty caption or topic
// outside [0, n_topics).
void validate_manifest(const DatasetManifest& manifest, std::optional<int> n_topics = std::nullopt);

DatasetManifest parse_manifest(const std::string& json_text, std::filesystem::path base_dir = {});
std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path, std::optional<int> n_topics = std::nullopt);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Reads the feature file of `entry` and checks it against the video metadata.
FeatureSequence load_features(const DatasetManifest& manifest, const ManifestEntry& entry);

}  // namespace densecap
