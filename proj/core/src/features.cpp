#include "densecap/features.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "densecap/errors.hpp"
#include "densecap/io_util.hpp"
#include "json.hpp"

namespace densecap {
namespace {

constexpr std::array<char, 4> kMagic = {'S', 'E', 'G', 'F'};
constexpr std::size_t kHeaderBytes = 16;

std::uint32_t load_u32(const std::string& b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24;
}

void store_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

}  // namespace

FeatureSequence decode_features(const std::string& bytes, std::string video_id) {
  if (bytes.size() < kHeaderBytes) throw FormatError("truncated header", bytes.size());
  if (std::memcmp(bytes.data(), kMagic.data(), 4) != 0) throw FormatError("bad magic, expected SEGF", 0);
  const std::uint32_t version = load_u32(bytes, 4);
  if (version != kFeatureFileVersion) {
    throw FormatError("unsupported version " + std::to_string(version), 4);
  }
  const std::uint32_t t = load_u32(bytes, 8);
  const std::uint32_t d = load_u32(bytes, 12);
  if (t == 0) throw FormatError("T must be positive", 8);
  if (d == 0) throw FormatError("D must be positive", 12);
  const std::uint64_t payload = static_cast<std::uint64_t>(t) * d * 4;
  if (bytes.size() - kHeaderBytes < payload) {
    throw FormatError("truncated payload: header declares " + std::to_string(t) + "x" + std::to_string(d) +
                          " values",
                      bytes.size());
  }
  if (bytes.size() - kHeaderBytes > payload) {
    throw FormatError("trailing bytes after payload", kHeaderBytes + payload);
  }
  FeatureSequence seq;
  seq.video_id = std::move(video_id);
  seq.data.resize(t, d);
  std::size_t off = kHeaderBytes;
  for (std::uint32_t r = 0; r < t; ++r) {
    for (std::uint32_t c = 0; c < d; ++c, off += 4) {
      const std::uint32_t bits = load_u32(bytes, off);
      float v;
      std::memcpy(&v, &bits, 4);
      if (!std::isfinite(v)) throw FormatError("non-finite feature value", off);
      seq.data(r, c) = v;
    }
  }
  return seq;
}

std::string encode_features(const FeatureSequence& seq) {
  if (seq.data.rows() == 0 || seq.data.cols() == 0) throw DataError("empty feature sequence " + seq.video_id);
  std::string out;
  out.reserve(kHeaderBytes + static_cast<std::size_t>(seq.data.size()) * 4);
  out.append(kMagic.data(), 4);
  store_u32(out, kFeatureFileVersion);
  store_u32(out, static_cast<std::uint32_t>(seq.data.rows()));
  store_u32(out, static_cast<std::uint32_t>(seq.data.cols()));
  for (Eigen::Index r = 0; r < seq.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < seq.data.cols(); ++c) {
      const float v = seq.data(r, c);
      if (!std::isfinite(v)) throw DataError("non-finite feature value in " + seq.video_id);
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      store_u32(out, bits);
    }
  }
  return out;
}

FeatureSequence read_features(const std::filesystem::path& path, std::string video_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_features(ss.str(), std::move(video_id));
}

void write_features(const FeatureSequence& seq, const std::filesystem::path& path) {
  write_file_atomic(path, encode_features(seq));
}

Eigen::VectorXd mean_pool(const FeatureSequence& seq, const SegmentSpan& span) {
  if (span.last < span.first || span.last >= seq.rows()) {
    throw RangeError("video " + seq.video_id + ": pooling span out of range");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(seq.dims()));
  for (std::size_t t = span.first; t <= span.last; ++t) acc += seq.row(t);
  return acc / static_cast<double>(span.size());
}

Eigen::VectorXd mean_rows(const Eigen::MatrixXd& m, std::ptrdiff_t first, std::ptrdiff_t last) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m.cols());
  if (first > last) return acc;
  for (std::ptrdiff_t t = first; t <= last; ++t) acc += m.row(t).transpose();
  return acc / static_cast<double>(last - first + 1);
}

ContextSequence context_summary(const FeatureSequence& seq, double decay) {
  if (!(decay > 0.0 && decay < 1.0)) throw ConfigError("context decay must lie in (0, 1)");
  if (seq.rows() == 0) throw DataError("context_summary: empty feature sequence " + seq.video_id);
  const Eigen::MatrixXd x = seq.data.cast<double>();
  const Eigen::Index n = x.rows();
  ContextSequence ctx;
  ctx.video_id = seq.video_id;
  ctx.forward.resize(n, x.cols());
  ctx.backward.resize(n, x.cols());
  ctx.forward.row(0) = x.row(0);
  for (Eigen::Index t = 1; t < n; ++t) {
    ctx.forward.row(t) = decay * ctx.forward.row(t - 1) + (1.0 - decay) * x.row(t);
  }
  ctx.backward.row(n - 1) = x.row(n - 1);
  for (Eigen::Index t = n - 2; t >= 0; --t) {
    ctx.backward.row(t) = decay * ctx.backward.row(t + 1) + (1.0 - decay) * x.row(t);
  }
  return ctx;
}

const ManifestEntry& DatasetManifest::find(const std::string& video_id) const {
  for (const auto& e : entries) {
    if (e.meta.video_id == video_id) return e;
  }
  throw DataError("video " + video_id + " not in manifest");
}

void validate_manifest(const DatasetManifest& manifest, std::optional<int> n_topics) {
  std::set<std::string> seen;
  for (const auto& entry : manifest.entries) {
    const auto& id = entry.meta.video_id;
    if (!seen.insert(id).second) throw DataError("video " + id + ": duplicate video_id in manifest");
    if (entry.feature_file.empty()) throw DataError("video " + id + ": empty feature_file");
    for (const auto& ev : entry.events) {
      if (ev.interval.end() > entry.meta.duration_sec + kTimeEpsilon) {
        throw DataError("video " + id + ": event ends after video duration");
      }
      if (ev.caption.empty()) throw DataError("video " + id + ": empty caption");
      if (ev.topic_id) {
        if (*ev.topic_id < 0 || (n_topics && *ev.topic_id >= *n_topics)) {
          throw DataError("video " + id + ": topic_id " + std::to_string(*ev.topic_id) + " out of range");
        }
      }
    }
  }
}

DatasetManifest parse_manifest(const std::string& json_text, std::filesystem::path base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_array()) throw DataError("manifest must be a JSON array");
  DatasetManifest m;
  m.base_dir = std::move(base_dir);
  try {
    for (const auto& obj : doc) {
      ManifestEntry entry;
      const std::string id = obj.at("video_id").get<std::string>();
      entry.meta = VideoMeta::make(id, obj.at("duration_sec").get<double>(), obj.at("fps").get<double>(),
                                   obj.at("n_frames").get<std::int64_t>());
      entry.feature_file = obj.at("feature_file").get<std::string>();
      for (const auto& ev : obj.at("events")) {
        Event e{Interval(ev.at("start").get<double>(), ev.at("end").get<double>()), ev.at("caption").get<std::string>(),
                std::nullopt};
        if (ev.contains("topic_id")) e.topic_id = ev.at("topic_id").get<int>();
        entry.events.push_back(std::move(e));
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& entry : manifest.entries) {
    ordered_json obj;
    obj["video_id"] = entry.meta.video_id;
    obj["duration_sec"] = entry.meta.duration_sec;
    obj["fps"] = entry.meta.fps;
    obj["n_frames"] = entry.meta.n_frames;
    obj["feature_file"] = entry.feature_file;
    ordered_json events = ordered_json::array();
    for (const auto& ev : entry.events) {
      ordered_json e;
      e["start"] = ev.interval.start();
      e["end"] = ev.interval.end();
      e["caption"] = ev.caption;
      if (ev.topic_id) e["topic_id"] = *ev.topic_id;
      events.push_back(std::move(e));
    }
    obj["events"] = std::move(events);
    doc.push_back(std::move(obj));
  }
  return doc.dump(1) + "\n";
}

DatasetManifest read_manifest(const std::filesystem::path& path, std::optional<int> n_topics) {
  DatasetManifest m = parse_manifest(read_text_file(path), path.parent_path());
  validate_manifest(m, n_topics);
  return m;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  validate_manifest(manifest);
  write_file_atomic(path, manifest_to_json(manifest));
}

FeatureSequence load_features(const DatasetManifest& manifest, const ManifestEntry& entry) {
  const auto path = manifest.base_dir / entry.feature_file;
  if (!std::filesystem::exists(path)) {
    throw DataError("video " + entry.meta.video_id + ": feature file not found: " + path.string());
  }
  FeatureSequence seq = read_features(path, entry.meta.video_id);
  if (seq.rows() != entry.meta.n_segments) {
    throw DataError("video " + entry.meta.video_id + ": feature rows " + std::to_string(seq.rows()) +
                    " != n_segments " + std::to_string(entry.meta.n_segments));
  }
  return seq;
}

}  // namespace densecap
