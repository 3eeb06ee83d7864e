#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace densecap {

// Frames per feature segment.
inline constexpr int kSegmentFrames = 64;

// Slack allowed when checking that an interval ends inside its video.
inline constexpr double kTimeEpsilon = 1e-6;

// Half-open temporal span [start, end) in seconds. Zero-length and negative
// spans are rejected at construction.
class Interval {
 public:
  Interval(double start, double end);

  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  double length() const noexcept { return end_ - start_; }
  double center() const noexcept { return 0.5 * (start_ + end_); }

  bool contains(const Interval& other) const noexcept {
    return start_ <= other.start_ && other.end_ <= end_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double start_;
  double end_;
};

// Temporal intersection over union. Touching intervals have tIoU 0.
double tiou(const Interval& a, const Interval& b) noexcept;

// Inclusive range of segment indices.
struct SegmentSpan {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first + 1; }
  bool contains(const SegmentSpan& other) const noexcept {
    return first <= other.first && other.last <= last;
  }
  friend bool operator==(const SegmentSpan&, const SegmentSpan&) = default;
};

struct VideoMeta {
  std::string video_id;
  double duration_sec = 0.0;
  double fps = 0.0;
  std::int64_t n_frames = 0;
  int segment_frames = kSegmentFrames;
  std::size_t n_segments = 0;

  // Validates fields and derives n_segments = ceil(n_frames / segment_frames).
  static VideoMeta make(std::string video_id, double duration_sec, double fps, std::int64_t n_frames,
                        int segment_frames = kSegmentFrames);

  double segment_seconds() const noexcept { return segment_frames / fps; }
  Interval full() const { return Interval(0.0, duration_sec); }
};

// Maps a time interval onto the segment grid. Sub-segment intervals clamp to
// a single segment. Throws RangeError when the interval ends past the video.
SegmentSpan interval_to_segments(const Interval& iv, const VideoMeta& meta);

// Inverse mapping, clipped to the video duration.
Interval segments_to_interval(const SegmentSpan& span, const VideoMeta& meta);

}  // namespace densecap
