#include "densecap/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "densecap/errors.hpp"

namespace densecap {

Interval::Interval(double start, double end) : start_(start), end_(end) {
  if (!std::isfinite(start) || !std::isfinite(end) || start < 0.0 || !(end > start)) {
    std::ostringstream ss;
    ss << "invalid interval [" << start << ", " << end << ")";
    throw RangeError(ss.str());
  }
}

double tiou(const Interval& a, const Interval& b) noexcept {
  const double inter = std::max(0.0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
  const double uni = a.length() + b.length() - inter;
  return inter / uni;
}

VideoMeta VideoMeta::make(std::string video_id, double duration_sec, double fps, std::int64_t n_frames,
                          int segment_frames) {
  if (!(duration_sec > 0.0) || !std::isfinite(duration_sec)) {
    throw DataError("video " + video_id + ": duration_sec must be positive");
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) throw DataError("video " + video_id + ": fps must be positive");
  if (n_frames < 1) throw DataError("video " + video_id + ": n_frames must be >= 1");
  if (segment_frames < 1) throw ConfigError("segment_frames must be >= 1");
  VideoMeta m;
  m.video_id = std::move(video_id);
  m.duration_sec = duration_sec;
  m.fps = fps;
  m.n_frames = n_frames;
  m.segment_frames = segment_frames;
  m.n_segments = static_cast<std::size_t>((n_frames + segment_frames - 1) / segment_frames);
  return m;
}

SegmentSpan interval_to_segments(const Interval& iv, const VideoMeta& meta) {
  if (iv.end() > meta.duration_sec + kTimeEpsilon) {
    std::ostringstream ss;
    ss << "video " << meta.video_id << ": interval [" << iv.start() << ", " << iv.end()
       << ") exceeds duration " << meta.duration_sec;
    throw RangeError(ss.str());
  }
  const double seg = static_cast<double>(meta.segment_frames);
  const auto top = static_cast<double>(meta.n_segments - 1);
  const double first = std::min(top, std::floor(iv.start() * meta.fps / seg));
  double last = std::min(top, std::ceil(iv.end() * meta.fps / seg) - 1.0);
  last = std::max(last, first);
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

Interval segments_to_interval(const SegmentSpan& span, const VideoMeta& meta) {
  if (span.last < span.first || span.last >= meta.n_segments) {
    throw RangeError("video " + meta.video_id + ": segment span out of range");
  }
  const double seg = static_cast<double>(meta.segment_frames);
  const double start = static_cast<double>(span.first) * seg / meta.fps;
  const double end = std::min(meta.duration_sec, static_cast<double>(span.last + 1) * seg / meta.fps);
  return Interval(start, end);
}

}  // namespace densecap
