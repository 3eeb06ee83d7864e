#include "densecap/rerank.hpp"

#include <algorithm>

#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {

std::vector<RankedEvent> rerank(std::span<const RerankInput> events, std::size_t top_k) {
  std::vector<RankedEvent> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back({e.interval, e.caption, e.s_p, e.s_c, e.s_p * e.s_c});
  const auto before = [](const RankedEvent& a, const RankedEvent& b) {
    if (a.s != b.s) return a.s > b.s;
    if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
    if (a.interval.length() != b.interval.length()) return a.interval.length() < b.interval.length();
    return a.caption < b.caption;
  };
  const std::size_t k = std::min(top_k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(), before);
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(k), out.end());
  return out;
}

std::string submission_to_json(const Submission& submission) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [vid, events] : submission) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : events) {
      nlohmann::ordered_json item;
      item["sentence"] = e.caption;
      item["timestamp"] = {e.interval.start(), e.interval.end()};
      arr.push_back(std::move(item));
    }
    j[vid] = std::move(arr);
  }
  return j.dump(1) + "\n";
}

std::map<std::string, std::vector<SubmissionEvent>> parse_submission(const std::string& text) {
  std::map<std::string, std::vector<SubmissionEvent>> out;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw DataError("submission must be a JSON object keyed by video id");
    for (const auto& [vid, arr] : j.items()) {
      auto& v = out[vid];
      for (const auto& item : arr) {
        const auto ts = item.at("timestamp").get<std::vector<double>>();
        if (ts.size() != 2) throw DataError("submission timestamp must have two entries");
        v.push_back({Interval(ts[0], ts[1]), item.at("sentence").get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed submission: ") + e.what());
  }
  return out;
}

}  // namespace densecap
