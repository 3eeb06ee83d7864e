#include "densecap/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kPositive: return "positive";
    case Label::kNegative: return "negative";
    case Label::kIgnore: return "ignore";
    case Label::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label label_from_string(std::string_view s) {
  if (s == "positive") return Label::kPositive;
  if (s == "negative") return Label::kNegative;
  if (s == "ignore") return Label::kIgnore;
  if (s == "unlabeled") return Label::kUnlabeled;
  throw DataError("unknown label '" + std::string(s) + "'");
}

namespace {

// Nearest center, ties to the lower index.
std::size_t nearest(double x, const std::vector<double>& centers) {
  std::size_t best = 0;
  double best_d = std::abs(x - centers[0]);
  for (std::size_t k = 1; k < centers.size(); ++k) {
    const double d = std::abs(x - centers[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

bool assign(const std::vector<double>& pts, const std::vector<double>& centers, std::vector<std::size_t>& a) {
  bool changed = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t k = nearest(pts[i], centers);
    if (k != a[i]) {
      a[i] = k;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

WindowBank cluster_proportions(std::span<const double> proportions, int K) {
  if (K < 1) throw ConfigError("cluster count K must be >= 1");
  std::vector<double> pts(proportions.begin(), proportions.end());
  for (double p : pts) {
    if (!std::isfinite(p) || p <= 0.0 || p > 1.0) throw DataError("length proportion outside (0, 1]");
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> uniq = pts;
  const auto distinct = static_cast<std::size_t>(std::unique(uniq.begin(), uniq.end()) - uniq.begin());
  const auto k_count = static_cast<std::size_t>(K);
  if (distinct < k_count) {
    throw ConfigError("only " + std::to_string(distinct) + " distinct proportions for K=" + std::to_string(K) +
                      "; use a smaller K");
  }
  const std::size_t n = pts.size();
  std::vector<double> centers(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(K);
    centers[k] = pts[std::min(n - 1, static_cast<std::size_t>(q * static_cast<double>(n)))];
  }

  std::vector<std::size_t> a(n, k_count);  // k_count = unassigned
  std::vector<std::size_t> counts(k_count);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = assign(pts, centers, a);
    for (std::size_t guard = 0; guard <= k_count; ++guard) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < n; ++i) ++counts[a[i]];
      const auto empty = std::find(counts.begin(), counts.end(), 0);
      if (empty == counts.end()) break;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(pts[i] - centers[a[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[static_cast<std::size_t>(empty - counts.begin())] = pts[far];
      assign(pts, centers, a);
      changed = true;
    }
    if (!changed) break;
    std::vector<double> sums(k_count, 0.0);
    for (std::size_t i = 0; i < n; ++i) sums[a[i]] += pts[i];
    for (std::size_t k = 0; k < k_count; ++k) {
      if (counts[k] > 0) centers[k] = sums[k] / static_cast<double>(counts[k]);
    }
  }

  std::sort(centers.begin(), centers.end());
  if (std::adjacent_find(centers.begin(), centers.end()) != centers.end()) {
    throw InternalError("k-means produced duplicate centers");
  }
  return WindowBank{std::move(centers)};
}

std::vector<CandidateProposal> generate_candidates(const VideoMeta& meta, const WindowBank& bank) {
  std::vector<CandidateProposal> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  const double l = meta.duration_sec;
  for (double p : bank.centers) {
    const double w = p * l;
    for (std::size_t j = 0;; ++j) {
      const double start = static_cast<double>(j) * w / 4.0;
      if (!(start < l)) break;
      const double end = std::min(start + w, l);
      if (j > 0 && end - start < 0.5 * w) continue;
      Interval iv(start, end);
      const SegmentSpan span = interval_to_segments(iv, meta);
      if (!seen.insert({span.first, span.last}).second) continue;
      out.push_back(CandidateProposal{iv, p, Label::kUnlabeled, 0.0});
    }
  }
  return out;
}

std::vector<CandidateProposal> label_candidates(std::vector<CandidateProposal> cands,
                                                std::span<const Interval> groundtruth) {
  for (auto& c : cands) {
    double best = 0.0;
    for (const auto& gt : groundtruth) best = std::max(best, tiou(c.interval, gt));
    c.best_tiou = best;
    if (best >= kPositiveTiou) {
      c.label = Label::kPositive;
    } else if (best < kNegativeTiou) {
      c.label = Label::kNegative;
    } else {
      c.label = Label::kIgnore;
    }
  }
  return cands;
}

std::string bank_to_json(const WindowBank& bank) {
  nlohmann::ordered_json j;
  j["K"] = bank.K();
  j["centers"] = bank.centers;
  return j.dump() + "\n";
}

WindowBank bank_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    WindowBank bank{j.at("centers").get<std::vector<double>>()};
    if (j.at("K").get<std::size_t>() != bank.K()) throw DataError("window bank K does not match centers");
    for (std::size_t k = 0; k < bank.K(); ++k) {
      if (!(bank.centers[k] > 0.0 && bank.centers[k] <= 1.0)) throw DataError("window bank center outside (0, 1]");
      if (k > 0 && !(bank.centers[k] > bank.centers[k - 1])) throw DataError("window bank centers not ascending");
    }
    return bank;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed window bank: ") + e.what());
  }
}

std::string candidate_to_jsonl(const std::string& video_id, const CandidateProposal& cand) {
  nlohmann::ordered_json j;
  j["video_id"] = video_id;
  j["start"] = cand.interval.start();
  j["end"] = cand.interval.end();
  j["best_tiou"] = cand.best_tiou;
  j["label"] = std::string(to_string(cand.label));
  return j.dump();
}

std::vector<VideoCandidate> parse_candidates_jsonl(const std::string& text) {
  std::vector<VideoCandidate> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CandidateProposal c{Interval(j.at("start").get<double>(), j.at("end").get<double>()), 0.0,
                          label_from_string(j.at("label").get<std::string>()), j.at("best_tiou").get<double>()};
      out.push_back({j.at("video_id").get<std::string>(), c});
    } catch (const nlohmann::json::exception& e) {
      throw DataError("candidate line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace densecap
