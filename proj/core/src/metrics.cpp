#include "densecap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "densecap/errors.hpp"
#include "json.hpp"

namespace densecap {

NGramCounts ngram_counts(const Tokens& tokens, int n) {
  NGramCounts out;
  const auto len = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= len; ++i) {
    ++out[Tokens(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

double bleu4(const Tokens& candidate, std::span<const Tokens> references) {
  if (references.empty()) throw DataError("bleu4 needs at least one reference");
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxNgram; ++n) {
    const NGramCounts cand = ngram_counts(candidate, n);
    NGramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [g, c] : ngram_counts(ref, n)) max_ref[g] = std::max(max_ref[g], c);
    }
    int matched = 0;
    int total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      const auto it = max_ref.find(g);
      if (it != max_ref.end()) matched += std::min(c, it->second);
    }
    double p;
    if (matched > 0) {
      p = static_cast<double>(matched) / total;
    } else if (n == 1) {
      return 0.0;
    } else {
      p = 1.0 / (total + 1);
    }
    log_sum += std::log(p);
  }
  const auto c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references[0].size());
  for (const auto& ref : references) {
    const auto len = static_cast<double>(ref.size());
    const double d = std::abs(len - c);
    const double best = std::abs(r - c);
    if (d < best || (d == best && len < r)) r = len;
  }
  const double bp = std::exp(std::min(0.0, 1.0 - r / c));
  return bp * std::exp(log_sum / kMaxNgram);
}

CiderCorpus::CiderCorpus(std::span<const std::vector<Tokens>> documents) {
  for (const auto& doc : documents) {
    std::set<Tokens> present;
    for (const auto& ref : doc) {
      for (int n = 1; n <= kMaxNgram; ++n) {
        for (const auto& [g, c] : ngram_counts(ref, n)) present.insert(g);
      }
    }
    for (const auto& g : present) ++df_[g];
    ++n_docs_;
  }
}

int CiderCorpus::df(const Tokens& ngram) const {
  const auto it = df_.find(ngram);
  return it == df_.end() ? 0 : it->second;
}

double CiderCorpus::idf(const Tokens& ngram) const {
  return std::log(static_cast<double>(n_docs_) / std::max(1, df(ngram)));
}

namespace {

using TfIdf = std::map<Tokens, double>;

TfIdf tfidf(const Tokens& tokens, int n, const CiderCorpus& corpus) {
  TfIdf v;
  for (const auto& [g, c] : ngram_counts(tokens, n)) v[g] = c * corpus.idf(g);
  return v;
}

double cosine(const TfIdf& a, const TfIdf& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [g, x] : a) {
    na += x * x;
    const auto it = b.find(g);
    if (it != b.end()) dot += x * it->second;
  }
  for (const auto& [g, y] : b) nb += y * y;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double cider(const Tokens& candidate, std::span<const Tokens> references, const CiderCorpus& corpus,
             const CiderOptions& options) {
  if (corpus.empty()) throw DataError("CIDEr document-frequency table is empty");
  if (references.empty()) throw DataError("cider needs at least one reference");
  double total = 0.0;
  for (int n = 1; n <= kMaxNgram; ++n) {
    const TfIdf vc = tfidf(candidate, n, corpus);
    double per_n = 0.0;
    for (const auto& ref : references) {
      double s = cosine(vc, tfidf(ref, n, corpus));
      if (options.cider_d) {
        const double delta = static_cast<double>(candidate.size()) - static_cast<double>(ref.size());
        s *= 10.0 * std::exp(-(delta * delta) / (2.0 * options.sigma * options.sigma));
      }
      per_n += s;
    }
    total += per_n / static_cast<double>(references.size());
  }
  return total / kMaxNgram;
}

namespace {

class AlignmentSearch {
 public:
  AlignmentSearch(const Tokens& cand, const Tokens& ref) : cand_(cand), ref_(ref) {
    std::map<std::string, int> cc;
    std::map<std::string, int> rc;
    for (const auto& t : cand) ++cc[t];
    for (const auto& t : ref) ++rc[t];
    for (const auto& [t, n] : cc) {
      const auto it = rc.find(t);
      if (it != rc.end()) need_[t] = std::min(n, it->second);
    }
    remaining_.resize(cand.size());
    std::map<std::string, int> seen;
    for (std::size_t i = cand.size(); i-- > 0;) remaining_[i] = ++seen[cand[i]];
  }

  int matches() const {
    int m = 0;
    for (const auto& [t, n] : need_) m += n;
    return m;
  }

  int min_chunks() {
    std::string used(ref_.size(), '0');
    std::map<std::string, int> matched;
    return solve(0, -1, used, matched);
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  int solve(std::size_t i, int prev_j, std::string& used, std::map<std::string, int>& matched) {
    if (i == cand_.size()) return 0;
    std::string key = std::to_string(i) + ':' + std::to_string(prev_j) + ':' + used;
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::string& tok = cand_[i];
    const auto nit = need_.find(tok);
    const int needed = nit == need_.end() ? 0 : nit->second - matched[tok];
    int best = kInf;
    if (remaining_[i] - 1 >= needed) best = solve(i + 1, -1, used, matched);
    if (needed > 0) {
      for (std::size_t j = 0; j < ref_.size(); ++j) {
        if (used[j] == '1' || ref_[j] != tok) continue;
        const int cost = (prev_j >= 0 && static_cast<int>(j) == prev_j + 1) ? 0 : 1;
        used[j] = '1';
        ++matched[tok];
        const int sub = solve(i + 1, static_cast<int>(j), used, matched);
        --matched[tok];
        used[j] = '0';
        if (sub < kInf) best = std::min(best, cost + sub);
      }
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  const Tokens& cand_;
  const Tokens& ref_;
  std::map<std::string, int> need_;
  std::vector<int> remaining_;  // occurrences of cand[i]'s token at positions >= i
  std::unordered_map<std::string, int> memo_;
};

}  // namespace

MeteorAlignment meteor_align(const Tokens& candidate, const Tokens& reference) {
  AlignmentSearch search(candidate, reference);
  MeteorAlignment a;
  a.matches = search.matches();
  a.chunks = a.matches == 0 ? 0 : search.min_chunks();
  return a;
}

double meteor_lite(const Tokens& candidate, std::span<const Tokens> references) {
  double best = 0.0;
  if (candidate.empty()) return 0.0;
  for (const auto& ref : references) {
    if (ref.empty()) continue;
    const MeteorAlignment a = meteor_align(candidate, ref);
    if (a.matches == 0) continue;
    const double m = a.matches;
    const double p = m / static_cast<double>(candidate.size());
    const double r = m / static_cast<double>(ref.size());
    const double f = 10.0 * p * r / (r + 9.0 * p);
    const double frag = static_cast<double>(a.chunks) / m;
    const double penalty = 0.5 * frag * frag * frag;
    best = std::max(best, f * (1.0 - penalty));
  }
  return best;
}

ProposalPr proposal_pr(std::span<const Interval> predictions, std::span<const Interval> groundtruth,
                       std::span<const double> thresholds) {
  std::vector<double> best_pred(predictions.size(), 0.0);
  std::vector<double> best_gt(groundtruth.size(), 0.0);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    for (std::size_t j = 0; j < groundtruth.size(); ++j) {
      const double v = tiou(predictions[i], groundtruth[j]);
      best_pred[i] = std::max(best_pred[i], v);
      best_gt[j] = std::max(best_gt[j], v);
    }
  }
  ProposalPr out;
  for (double t : thresholds) {
    PrRow row;
    row.threshold = t;
    row.precision_undefined = predictions.empty();
    row.recall_undefined = groundtruth.empty();
    if (!predictions.empty()) {
      const auto hits = std::count_if(best_pred.begin(), best_pred.end(), [t](double v) { return v >= t; });
      row.precision = static_cast<double>(hits) / static_cast<double>(predictions.size());
    }
    if (!groundtruth.empty()) {
      const auto hits = std::count_if(best_gt.begin(), best_gt.end(), [t](double v) { return v >= t; });
      row.recall = static_cast<double>(hits) / static_cast<double>(groundtruth.size());
    }
    out.avg_precision += row.precision;
    out.avg_recall += row.recall;
    out.rows.push_back(row);
  }
  if (!thresholds.empty()) {
    out.avg_precision /= static_cast<double>(thresholds.size());
    out.avg_recall /= static_cast<double>(thresholds.size());
  }
  return out;
}

ProposalPr proposal_pr_corpus(const VideoIntervals& predictions, const VideoIntervals& groundtruth,
                              std::span<const double> thresholds) {
  ProposalPr out;
  for (double t : thresholds) out.rows.push_back(PrRow{t, 0.0, 0.0, false, false});
  std::size_t videos = 0;
  const std::vector<Interval> none;
  for (const auto& [vid, gts] : groundtruth) {
    const auto it = predictions.find(vid);
    const ProposalPr v = proposal_pr(it == predictions.end() ? none : it->second, gts, thresholds);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      out.rows[k].precision += v.rows[k].precision;
      out.rows[k].recall += v.rows[k].recall;
      out.rows[k].precision_undefined = out.rows[k].precision_undefined || v.rows[k].precision_undefined;
      out.rows[k].recall_undefined = out.rows[k].recall_undefined || v.rows[k].recall_undefined;
    }
    ++videos;
  }
  if (videos > 0) {
    for (auto& row : out.rows) {
      row.precision /= static_cast<double>(videos);
      row.recall /= static_cast<double>(videos);
    }
  }
  for (const auto& row : out.rows) {
    out.avg_precision += row.precision;
    out.avg_recall += row.recall;
  }
  if (!thresholds.empty()) {
    out.avg_precision /= static_cast<double>(thresholds.size());
    out.avg_recall /= static_cast<double>(thresholds.size());
  }
  return out;
}

namespace {

VideoIntervals intervals_of(const VideoEvents& events) {
  VideoIntervals out;
  for (const auto& [vid, evs] : events) {
    auto& v = out[vid];
    for (const auto& e : evs) v.push_back(e.interval);
  }
  return out;
}

}  // namespace

EvalReport dense_caption_eval(const VideoEvents& predictions, const VideoEvents& groundtruth,
                              std::span<const double> thresholds, const CiderOptions& cider_options) {
  EvalReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  report.proposals = proposal_pr_corpus(intervals_of(predictions), intervals_of(groundtruth), thresholds);

  std::vector<std::vector<Tokens>> docs;
  std::map<std::string, std::vector<Tokens>> gt_tokens;
  for (const auto& [vid, evs] : groundtruth) {
    auto& toks = gt_tokens[vid];
    for (const auto& e : evs) {
      toks.push_back(tokenize(e.caption));
      docs.push_back({toks.back()});
    }
    report.n_groundtruth += evs.size();
  }
  const CiderCorpus corpus(docs);

  for (double t : thresholds) {
    MetricScores sum;
    std::size_t n_pred = 0;
    std::size_t pairs = 0;
    for (const auto& [vid, evs] : predictions) {
      const auto git = groundtruth.find(vid);
      if (git == groundtruth.end()) continue;
      const auto& gts = git->second;
      const auto& gtok = gt_tokens.at(vid);
      for (const auto& pred : evs) {
        ++n_pred;
        const Tokens cand = tokenize(pred.caption);
        MetricScores ev;
        std::size_t matched = 0;
        for (std::size_t j = 0; j < gts.size(); ++j) {
          if (tiou(pred.interval, gts[j].interval) < t) continue;
          const std::span<const Tokens> ref(&gtok[j], 1);
          ev.bleu4 += bleu4(cand, ref);
          ev.meteor += meteor_lite(cand, ref);
          ev.cider += cider(cand, ref, corpus, cider_options);
          ++matched;
        }
        if (matched > 0) {
          sum.bleu4 += ev.bleu4 / static_cast<double>(matched);
          sum.meteor += ev.meteor / static_cast<double>(matched);
          sum.cider += ev.cider / static_cast<double>(matched);
        }
        pairs += matched;
      }
    }
    if (n_pred > 0) {
      sum.bleu4 /= static_cast<double>(n_pred);
      sum.meteor /= static_cast<double>(n_pred);
      sum.cider /= static_cast<double>(n_pred);
    }
    report.n_predictions = n_pred;
    report.per_threshold.push_back(sum);
    report.matched_pairs.push_back(pairs);
    report.mean.bleu4 += sum.bleu4;
    report.mean.meteor += sum.meteor;
    report.mean.cider += sum.cider;
  }
  if (!thresholds.empty()) {
    const auto k = static_cast<double>(thresholds.size());
    report.mean.bleu4 /= k;
    report.mean.meteor /= k;
    report.mean.cider /= k;
  }
  return report;
}

EvalReport proposal_eval(const VideoIntervals& predictions, const VideoIntervals& groundtruth,
                         std::span<const double> thresholds) {
  EvalReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  report.proposals = proposal_pr_corpus(predictions, groundtruth, thresholds);
  for (const auto& [vid, v] : groundtruth) report.n_groundtruth += v.size();
  for (const auto& [vid, v] : predictions) {
    if (groundtruth.count(vid) != 0) report.n_predictions += v.size();
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["thresholds"] = thresholds;
  j["n_predictions"] = n_predictions;
  j["n_groundtruth"] = n_groundtruth;
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  for (const auto& r : proposals.rows) {
    nlohmann::ordered_json row;
    row["tiou"] = r.threshold;
    row["precision"] = r.precision;
    row["recall"] = r.recall;
    row["precision_undefined"] = r.precision_undefined;
    row["recall_undefined"] = r.recall_undefined;
    props.push_back(row);
  }
  j["proposals"] = props;
  j["proposals_avg"] = {{"precision", proposals.avg_precision}, {"recall", proposals.avg_recall}};
  if (!per_threshold.empty()) {
    nlohmann::ordered_json caps = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < per_threshold.size(); ++k) {
      nlohmann::ordered_json row;
      row["tiou"] = thresholds[k];
      row["Bleu4"] = per_threshold[k].bleu4;
      row["Meteor"] = per_threshold[k].meteor;
      row["CIDEr"] = per_threshold[k].cider;
      row["matched_pairs"] = matched_pairs[k];
      caps.push_back(row);
    }
    j["captions"] = caps;
    nlohmann::ordered_json avg;
    avg["Bleu4"] = mean.bleu4;
    avg["Meteor"] = mean.meteor;
    avg["CIDEr"] = mean.cider;
    j["captions_avg"] = avg;
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4);
  ss << "proposals: " << n_predictions << " predicted, " << n_groundtruth << " groundtruth\n";
  ss << std::setw(8) << "metric";
  for (double t : thresholds) ss << std::setw(10) << t;
  ss << std::setw(10) << "avg" << "\n";
  ss << std::setw(8) << "P";
  for (const auto& r : proposals.rows) ss << std::setw(10) << r.precision;
  ss << std::setw(10) << proposals.avg_precision << "\n";
  ss << std::setw(8) << "R";
  for (const auto& r : proposals.rows) ss << std::setw(10) << r.recall;
  ss << std::setw(10) << proposals.avg_recall << "\n";
  if (!per_threshold.empty()) {
    ss << "\n" << std::setw(8) << "tIoU" << std::setw(10) << "Bleu4" << std::setw(10) << "Meteor" << std::setw(10)
       << "CIDEr" << "\n";
    for (std::size_t k = 0; k < per_threshold.size(); ++k) {
      ss << std::setw(8) << thresholds[k] << std::setw(10) << per_threshold[k].bleu4 << std::setw(10)
         << per_threshold[k].meteor << std::setw(10) << per_threshold[k].cider << "\n";
    }
    ss << std::setw(8) << "avg" << std::setw(10) << mean.bleu4 << std::setw(10) << mean.meteor << std::setw(10)
       << mean.cider << "\n";
  }
  return ss.str();
}

}  // namespace densecap
