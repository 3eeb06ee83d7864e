#include "densecap/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "densecap/caption.hpp"
#include "densecap/errors.hpp"
#include "densecap/features.hpp"
#include "densecap/io_util.hpp"
#include "densecap/metrics.hpp"
#include "densecap/proposals.hpp"
#include "densecap/ranker.hpp"
#include "densecap/rerank.hpp"
#include "densecap/run_config.hpp"
#include "densecap/synth.hpp"
#include "densecap/text.hpp"
#include "json.hpp"

namespace densecap::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVariants[] = {"vanilla", "attention", "topic"};

struct Common {
  std::string config_path;
  std::optional<std::string> run_dir;
  std::optional<std::uint64_t> seed;
  std::string split = "val";
};

fs::path in_run(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.paths.run_dir) / name; }

const std::string& manifest_path(const RunConfig& cfg, const std::string& split) {
  if (split == "train") return cfg.paths.train_manifest;
  if (split == "val") return cfg.paths.val_manifest;
  throw ConfigError("split must be 'train' or 'val', got '" + split + "'");
}

// Loaded features plus context summary for one video, cached per command.
struct VideoData {
  const ManifestEntry* entry = nullptr;
  FeatureSequence seq;
  ContextSequence ctx;
};

class FeatureCache {
 public:
  FeatureCache(const DatasetManifest& manifest, double decay) : manifest_(manifest), decay_(decay) {}

  const VideoData& get(const std::string& video_id) {
    auto it = cache_.find(video_id);
    if (it != cache_.end()) return it->second;
    VideoData d;
    d.entry = &manifest_.find(video_id);
    d.seq = load_features(manifest_, *d.entry);
    d.ctx = context_summary(d.seq, decay_);
    return cache_.emplace(video_id, std::move(d)).first->second;
  }

 private:
  const DatasetManifest& manifest_;
  double decay_;
  std::map<std::string, VideoData> cache_;
};

// Records grouped by video, videos in order of first appearance.
template <typename T, typename Key>
std::vector<std::pair<std::string, std::vector<T>>> group_by_video(const std::vector<T>& records, Key key) {
  std::vector<std::pair<std::string, std::vector<T>>> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    const std::string& vid = key(r);
    auto [it, fresh] = index.emplace(vid, out.size());
    if (fresh) out.push_back({vid, {}});
    out[it->second].second.push_back(r);
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) {
    s += l;
    s += '\n';
  }
  return s;
}

CaptionInput caption_input(const VideoData& v, const Interval& iv, bool use_context) {
  const SegmentSpan span = interval_to_segments(iv, v.entry->meta);
  return make_caption_input(v.seq, span, use_context ? &v.ctx : nullptr);
}

// --------------------------------------------------------------------------

void cmd_synth(const RunConfig& cfg) {
  const SynthCorpus corpus = generate(to_synth_config(cfg));
  write_corpus(corpus, cfg.paths.data_dir);
  std::cout << "synth: " << corpus.train.entries.size() << " train and " << corpus.val.entries.size()
            << " val videos, " << corpus.events.size() << " events -> " << cfg.paths.data_dir << "\n";
}

void cmd_cluster(const RunConfig& cfg) {
  const DatasetManifest m = read_manifest(cfg.paths.train_manifest);
  std::vector<double> props;
  for (const auto& e : m.entries) {
    for (const auto& ev : e.events) props.push_back(ev.interval.length() / e.meta.duration_sec);
  }
  const WindowBank bank = cluster_proportions(props, cfg.cluster.K);
  write_file_atomic(in_run(cfg, "bank.json"), bank_to_json(bank));
  std::cout << "cluster: K=" << bank.K() << " from " << props.size() << " events\n";
}

void cmd_propose(const RunConfig& cfg, const std::string& split) {
  const DatasetManifest m = read_manifest(manifest_path(cfg, split));
  const WindowBank bank = bank_from_json(read_text_file(in_run(cfg, "bank.json")));
  std::vector<std::string> lines;
  std::size_t positives = 0;
  for (const auto& e : m.entries) {
    std::vector<Interval> gt;
    for (const auto& ev : e.events) gt.push_back(ev.interval);
    for (const auto& c : label_candidates(generate_candidates(e.meta, bank), gt)) {
      if (c.label == Label::kPositive) ++positives;
      lines.push_back(candidate_to_jsonl(e.meta.video_id, c));
    }
  }
  const fs::path out = in_run(cfg, "candidates_" + split + ".jsonl");
  write_file_atomic(out, join_lines(lines));
  std::cout << "propose: " << lines.size() << " candidates (" << positives << " positive) -> " << out.string() << "\n";
}

void cmd_train_ranker(const RunConfig& cfg) {
  const DatasetManifest m = read_manifest(cfg.paths.train_manifest);
  const auto cands = parse_candidates_jsonl(read_text_file(in_run(cfg, "candidates_train.jsonl")));
  FeatureCache cache(m, cfg.features.context_decay);
  std::vector<RankerSample> samples;
  for (const auto& vc : cands) {
    const Label l = vc.candidate.label;
    if (l != Label::kPositive && l != Label::kNegative) continue;
    const VideoData& v = cache.get(vc.video_id);
    samples.push_back({assemble_features(v.seq, v.ctx, vc.candidate.interval, v.entry->meta).flatten(),
                       l == Label::kPositive});
  }
  RankerConfig rc;
  rc.hidden = cfg.ranker.hidden;
  rc.adam.lr = cfg.ranker.lr;
  rc.batch_size = cfg.ranker.batch_size;
  rc.epochs = cfg.ranker.epochs;
  rc.seed = derive_seed(cfg.seed, "train-ranker");
  const RankerFit fit = train_ranker(samples, rc);
  write_file_atomic(in_run(cfg, "ranker.json"), ranker_to_json(fit.model));
  std::cout << "train-ranker: " << samples.size() << " samples, loss " << fit.initial_loss << " -> "
            << fit.final_loss << "\n";
}

void cmd_rank(const RunConfig& cfg, const std::string& split) {
  const DatasetManifest m = read_manifest(manifest_path(cfg, split));
  const RankerModel model = ranker_from_json(read_text_file(in_run(cfg, "ranker.json")));
  const auto cands = parse_candidates_jsonl(read_text_file(in_run(cfg, "candidates_" + split + ".jsonl")));
  FeatureCache cache(m, cfg.features.context_decay);
  std::vector<std::string> lines;
  for (const auto& [vid, group] : group_by_video(cands, [](const VideoCandidate& c) -> const std::string& {
         return c.video_id;
       })) {
    const VideoData& v = cache.get(vid);
    std::vector<FeaturizedCandidate> fc;
    for (const auto& c : group) {
      fc.push_back({c.candidate.interval, assemble_features(v.seq, v.ctx, c.candidate.interval, v.entry->meta)});
    }
    for (const auto& p : score_and_filter(model, fc, cfg.ranker.threshold)) lines.push_back(scored_to_jsonl(vid, p));
  }
  const fs::path out = in_run(cfg, "scored_" + split + ".jsonl");
  write_file_atomic(out, join_lines(lines));
  std::cout << "rank: kept " << lines.size() << " of " << cands.size() << " candidates -> " << out.string() << "\n";
}

struct TrainingEvent {
  CaptionInput input;
  const Event* event = nullptr;
};

std::vector<TrainingEvent> training_events(const DatasetManifest& m, FeatureCache& cache, bool use_context) {
  std::vector<TrainingEvent> out;
  for (const auto& e : m.entries) {
    const VideoData& v = cache.get(e.meta.video_id);
    for (const auto& ev : e.events) out.push_back({caption_input(v, ev.interval, use_context), &ev});
  }
  if (out.empty()) throw DataError("training manifest has no events");
  return out;
}

void cmd_train_captioner(const RunConfig& cfg, const std::string& variant_name) {
  const DecoderVariant variant = variant_from_string(variant_name);
  const DatasetManifest m = read_manifest(cfg.paths.train_manifest);
  FeatureCache cache(m, cfg.features.context_decay);
  const auto events = training_events(m, cache, cfg.captioner.use_context);

  std::vector<std::string> captions;
  for (const auto& t : events) captions.push_back(t.event->caption);
  const Vocabulary vocab = build_vocab(captions, cfg.captioner.min_count);

  DecoderShape shape;
  shape.variant = variant;
  shape.vocab = vocab.size();
  shape.embed = cfg.captioner.embed;
  shape.hidden = cfg.captioner.hidden;
  shape.dims = static_cast<int>(events.front().input.pooled.size());

  TopicPredictor topic;
  if (variant == DecoderVariant::kTopic) {
    std::vector<Eigen::VectorXd> pooled;
    std::vector<int> labels;
    for (const auto& t : events) {
      if (!t.event->topic_id) throw DataError("topic variant needs topic_id on every training event");
      pooled.push_back(t.input.pooled);
      labels.push_back(*t.event->topic_id);
    }
    shape.n_topics = *std::max_element(labels.begin(), labels.end()) + 1;
    TopicConfig tc;
    tc.adam.lr = cfg.captioner.topic_lr;
    tc.epochs = cfg.captioner.topic_epochs;
    tc.seed = derive_seed(cfg.seed, "topic");
    topic = train_topic_predictor(pooled, labels, shape.n_topics, tc);
  }

  Rng init(derive_seed(cfg.seed, "init-" + variant_name));
  DecoderModel model = DecoderModel::random(shape, init);
  if (variant == DecoderVariant::kTopic) model.topic = topic;

  std::vector<CaptionPair> pairs;
  for (const auto& t : events) pairs.push_back({t.input, vocab.encode(t.event->caption)});
  XeConfig xc;
  xc.adam.lr = cfg.captioner.lr;
  xc.adam.clip_norm = cfg.captioner.clip_norm;
  xc.epochs = cfg.captioner.epochs;
  xc.batch_size = cfg.captioner.batch_size;
  xc.seed = derive_seed(cfg.seed, "xe-" + variant_name);
  XeFit fit = train_xe(std::move(model), pairs, xc);

  const fs::path out = in_run(cfg, "captioner_" + variant_name + ".json");
  write_file_atomic(out, checkpoint_to_json({fit.model, vocab, cfg.captioner.use_context}));
  std::cout << "train-captioner: " << variant_name << ", " << pairs.size() << " pairs, V=" << vocab.size();
  if (!fit.epoch_perplexity.empty()) {
    std::cout << ", perplexity " << fit.epoch_perplexity.front() << " -> " << fit.epoch_perplexity.back();
  }
  std::cout << " -> " << out.string() << "\n";
}

void cmd_scst(const RunConfig& cfg, const std::vector<std::string>& variants) {
  const DatasetManifest m = read_manifest(cfg.paths.train_manifest);
  FeatureCache cache(m, cfg.features.context_decay);
  ScstConfig sc;
  sc.alpha_cider = cfg.scst.alpha_cider;
  sc.alpha_meteor = cfg.scst.alpha_meteor;
  sc.max_length = cfg.scst.max_length;
  sc.adam.lr = cfg.scst.lr;
  sc.adam.clip_norm = cfg.scst.clip_norm;

  for (const auto& name : variants) {
    variant_from_string(name);
    CaptionCheckpoint ckpt = checkpoint_from_json(read_text_file(in_run(cfg, "captioner_" + name + ".json")));
    const auto events = training_events(m, cache, ckpt.use_context);
    std::vector<std::vector<Tokens>> refs;
    for (const auto& t : events) refs.push_back({tokenize(t.event->caption)});
    const CiderCorpus corpus(refs);
    const CaptionReward reward(&corpus, sc.alpha_cider, sc.alpha_meteor);

    ScstState state(ckpt.model, sc, derive_seed(cfg.seed, "scst-" + name));
    Rng order_rng(derive_seed(cfg.seed, "scst-order-" + name));
    std::vector<std::size_t> order(events.size());
    double first_mean = 0.0;
    double last_mean = 0.0;
    for (int epoch = 0; epoch < cfg.scst.epochs; ++epoch) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      order_rng.shuffle(order);
      double total = 0.0;
      for (std::size_t i : order) {
        total += scst_update(ckpt.model, state, events[i].input, refs[i], ckpt.vocab, reward, sc).greedy_reward;
      }
      last_mean = total / static_cast<double>(order.size());
      if (epoch == 0) first_mean = last_mean;
    }
    const fs::path out = in_run(cfg, "scst_" + name + ".json");
    write_file_atomic(out, checkpoint_to_json(ckpt));
    std::cout << "scst: " << name << ", " << cfg.scst.epochs << " epochs, mean greedy reward " << first_mean << " -> "
              << last_mean << " -> " << out.string() << "\n";
  }
}

std::vector<CaptionCheckpoint> load_ensemble(const RunConfig& cfg) {
  std::vector<fs::path> paths;
  if (cfg.caption.checkpoints.empty()) {
    for (const char* v : kVariants) {
      const fs::path scst = in_run(cfg, std::string("scst_") + v + ".json");
      const fs::path xe = in_run(cfg, std::string("captioner_") + v + ".json");
      if (fs::exists(scst)) {
        paths.push_back(scst);
      } else if (fs::exists(xe)) {
        paths.push_back(xe);
      }
    }
    if (paths.empty()) throw DataError("no caption checkpoints in " + cfg.paths.run_dir);
  } else {
    for (const auto& p : cfg.caption.checkpoints) paths.emplace_back(p);
  }
  std::vector<CaptionCheckpoint> out;
  for (const auto& p : paths) {
    out.push_back(checkpoint_from_json(read_text_file(p)));
    if (!(out.back().vocab == out.front().vocab)) throw DataError("checkpoint " + p.string() + ": vocabulary mismatch");
    if (out.back().use_context != out.front().use_context) {
      throw DataError("checkpoint " + p.string() + ": use_context differs from the first checkpoint");
    }
  }
  return out;
}

void cmd_caption(const RunConfig& cfg, const std::string& split, bool groundtruth) {
  const DatasetManifest m = read_manifest(manifest_path(cfg, split));
  const auto ckpts = load_ensemble(cfg);
  std::vector<DecoderModel> models;
  for (const auto& c : ckpts) models.push_back(c.model);
  const Vocabulary& vocab = ckpts.front().vocab;
  const bool use_context = ckpts.front().use_context;

  std::vector<std::pair<std::string, Interval>> proposals;
  if (groundtruth) {
    for (const auto& e : m.entries) {
      for (const auto& ev : e.events) proposals.emplace_back(e.meta.video_id, ev.interval);
    }
  } else {
    for (const auto& r : parse_scored_jsonl(read_text_file(in_run(cfg, "scored_" + split + ".jsonl")))) {
      proposals.emplace_back(r.video_id, r.interval);
    }
  }
  FeatureCache cache(m, cfg.features.context_decay);
  std::vector<std::string> lines;
  for (const auto& [vid, iv] : proposals) {
    const CaptionHypothesis hyp =
        beam_search(models, caption_input(cache.get(vid), iv, use_context), cfg.caption.beam, cfg.caption.max_length);
    lines.push_back(caption_to_jsonl({vid, iv, vocab.decode(hyp.tokens), hyp.s_c, hyp.log_prob}));
  }
  const fs::path out = in_run(cfg, (groundtruth ? "captions_gt_" : "captions_") + split + ".jsonl");
  write_file_atomic(out, join_lines(lines));
  std::cout << "caption: " << lines.size() << " proposals, ensemble of " << models.size() << " -> " << out.string()
            << "\n";
}

void cmd_rerank(const RunConfig& cfg, const std::string& split) {
  const auto scored = parse_scored_jsonl(read_text_file(in_run(cfg, "scored_" + split + ".jsonl")));
  const auto captions = parse_captions_jsonl(read_text_file(in_run(cfg, "captions_" + split + ".jsonl")));
  std::map<std::tuple<std::string, double, double>, const CaptionRecord*> by_key;
  for (const auto& c : captions) by_key[{c.video_id, c.interval.start(), c.interval.end()}] = &c;

  Submission submission;
  std::map<std::string, std::vector<RerankInput>> per_video;
  for (const auto& s : scored) {
    const auto it = by_key.find({s.video_id, s.interval.start(), s.interval.end()});
    if (it == by_key.end()) {
      throw DataError("video " + s.video_id + ": no caption for proposal [" + std::to_string(s.interval.start()) +
                      ", " + std::to_string(s.interval.end()) + ")");
    }
    per_video[s.video_id].push_back({s.interval, s.s_p, it->second->caption, it->second->s_c});
  }
  std::size_t kept = 0;
  for (const auto& [vid, inputs] : per_video) {
    submission[vid] = rerank(inputs, static_cast<std::size_t>(cfg.rerank.top_k));
    kept += submission[vid].size();
  }
  const fs::path out = in_run(cfg, "submission_" + split + ".json");
  write_file_atomic(out, submission_to_json(submission));
  std::cout << "rerank: " << kept << " events over " << submission.size() << " videos -> " << out.string() << "\n";
}

VideoIntervals read_intervals_jsonl(const fs::path& path) {
  VideoIntervals out;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("video_id").get<std::string>()].emplace_back(j.at("start").get<double>(), j.at("end").get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void cmd_eval_props(const RunConfig& cfg, const std::string& split, const std::string& proposals) {
  const DatasetManifest m = read_manifest(manifest_path(cfg, split));
  const fs::path in = proposals.empty() ? in_run(cfg, "scored_" + split + ".jsonl") : fs::path(proposals);
  VideoIntervals gt;
  for (const auto& e : m.entries) {
    auto& v = gt[e.meta.video_id];
    for (const auto& ev : e.events) v.push_back(ev.interval);
  }
  const EvalReport report = proposal_eval(read_intervals_jsonl(in), gt, cfg.eval.thresholds);
  const fs::path out = in_run(cfg, "eval_props_" + in.stem().string() + ".json");
  write_file_atomic(out, report.to_json());
  std::cout << report.to_table();
}

void cmd_eval_caps(const RunConfig& cfg, const std::string& split, const std::string& submission,
                   const std::string& captions) {
  if (!submission.empty() && !captions.empty()) throw ConfigError("give either --submission or --captions, not both");
  const DatasetManifest m = read_manifest(manifest_path(cfg, split));
  VideoEvents gt;
  for (const auto& e : m.entries) {
    auto& v = gt[e.meta.video_id];
    for (const auto& ev : e.events) v.push_back({ev.interval, ev.caption});
  }
  VideoEvents pred;
  fs::path in;
  if (!captions.empty()) {
    in = captions;
    for (const auto& c : parse_captions_jsonl(read_text_file(in))) pred[c.video_id].push_back({c.interval, c.caption});
  } else {
    in = submission.empty() ? in_run(cfg, "submission_" + split + ".json") : fs::path(submission);
    for (const auto& [vid, events] : parse_submission(read_text_file(in))) {
      for (const auto& e : events) pred[vid].push_back({e.interval, e.sentence});
    }
  }
  CiderOptions co;
  co.cider_d = cfg.eval.cider_d;
  const EvalReport report = dense_caption_eval(pred, gt, cfg.eval.thresholds, co);
  const fs::path out = in_run(cfg, "eval_caps_" + in.stem().string() + ".json");
  write_file_atomic(out, report.to_json());
  std::cout << report.to_table();
}

std::string quote(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

int report_error(ErrorKind kind, const std::string& message) {
  const int code = exit_code(kind);
  std::cerr << "densecap: error kind=" << to_string(kind) << " code=" << code << " message=\"" << quote(message)
            << "\"\n";
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Dense video captioning pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "densecap 0.1.0");

  Common common;
  RunConfig cfg;

  // Flag values; unset flags leave the config value alone.
  std::optional<std::string> data_dir;
  std::optional<int> n_videos, K, ranker_epochs, top_k, beam, captioner_epochs, scst_epochs;
  std::optional<double> threshold, alpha_cider, alpha_meteor;
  std::optional<std::vector<double>> thresholds;
  std::optional<std::vector<std::string>> checkpoints;
  std::string variant = "vanilla";
  std::optional<std::string> scst_variant;
  bool groundtruth = false;
  std::string proposals_file, submission_file, captions_file;

  const auto add_common = [&](CLI::App* sub, bool with_split) {
    sub->add_option("--config", common.config_path, "JSON run config")->check(CLI::ExistingFile);
    sub->add_option("--run-dir", common.run_dir, "Run directory for outputs");
    sub->add_option("--seed", common.seed, "Global seed");
    if (with_split) sub->add_option("--split", common.split, "Manifest split")->check(CLI::IsMember({"train", "val"}));
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_common(synth, false);
  synth->add_option("--out", data_dir, "Corpus directory (default <run-dir>/data)");
  synth->add_option("--n-videos", n_videos);

  auto* cluster = app.add_subcommand("cluster", "Fit the window bank on training event lengths");
  add_common(cluster, false);
  cluster->add_option("-K,--clusters", K, "Number of window lengths");

  auto* propose = app.add_subcommand("propose", "Emit labeled sliding-window candidates");
  add_common(propose, true);

  auto* train_ranker = app.add_subcommand("train-ranker", "Train the proposal ranker");
  add_common(train_ranker, false);
  train_ranker->add_option("--epochs", ranker_epochs);

  auto* rank = app.add_subcommand("rank", "Score candidates and keep those above the threshold");
  add_common(rank, true);
  rank->add_option("--threshold", threshold, "Keep proposals with s_p above this");

  auto* train_captioner = app.add_subcommand("train-captioner", "Cross-entropy training of one decoder variant");
  add_common(train_captioner, false);
  train_captioner->add_option("--variant", variant)->check(CLI::IsMember({"vanilla", "attention", "topic"}));
  train_captioner->add_option("--epochs", captioner_epochs);

  auto* scst = app.add_subcommand("scst", "Self-critical fine-tuning of trained decoders");
  add_common(scst, false);
  scst->add_option("--variant", scst_variant, "Only this variant (default: config scst.variants)")
      ->check(CLI::IsMember({"vanilla", "attention", "topic"}));
  scst->add_option("--alpha-cider", alpha_cider);
  scst->add_option("--alpha-meteor", alpha_meteor);
  scst->add_option("--epochs", scst_epochs);

  auto* caption = app.add_subcommand("caption", "Ensemble beam search over proposals");
  add_common(caption, true);
  caption->add_option("--beam", beam);
  caption->add_option("--checkpoints", checkpoints, "Checkpoint files (default: one per variant in the run dir)");
  caption->add_flag("--groundtruth", groundtruth, "Caption the groundtruth events instead of ranked proposals");

  auto* rerank_cmd = app.add_subcommand("rerank", "Combine s_p and s_c and keep the top events per video");
  add_common(rerank_cmd, true);
  rerank_cmd->add_option("--top-k", top_k);

  auto* eval_props = app.add_subcommand("eval-props", "Proposal precision/recall");
  add_common(eval_props, true);
  eval_props->add_option("--proposals", proposals_file, "JSONL with video_id/start/end (default scored_<split>.jsonl)");
  eval_props->add_option("--thresholds", thresholds)->delimiter(',');

  auto* eval_caps = app.add_subcommand("eval-caps", "Dense captioning metrics");
  add_common(eval_caps, true);
  eval_caps->add_option("--submission", submission_file, "Submission JSON (default submission_<split>.json)");
  eval_caps->add_option("--captions", captions_file, "Caption JSONL instead of a submission");
  eval_caps->add_option("--thresholds", thresholds)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorKind::kConfig, e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (!common.config_path.empty()) cfg = parse_run_config(read_text_file(common.config_path));
    if (common.run_dir) cfg.paths.run_dir = *common.run_dir;
    if (common.seed) cfg.seed = *common.seed;
    if (data_dir) cfg.paths.data_dir = *data_dir;
    if (n_videos) cfg.synth.n_videos = *n_videos;
    if (K) cfg.cluster.K = *K;
    if (ranker_epochs) cfg.ranker.epochs = *ranker_epochs;
    if (threshold) cfg.ranker.threshold = *threshold;
    if (captioner_epochs) cfg.captioner.epochs = *captioner_epochs;
    if (scst_variant) cfg.scst.variants = {*scst_variant};
    if (alpha_cider) cfg.scst.alpha_cider = *alpha_cider;
    if (alpha_meteor) cfg.scst.alpha_meteor = *alpha_meteor;
    if (scst_epochs) cfg.scst.epochs = *scst_epochs;
    if (beam) cfg.caption.beam = *beam;
    if (checkpoints) cfg.caption.checkpoints = *checkpoints;
    if (top_k) cfg.rerank.top_k = *top_k;
    if (thresholds) cfg.eval.thresholds = *thresholds;
    cfg.resolve();
    write_file_atomic(in_run(cfg, "config." + name + ".json"), run_config_to_json(cfg));

    if (name == "synth") {
      cmd_synth(cfg);
    } else if (name == "cluster") {
      cmd_cluster(cfg);
    } else if (name == "propose") {
      cmd_propose(cfg, common.split);
    } else if (name == "train-ranker") {
      cmd_train_ranker(cfg);
    } else if (name == "rank") {
      cmd_rank(cfg, common.split);
    } else if (name == "train-captioner") {
      cmd_train_captioner(cfg, variant);
    } else if (name == "scst") {
      cmd_scst(cfg, cfg.scst.variants);
    } else if (name == "caption") {
      cmd_caption(cfg, common.split, groundtruth);
    } else if (name == "rerank") {
      cmd_rerank(cfg, common.split);
    } else if (name == "eval-props") {
      cmd_eval_props(cfg, common.split, proposals_file);
    } else if (name == "eval-caps") {
      cmd_eval_caps(cfg, common.split, submission_file, captions_file);
    }
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorKind::kInternal, e.what());
  }
  return 0;
}

}  // namespace densecap::cli
