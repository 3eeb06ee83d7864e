#include "densecap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "densecap/errors.hpp"

namespace densecap {
namespace {

constexpr const char* kSubjects[] = {"person", "man", "woman"};

struct Lexicon {
  const char* verbs[4];
  const char* objects[4];
};

constexpr Lexicon kLexicons[TopicGrammar::kMaxTopics] = {
    {{"chopping", "stirring", "frying", "seasoning"}, {"onions", "soup", "vegetables", "pasta"}},
    {{"kicking", "passing", "dribbling", "throwing"}, {"ball", "football", "basketball", "frisbee"}},
    {{"playing", "tuning", "strumming", "practicing"}, {"guitar", "piano", "violin", "drums"}},
    {{"washing", "wiping", "scrubbing", "vacuuming"}, {"floor", "windows", "dishes", "carpet"}},
    {{"planting", "watering", "trimming", "digging"}, {"flowers", "hedge", "lawn", "tree"}},
    {{"lifting", "holding", "swinging", "lowering"}, {"weights", "barbell", "kettlebell", "dumbbells"}},
    {{"brushing", "cutting", "braiding", "combing"}, {"hair", "beard", "wig", "bangs"}},
    {{"painting", "carving", "knitting", "sewing"}, {"canvas", "wood", "scarf", "fabric"}},
    {{"rowing", "paddling", "sailing", "steering"}, {"boat", "kayak", "canoe", "raft"}},
    {{"fixing", "driving", "parking", "polishing"}, {"car", "truck", "bicycle", "motorcycle"}},
    {{"shoveling", "building", "rolling", "packing"}, {"snow", "snowman", "driveway", "snowball"}},
    {{"feeding", "walking", "petting", "bathing"}, {"cat", "puppy", "horse", "rabbit"}},
};

void validate(const SynthConfig& c) {
  if (!c.seed) throw ConfigError("synthetic corpus needs an explicit seed");
  if (c.n_videos < 1) throw ConfigError("n_videos must be >= 1");
  if (!(c.min_duration_sec > 0.0) || c.max_duration_sec < c.min_duration_sec) {
    throw ConfigError("duration range must satisfy 0 < min <= max");
  }
  if (!(c.fps > 0.0) || c.segment_frames < 1) throw ConfigError("fps and segment_frames must be positive");
  if (c.dims < 1) throw ConfigError("feature dims must be >= 1");
  if (c.n_topics < 2 || c.n_topics > TopicGrammar::kMaxTopics) {
    throw ConfigError("n_topics must lie in [2, " + std::to_string(TopicGrammar::kMaxTopics) + "]");
  }
  if (c.min_events < 1 || c.max_events < c.min_events) throw ConfigError("events range must satisfy 1 <= min <= max");
  if (c.length_mixture.empty()) throw ConfigError("length mixture needs at least one component");
  for (const auto& comp : c.length_mixture) {
    if (!(comp.mean > 0.0 && comp.mean <= 1.0) || !(comp.weight > 0.0) || comp.stddev < 0.0) {
      throw ConfigError("length mixture components need mean in (0, 1], weight > 0, stddev >= 0");
    }
  }
  if (c.noise_sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
  if (c.val_fraction < 0.0 || c.val_fraction >= 1.0) throw ConfigError("val_fraction must lie in [0, 1)");
  const double seg_sec = c.segment_frames / c.fps;
  if (std::floor(c.max_duration_sec / seg_sec) < std::ceil(c.min_duration_sec / seg_sec)) {
    throw ConfigError("duration range contains no whole number of segments");
  }
}

int pick_component(const std::vector<LengthComponent>& mix, Rng& rng) {
  double total = 0.0;
  for (const auto& c : mix) total += c.weight;
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k < mix.size(); ++k) {
    u -= mix[k].weight;
    if (u < 0.0) return static_cast<int>(k);
  }
  return static_cast<int>(mix.size()) - 1;
}

double draw_proportion(const LengthComponent& c, Rng& rng) {
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.normal(c.mean, c.stddev);
    if (p > 0.0 && p <= 1.0) return p;
  }
  return c.mean;
}

Eigen::VectorXd normal_vector(int d, Rng& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace

TopicGrammar::TopicGrammar(int n_topics) {
  if (n_topics < 1 || n_topics > kMaxTopics) throw ConfigError("grammar supports 1.." + std::to_string(kMaxTopics) + " topics");
  for (int t = 0; t < n_topics; ++t) {
    verbs_.emplace_back(std::begin(kLexicons[t].verbs), std::end(kLexicons[t].verbs));
    objects_.emplace_back(std::begin(kLexicons[t].objects), std::end(kLexicons[t].objects));
  }
}

std::string TopicGrammar::sample(int topic, Rng& rng) const {
  const auto& verbs = verbs_.at(static_cast<std::size_t>(topic));
  const auto& objects = objects_.at(static_cast<std::size_t>(topic));
  std::string s = "a ";
  s += kSubjects[rng.index(std::size(kSubjects))];
  s += " is ";
  s += verbs[rng.index(verbs.size())];
  s += " the ";
  s += objects[rng.index(objects.size())];
  return s;
}

std::set<std::string> TopicGrammar::terminals(int topic) const {
  std::set<std::string> out{"a", "is", "the"};
  for (const char* s : kSubjects) out.insert(s);
  for (const auto& v : verbs_.at(static_cast<std::size_t>(topic))) out.insert(v);
  for (const auto& o : objects_.at(static_cast<std::size_t>(topic))) out.insert(o);
  return out;
}

std::set<std::string> TopicGrammar::all_terminals() const {
  std::set<std::string> out;
  for (int t = 0; t < n_topics(); ++t) {
    const auto s = terminals(t);
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::vector<std::string> TopicGrammar::surfaces(int topic) const {
  std::vector<std::string> out;
  for (const char* subj : kSubjects) {
    for (const auto& v : verbs_.at(static_cast<std::size_t>(topic))) {
      for (const auto& o : objects_.at(static_cast<std::size_t>(topic))) {
        out.push_back(std::string("a ") + subj + " is " + v + " the " + o);
      }
    }
  }
  return out;
}

SynthCorpus generate(const SynthConfig& config) {
  validate(config);
  const std::uint64_t seed = *config.seed;
  const TopicGrammar grammar(config.n_topics);
  const double seg_sec = config.segment_frames / config.fps;
  const auto min_segs = static_cast<long long>(std::ceil(config.min_duration_sec / seg_sec - 1e-9));
  const auto max_segs = static_cast<long long>(std::floor(config.max_duration_sec / seg_sec + 1e-9));

  SynthCorpus corpus;
  Rng proto_rng(seed, 0);
  for (int t = 0; t < config.n_topics; ++t) corpus.topic_prototypes.push_back(normal_vector(config.dims, proto_rng));

  const int n_val = static_cast<int>(std::lround(config.val_fraction * config.n_videos));
  const int n_train = config.n_videos - n_val;

  for (int vi = 0; vi < config.n_videos; ++vi) {
    Rng rng(seed, static_cast<std::uint64_t>(vi) + 1);
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "v_%05d", vi);
    const std::string video_id = id_buf;

    const auto n_seg = static_cast<std::size_t>(rng.integer(min_segs, max_segs));
    const std::int64_t n_frames = static_cast<std::int64_t>(n_seg) * config.segment_frames;
    const VideoMeta meta =
        VideoMeta::make(video_id, static_cast<double>(n_frames) / config.fps, config.fps, n_frames, config.segment_frames);

    // Event lengths in segments; retried with fewer events until they fit
    // with one background segment between neighbours.
    int n_events = static_cast<int>(rng.integer(config.min_events, config.max_events));
    std::vector<std::size_t> lengths;
    std::vector<int> components;
    bool fits = false;
    for (int attempt = 0; attempt < 100 && !fits; ++attempt) {
      lengths.clear();
      components.clear();
      std::size_t total = 0;
      for (int e = 0; e < n_events; ++e) {
        const int comp = pick_component(config.length_mixture, rng);
        const double p = draw_proportion(config.length_mixture[static_cast<std::size_t>(comp)], rng);
        const auto len = static_cast<std::size_t>(
            std::clamp<long long>(std::llround(p * static_cast<double>(n_seg)), 1, static_cast<long long>(n_seg)));
        lengths.push_back(len);
        components.push_back(comp);
        total += len;
      }
      fits = total + static_cast<std::size_t>(n_events - 1) <= n_seg;
      if (!fits) n_events = std::max(1, n_events - 1);
    }
    if (!fits) throw DataError("video " + video_id + ": could not pack events after 100 retries");

    std::size_t used = static_cast<std::size_t>(n_events - 1);
    for (auto l : lengths) used += l;
    std::vector<std::size_t> gaps(static_cast<std::size_t>(n_events) + 1, 0);
    for (std::size_t f = used; f < n_seg; ++f) ++gaps[rng.index(gaps.size())];

    const Eigen::VectorXd background = normal_vector(config.dims, rng);
    std::vector<int> row_topic(n_seg, -1);
    ManifestEntry entry;
    entry.meta = meta;
    entry.feature_file = "features/" + video_id + ".segf";
    std::size_t cursor = gaps[0];
    for (int e = 0; e < n_events; ++e) {
      const auto k = static_cast<std::size_t>(e);
      const int topic = static_cast<int>(rng.index(static_cast<std::size_t>(config.n_topics)));
      for (std::size_t s = cursor; s < cursor + lengths[k]; ++s) row_topic[s] = topic;
      entry.events.push_back(Event{Interval(static_cast<double>(cursor) * seg_sec,
                                            static_cast<double>(cursor + lengths[k]) * seg_sec),
                                   grammar.sample(topic, rng), topic});
      corpus.events.push_back(SynthEventInfo{video_id, components[k],
                                             static_cast<double>(lengths[k]) / static_cast<double>(n_seg), topic});
      cursor += lengths[k] + 1 + gaps[k + 1];
    }

    FeatureSequence seq;
    seq.video_id = video_id;
    seq.data.resize(static_cast<Eigen::Index>(n_seg), config.dims);
    for (std::size_t s = 0; s < n_seg; ++s) {
      const Eigen::VectorXd& base =
          row_topic[s] < 0 ? background : corpus.topic_prototypes[static_cast<std::size_t>(row_topic[s])];
      for (int d = 0; d < config.dims; ++d) {
        const double noise = config.noise_sigma > 0.0 ? config.noise_sigma * rng.normal() : 0.0;
        seq.data(static_cast<Eigen::Index>(s), d) = static_cast<float>(base(d) + noise);
      }
    }
    corpus.features.emplace(video_id, std::move(seq));
    (vi < n_train ? corpus.train : corpus.val).entries.push_back(std::move(entry));
  }
  return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  for (const auto* m : {&corpus.train, &corpus.val}) {
    for (const auto& e : m->entries) write_features(corpus.features.at(e.meta.video_id), dir / e.feature_file);
  }
  write_manifest(corpus.train, dir / "train.json");
  write_manifest(corpus.val, dir / "val.json");
}

}  // namespace densecap
