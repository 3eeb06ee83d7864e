#include <benchmark/benchmark.h>

#include "densecap/caption.hpp"
#include "densecap/metrics.hpp"
#include "densecap/proposals.hpp"
#include "densecap/ranker.hpp"
#include "densecap/rng.hpp"
#include "densecap/timeline.hpp"

using namespace densecap;

namespace {

void BM_Tiou(benchmark::State& state) {
  Rng rng(1);
  std::vector<Interval> a, b;
  for (int i = 0; i < 1024; ++i) {
    const double s0 = rng.uniform(0, 100), s1 = rng.uniform(0, 100);
    a.emplace_back(s0, s0 + rng.uniform(0, 30));
    b.emplace_back(s1, s1 + rng.uniform(0, 30));
  }
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += tiou(a[i], b[i]);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Tiou);

void BM_Candidates(benchmark::State& state) {
  std::vector<double> centers;
  for (int k = 0; k < 20; ++k) centers.push_back(0.02 + 0.049 * k);
  const WindowBank bank{centers};
  const auto meta = VideoMeta::make("v", static_cast<double>(state.range(0)), 64.0, state.range(0) * 64);
  for (auto _ : state) benchmark::DoNotOptimize(generate_candidates(meta, bank));
}
BENCHMARK(BM_Candidates)->Arg(30)->Arg(120);

void BM_RankerForward(benchmark::State& state) {
  Rng rng(2);
  const auto m = RankerModel::random(32, 128, rng);
  Eigen::VectorXd x(m.input_size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(ranker_forward(m, x));
}
BENCHMARK(BM_RankerForward);

void BM_BeamSearch(benchmark::State& state) {
  Rng rng(3);
  DecoderShape shape;
  shape.variant = static_cast<DecoderVariant>(state.range(0));
  shape.vocab = 60;
  shape.dims = 32;
  shape.n_topics = shape.variant == DecoderVariant::kTopic ? 8 : 0;
  const std::vector<DecoderModel> models(static_cast<std::size_t>(state.range(1)), DecoderModel::random(shape, rng));
  Eigen::MatrixXd rows(20, 32);
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.normal();
  const auto in = CaptionInput::from_rows(rows);
  for (auto _ : state) benchmark::DoNotOptimize(beam_search(models, in, 5, 20));
}
BENCHMARK(BM_BeamSearch)->Args({0, 1})->Args({1, 1})->Args({2, 1})->Args({0, 3})->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
  const Tokens cand = tokenize("a man is chopping the onion on the board");
  const std::vector<Tokens> refs = {tokenize("a man is cutting the onion"), tokenize("a person chops an onion")};
  std::vector<std::vector<Tokens>> docs;
  for (int i = 0; i < 200; ++i) docs.push_back({tokenize("a person is doing thing " + std::to_string(i % 37))});
  docs.push_back(refs);
  const CiderCorpus corpus(docs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bleu4(cand, refs));
    benchmark::DoNotOptimize(meteor_lite(cand, refs));
    benchmark::DoNotOptimize(cider(cand, refs, corpus));
  }
}
BENCHMARK(BM_Metrics);

}  // namespace

BENCHMARK_MAIN();
