#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tokencore/tokencore.hpp"

using namespace tokencore;

namespace {

FloatMatrix gaussian(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  FloatMatrix m(rows, dim);
  for (auto& v : m.values()) v = static_cast<float>(rng.normal());
  return m;
}

void BM_ExactScore(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bank = MemoryBank::from_vectors(gaussian(n, 64, 1), {"bench", PoolingMode::kMax}, 0);
  const auto queries = gaussian(256, 64, 2);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bank.score_exact(queries.row(q++ % queries.rows())));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExactScore)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_AnnScore(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto bank = MemoryBank::from_vectors(gaussian(n, 64, 1), {"bench", PoolingMode::kMax}, 0);
  AnnParams params;
  params.enabled = true;
  params.probe_count = 100;
  bank.build_ann_index(params);
  const auto queries = gaussian(256, 64, 2);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bank.score_approximate(queries.row(q++ % queries.rows())));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AnnScore)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_HnswBuild(benchmark::State& state) {
  const auto data = gaussian(static_cast<std::size_t>(state.range(0)), 64, 3);
  for (auto _ : state) {
    HnswIndex index(data, {});
    benchmark::DoNotOptimize(index.max_level());
  }
}
BENCHMARK(BM_HnswBuild)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_HashEmbed(benchmark::State& state) {
  const auto words = make_vocabulary({}, 4);
  const HashEmbedConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hash_embed_word(words[i++ % words.size()], cfg));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HashEmbed);

void BM_Auroc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<std::uint8_t> labels(n);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = rng.below(10) == 0 || i == 0;
    scores[i] = rng.uniform01() + labels[i];
  }
  labels[1] = 0;
  for (auto _ : state) benchmark::DoNotOptimize(auroc(labels, scores));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Auroc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
