#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "pathnet/centrality.hpp"
#include "pathnet/community.hpp"
#include "pathnet/feed.hpp"
#include "pathnet/graph.hpp"
#include "pathnet/paths.hpp"
#include "pathnet/spnsa.hpp"

using namespace pathnet;

namespace {

// Preferential attachment: each new node links to `m` endpoints drawn from
// the running edge-endpoint list, which gives the heavy-tailed degrees of
// a mail network.
LabeledGraph synthetic(std::size_t n, std::size_t m = 3, std::uint32_t seed = 7) {
  std::mt19937 rng(seed);
  GraphBuilder b(false);
  for (std::size_t i = 0; i < n; ++i) b.intern("u" + std::to_string(i) + "@example.com");
  std::vector<NodeId> ends;
  for (NodeId v = 1; v <= m; ++v) {
    b.add_edge(0, v);
    ends.insert(ends.end(), {0, v});
  }
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    for (std::size_t k = 0; k < m; ++k) {
      const NodeId u = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
      b.add_edge(u, v);
      ends.insert(ends.end(), {u, v});
    }
  }
  return std::move(b).build();
}

FeedList every_kth(const LabeledGraph& g, std::size_t k) {
  FeedList feed;
  for (NodeId v = 0; v < g.node_count(); v += static_cast<NodeId>(k))
    feed.entries.push_back({"p" + std::to_string(v), {g.label(v)}});
  return feed;
}

void BM_Betweenness(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_Eigenvector(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvector(g));
}
BENCHMARK(BM_Eigenvector)->RangeMultiplier(4)->Range(1024, 16384);

void BM_AveragePathLength(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(average_path_length(g));
}
BENCHMARK(BM_AveragePathLength)->RangeMultiplier(2)->Range(256, 2048);

void BM_SampledAveragePathLength(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sampled_average_path_length(g, 64, 1));
}
BENCHMARK(BM_SampledAveragePathLength)->RangeMultiplier(4)->Range(4096, 65536);

void BM_Spnsa(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  const auto feed = match_feed(g, every_kth(g, 50));
  for (auto _ : state) benchmark::DoNotOptimize(spnsa(g, feed));
}
BENCHMARK(BM_Spnsa)->RangeMultiplier(2)->Range(256, 2048);

void BM_Fastgreedy(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fastgreedy(g));
}
BENCHMARK(BM_Fastgreedy)->RangeMultiplier(2)->Range(256, 4096);

void BM_Walktrap(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(walktrap(g, {.steps = 4}));
}
BENCHMARK(BM_Walktrap)->RangeMultiplier(2)->Range(128, 1024);

void BM_LeadingEigenvector(benchmark::State& state) {
  const auto g = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(leading_eigenvector(g));
}
BENCHMARK(BM_LeadingEigenvector)->RangeMultiplier(2)->Range(128, 1024);

}  // namespace
BENCHMARK_MAIN();
