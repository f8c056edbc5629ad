#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "../oracles/oracles.hpp"
#include "pathnet/error.hpp"
#include "pathnet/paths.hpp"

using namespace pathnet;

namespace {

LabeledGraph path3() { return oracle::from_edges(3, false, {{0, 1}, {1, 2}}); }

std::vector<NodeId> all_nodes(const LabeledGraph& g) {
  std::vector<NodeId> v(g.node_count());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(Bfs, SameSourceAndTarget) {
  const auto p = bfs_path(path3(), 1, 1);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->nodes, (std::vector<NodeId>{1}));
  EXPECT_EQ(p->length(), 0u);
}

TEST(Bfs, CycleTieBreaksOnSmallestId) {
  // a-b-c-d-a with a=0, b=1, c=2, d=3
  const auto g = oracle::from_edges(4, false, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto p = bfs_path(g, 0, 2);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->nodes, (std::vector<NodeId>{0, 1, 2}));
}

TEST(Bfs, UnreachableAndDirection) {
  const auto g = oracle::from_edges(3, true, {{0, 1}, {1, 2}});
  EXPECT_FALSE(bfs_path(g, 2, 0));
  EXPECT_EQ(bfs_distances(g, 2)[0], kUnreachable);
  EXPECT_EQ(bfs_distances(g, 0)[2], 2u);
  EXPECT_THROW(bfs_distances(g, 7), ContractViolation);
}

TEST(Bfs, MatchesEnumerationAndCanonicalRule) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const auto g = oracle::random_graph(rng, n, 0.3, trial % 2 == 0);
    const auto d = oracle::dense(g);
    const auto fw = oracle::floyd_warshall(d);
    for (int s = 0; s < n; ++s) {
      const auto dist = bfs_distances(g, static_cast<NodeId>(s));
      for (int t = 0; t < n; ++t) {
        const auto paths = oracle::simple_paths(d, s, t);
        std::size_t shortest = paths.empty() ? 0 : paths.front().size();
        for (const auto& p : paths) shortest = std::min(shortest, p.size());
        if (s == t) {
          EXPECT_EQ(dist[t], 0u);
        } else if (paths.empty()) {
          EXPECT_EQ(dist[t], kUnreachable);
          EXPECT_FALSE(bfs_path(g, s, t));
        } else {
          EXPECT_EQ(dist[t], shortest - 1);
          const auto p = bfs_path(g, s, t);
          ASSERT_TRUE(p);
          const auto want = oracle::canonical_path(d, fw, s, t);
          EXPECT_EQ(p->nodes, std::vector<NodeId>(want.begin(), want.end()));
        }
      }
    }
  }
}

TEST(Bfs, AllShortestPathEdges) {
  // 0 -> {1, 2} -> 3, plus a longer detour 0 -> 4 -> 5 -> 3
  const auto g = oracle::from_edges(6, true, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 4}, {4, 5}, {5, 3}});
  const auto edges = all_shortest_path_edges(g, 0, 3);
  EXPECT_EQ(edges, (std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
  EXPECT_TRUE(all_shortest_path_edges(g, 3, 0).empty());
  EXPECT_TRUE(all_shortest_path_edges(g, 3, 3).empty());
}

TEST(DistanceMatrix, PathEnds) {
  const std::vector<NodeId> nodes = {0, 2};
  const auto m = distance_matrix(path3(), nodes);
  EXPECT_EQ(m.values, (std::vector<Distance>{0, 2, 2, 0}));
}

TEST(DistanceMatrix, AcrossComponents) {
  const auto g = oracle::from_edges(4, false, {{0, 1}, {2, 3}});
  const std::vector<NodeId> nodes = {0, 3};
  const auto m = distance_matrix(g, nodes);
  EXPECT_EQ(m.at(0, 1), kUnreachable);
  EXPECT_EQ(m.at(1, 0), kUnreachable);
  const std::vector<NodeId> twice = {0, 0};
  EXPECT_THROW(distance_matrix(g, twice), InvalidInput);
}

TEST(DistanceMatrix, MetricProperties) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const bool directed = trial % 2 == 0;
    const auto g = oracle::random_graph(rng, 12, 0.2, directed);
    const auto nodes = all_nodes(g);
    const auto m = distance_matrix(g, nodes, 3);
    EXPECT_EQ(m.values, distance_matrix(g, nodes, 1).values);
    for (NodeId u = 0; u < 12; ++u)
      for (NodeId v = 0; v < 12; ++v) {
        if (!directed) EXPECT_EQ(m.at(u, v), m.at(v, u));
        if (const auto p = bfs_path(g, u, v)) EXPECT_EQ(p->length(), m.at(u, v));
        for (NodeId w = 0; w < 12; ++w)
          if (m.at(u, v) != kUnreachable && m.at(v, w) != kUnreachable)
            EXPECT_LE(m.at(u, w), m.at(u, v) + m.at(v, w));
      }
  }
}

TEST(DistanceMatrix, AddingAnEdgeNeverLengthens) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const bool directed = trial % 2 == 0;
    const auto g = oracle::random_graph(rng, 10, 0.15, directed);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : g.edges()) edges.emplace_back(e.source, e.target);
    std::uniform_int_distribution<int> pick(0, 9);
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    edges.emplace_back(a, b);
    const auto h = oracle::from_edges(10, directed, edges);
    const auto nodes = all_nodes(g);
    const auto before = distance_matrix(g, nodes), after = distance_matrix(h, nodes);
    for (std::size_t i = 0; i < before.values.size(); ++i) EXPECT_LE(after.values[i], before.values[i]);
  }
}

TEST(AveragePathLength, PathAndComplete) {
  EXPECT_EQ(average_path_length(path3()), 4.0 / 3.0);
  const auto k4 = oracle::from_edges(4, false, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(average_path_length(k4), 1.0);
}

TEST(AveragePathLength, ExcludesUnreachablePairs) {
  const auto g = oracle::from_edges(5, false, {{0, 1}, {1, 2}, {3, 4}});
  EXPECT_DOUBLE_EQ(average_path_length(g), (1 + 1 + 2 + 1) / 4.0);
  const auto directed = oracle::from_edges(3, true, {{0, 1}, {1, 2}});
  EXPECT_DOUBLE_EQ(average_path_length(directed), (1 + 1 + 2) / 3.0);
}

TEST(AveragePathLength, NoPairsIsInvalid) {
  GraphBuilder b(false);
  b.intern("a");
  b.intern("b");
  EXPECT_THROW(average_path_length(std::move(b).build()), InvalidInput);
}

TEST(AveragePathLength, MatchesFloydWarshallAndThreads) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(rng, 15, 0.15, trial % 2 == 0);
    const auto fw = oracle::floyd_warshall(oracle::dense(g));
    long long sum = 0, pairs = 0;
    for (int u = 0; u < 15; ++u)
      for (int v = 0; v < 15; ++v)
        if (u != v && fw[u][v] < oracle::kInf) {
          sum += fw[u][v];
          ++pairs;
        }
    if (pairs == 0) continue;
    EXPECT_DOUBLE_EQ(average_path_length(g), static_cast<double>(sum) / pairs);
    EXPECT_EQ(average_path_length(g, 4), average_path_length(g, 1));
  }
}

TEST(AveragePathLength, SampledEstimateIsSeeded) {
  std::mt19937_64 rng(37);
  const auto g = oracle::random_graph(rng, 200, 0.03, false, true);
  const double a = sampled_average_path_length(g, 50, 9);
  EXPECT_EQ(a, sampled_average_path_length(g, 50, 9));
  EXPECT_NEAR(a, average_path_length(g), 0.5);
  EXPECT_NEAR(sampled_average_path_length(g, 20000, 1), average_path_length(g), 0.02);
}

TEST(MeanSubsetDistance, PathEndsAndDisconnected) {
  const std::vector<NodeId> ends = {0, 2};
  EXPECT_EQ(mean_subset_distance(path3(), ends), 2.0);
  const auto g = oracle::from_edges(4, false, {{0, 1}, {2, 3}});
  const std::vector<NodeId> apart = {0, 3};
  EXPECT_THROW(mean_subset_distance(g, apart), InvalidInput);
}
