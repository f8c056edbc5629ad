#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "../oracles/oracles.hpp"
#include "pathnet/error.hpp"
#include "pathnet/graph.hpp"

using namespace pathnet;

namespace {

LabeledGraph triangle_pair() {
  return oracle::from_edges(6, false, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

}  // namespace

TEST(GraphBuilder, InternIsIdempotent) {
  GraphBuilder b(false);
  EXPECT_EQ(b.intern("a@x.com"), b.intern("a@x.com"));
  EXPECT_EQ(b.node_count(), 1u);
}

TEST(GraphBuilder, InternFollowsFirstAppearance) {
  GraphBuilder b(false);
  EXPECT_EQ(b.intern("a@x.com"), 0u);
  EXPECT_EQ(b.intern("b@x.com"), 1u);
  EXPECT_EQ(b.intern("a@x.com"), 0u);
}

TEST(GraphBuilder, InternsCriminalAccountsDistinctly) {
  const std::vector<std::string> accounts = {
      "andrew.fastow@enron.com", "andy.fastow@enron.com", "ben.glisan@enron.com",
      "richard.causey@enron.com", "rick.causey@enron.com", "jeff.skilling@enron.com",
      "kenneth.lay@enron.com",    "michael.kopper@enron.com", "lea.fastow@enron.com",
      "s.yaeger@enron.com",       "rex.shelby@enron.com",     "kevin.hannon@enron.com",
      "a.khan@enron.com"};
  GraphBuilder b(true);
  std::set<NodeId> ids;
  for (const auto& a : accounts) ids.insert(b.intern(a));
  EXPECT_EQ(ids.size(), 13u);
  EXPECT_EQ(*ids.rbegin(), 12u);
}

TEST(GraphBuilder, EmptyLabelRejected) {
  GraphBuilder b(false);
  EXPECT_THROW(b.intern(""), InvalidInput);
}

TEST(GraphBuilder, ParallelEdgesFold) {
  GraphBuilder b(true);
  b.intern("a");
  b.intern("b");
  b.add_edge(0, 1);
  b.add_edge(0, 1);
  const auto g = std::move(b).build();
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(0, 1), 2u);
  EXPECT_EQ(g.weight(1, 0), 0u);
}

TEST(GraphBuilder, SelfLoopsDroppedAndCounted) {
  GraphBuilder b(true);
  b.intern("a");
  b.add_edge(0, 0);
  EXPECT_EQ(b.dropped_self_loops(), 1u);
  EXPECT_EQ(std::move(b).build().edge_count(), 0u);
}

TEST(GraphBuilder, UndirectedFoldsBothOrientations) {
  GraphBuilder b(false);
  b.intern("a");
  b.intern("b");
  b.add_edge(0, 1);
  b.add_edge(1, 0);
  const auto g = std::move(b).build();
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 2}));
  EXPECT_EQ(g.weight(1, 0), 2u);
}

TEST(GraphBuilder, UnknownIdIsContractViolation) {
  GraphBuilder b(false);
  b.intern("a");
  EXPECT_THROW(b.add_edge(0, 3), ContractViolation);
}

TEST(LabeledGraph, NeighbourListsSortedAndLookupsWork) {
  const auto g = oracle::from_edges(4, true, {{2, 0}, {0, 3}, {0, 1}, {3, 0}});
  const auto succ = g.successors(0);
  EXPECT_TRUE(std::is_sorted(succ.begin(), succ.end()));
  EXPECT_EQ(std::vector<NodeId>(succ.begin(), succ.end()), (std::vector<NodeId>{1, 3}));
  const auto pred = g.predecessors(0);
  EXPECT_EQ(std::vector<NodeId>(pred.begin(), pred.end()), (std::vector<NodeId>{2, 3}));
  EXPECT_EQ(g.find("v2"), NodeId{2});
  EXPECT_FALSE(g.find("nope").has_value());
  EXPECT_THROW(g.successors(9), ContractViolation);
  EXPECT_THROW(g.label(9), ContractViolation);
}

TEST(ToUndirected, SumsAntiparallelWeights) {
  const auto d = oracle::from_edges(3, true, {{0, 1}, {1, 0}, {1, 2}});
  const auto u = to_undirected(d);
  EXPECT_FALSE(u.directed());
  ASSERT_EQ(u.edge_count(), 2u);
  EXPECT_EQ(u.edges()[0], (Edge{0, 1, 2}));
  EXPECT_EQ(u.edges()[1], (Edge{1, 2, 1}));
  EXPECT_EQ(std::vector<std::string>(u.labels().begin(), u.labels().end()),
            std::vector<std::string>(d.labels().begin(), d.labels().end()));
}

TEST(ToUndirected, DirectedPathBecomesPath) {
  const auto u = to_undirected(oracle::from_edges(3, true, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(u.has_edge(1, 0));
  EXPECT_TRUE(u.has_edge(2, 1));
  EXPECT_FALSE(u.has_edge(0, 2));
}

TEST(ToUndirected, IdempotentOnUndirected) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = oracle::random_graph(rng, 8, 0.3, true, false, 3);
    const auto once = to_undirected(d);
    const auto twice = to_undirected(once);
    EXPECT_EQ(once.node_count(), d.node_count());
    EXPECT_TRUE(std::ranges::equal(once.edges(), twice.edges()));
  }
}

TEST(Components, TwoTriangles) {
  const auto c = connected_components(triangle_pair());
  ASSERT_EQ(c.count(), 2u);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{3, 3}));
  EXPECT_EQ(c.component, (std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}));
}

TEST(Components, EmptyGraph) {
  EXPECT_EQ(connected_components(LabeledGraph{}).count(), 0u);
}

TEST(Components, StrongNeedsDirected) {
  EXPECT_THROW(connected_components(triangle_pair(), Connectivity::strong), ContractViolation);
}

TEST(Components, MatchTransitiveClosure) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const bool directed = trial % 2 == 0;
    const int n = 1 + trial % 8;
    const auto g = oracle::random_graph(rng, n, 0.2, directed);
    const auto d = oracle::dense(g);
    const auto reach = oracle::transitive_closure(d);
    const auto weak = connected_components(g);
    for (int u = 0; u < n; ++u) {
      const auto members = oracle::weak_component(d, u);
      for (int v = 0; v < n; ++v) {
        const bool same = std::ranges::find(members, v) != members.end();
        EXPECT_EQ(weak.component[u] == weak.component[v], same);
      }
    }
    if (directed) {
      const auto strong = connected_components(g, Connectivity::strong);
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          EXPECT_EQ(strong.component[u] == strong.component[v],
                    u == v || (reach[u][v] && reach[v][u]));
    }
    for (std::size_t c = 1; c < weak.count(); ++c) {
      const auto first = [&](std::uint32_t id) {
        return std::ranges::find(weak.component, id) - weak.component.begin();
      };
      EXPECT_LT(first(c - 1), first(c));
    }
  }
}

TEST(KNeighbourhood, ZeroHopsIsCenterOnly) {
  const auto sub = k_neighbourhood(triangle_pair(), 4, 0);
  EXPECT_EQ(sub.graph.node_count(), 1u);
  EXPECT_EQ(sub.graph.edge_count(), 0u);
  EXPECT_EQ(sub.origin, (std::vector<NodeId>{4}));
}

TEST(KNeighbourhood, StarOneHop) {
  const auto star = oracle::from_edges(4, false, {{0, 1}, {0, 2}, {0, 3}});
  const auto sub = k_neighbourhood(star, 0, 1);
  EXPECT_EQ(sub.graph.node_count(), 4u);
  EXPECT_EQ(sub.graph.edge_count(), 3u);
}

TEST(KNeighbourhood, IgnoresDirectionAndIsMonotone) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng, 10, 0.15, trial % 2 == 0);
    const auto d = oracle::dense(g);
    const NodeId c = static_cast<NodeId>(trial % 10);
    std::vector<NodeId> previous;
    for (std::size_t k = 0; k <= 10; ++k) {
      const auto sub = k_neighbourhood(g, c, k);
      const auto expected = oracle::k_hop_nodes(d, static_cast<int>(c), k);
      EXPECT_EQ(std::set<NodeId>(sub.origin.begin(), sub.origin.end()),
                std::set<NodeId>(expected.begin(), expected.end()));
      EXPECT_TRUE(std::ranges::includes(sub.origin, previous));
      previous = sub.origin;
    }
    const auto whole = oracle::weak_component(d, static_cast<int>(c));
    EXPECT_EQ(previous.size(), whole.size());
  }
}

TEST(KNeighbourhood, UnknownCenter) {
  EXPECT_THROW(k_neighbourhood(triangle_pair(), 42, 1), ContractViolation);
}

TEST(InducedSubgraph, TrianglePair) {
  const std::vector<NodeId> nodes = {0, 1};
  const auto sub = induced_subgraph(triangle_pair(), nodes);
  EXPECT_EQ(sub.graph.edge_count(), 1u);
  EXPECT_EQ(sub.graph.label(1), "v1");
}

TEST(InducedSubgraph, AllNodesIsCopy) {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_graph(rng, 9, 0.4, true, false, 4);
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  const auto sub = induced_subgraph(g, all);
  EXPECT_TRUE(std::ranges::equal(sub.graph.edges(), g.edges()));
  EXPECT_TRUE(std::ranges::equal(sub.graph.labels(), g.labels()));
}

TEST(InducedSubgraph, FilterOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_graph(rng, 10, 0.35, trial % 2 == 1, false, 3);
    std::vector<NodeId> all(10);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<NodeId> pick(all.begin(), all.begin() + 5);
    const auto sub = induced_subgraph(g, pick);
    std::set<std::tuple<std::string, std::string, Weight>> want, got;
    const std::set<NodeId> keep(pick.begin(), pick.end());
    for (const auto& e : g.edges())
      if (keep.contains(e.source) && keep.contains(e.target))
        want.emplace(g.label(e.source), g.label(e.target), e.weight);
    for (const auto& e : sub.graph.edges())
      got.emplace(sub.graph.label(e.source), sub.graph.label(e.target), e.weight);
    EXPECT_EQ(got, want);
    EXPECT_TRUE(std::ranges::is_sorted(sub.origin));
    for (NodeId v : pick) EXPECT_EQ(sub.origin[*sub.local(v)], v);
  }
}

TEST(InducedSubgraph, UnknownNode) {
  const std::vector<NodeId> nodes = {0, 17};
  EXPECT_THROW(induced_subgraph(triangle_pair(), nodes), ContractViolation);
}

TEST(Degree, IsolatedAndStar) {
  GraphBuilder b(false);
  for (int i = 0; i < 6; ++i) b.intern("n" + std::to_string(i));
  for (NodeId leaf = 1; leaf <= 4; ++leaf) b.add_edge(0, leaf, 3);
  const auto g = std::move(b).build();
  EXPECT_EQ(degree(g, 5), 0u);
  EXPECT_EQ(degree(g, 0), 4u);
  EXPECT_THROW(degree(g, 6), ContractViolation);
}

TEST(Degree, DirectedModes) {
  const auto g = oracle::from_edges(3, true, {{0, 1}, {2, 0}, {0, 2}});
  EXPECT_EQ(degree(g, 0, DegreeMode::out), 2u);
  EXPECT_EQ(degree(g, 0, DegreeMode::in), 1u);
  EXPECT_EQ(degree(g, 0, DegreeMode::total), 3u);
}

TEST(Degree, HandshakeAndHistogram) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const bool directed = trial % 2 == 0;
    const auto g = oracle::random_graph(rng, 12, 0.25, directed);
    std::size_t in = 0, out = 0, total = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      in += degree(g, v, DegreeMode::in);
      out += degree(g, v, DegreeMode::out);
      total += degree(g, v);
    }
    if (directed) {
      EXPECT_EQ(in, g.edge_count());
      EXPECT_EQ(out, g.edge_count());
    }
    EXPECT_EQ(total, 2 * g.edge_count());
    EXPECT_DOUBLE_EQ(average_degree(g), 2.0 * g.edge_count() / g.node_count());
    std::size_t nodes = 0, sum = 0;
    for (const auto& [deg, freq] : degree_histogram(g)) {
      nodes += freq;
      sum += deg * freq;
    }
    EXPECT_EQ(nodes, g.node_count());
    EXPECT_EQ(sum, total);
  }
  EXPECT_EQ(average_degree(LabeledGraph{}), 0.0);
}
