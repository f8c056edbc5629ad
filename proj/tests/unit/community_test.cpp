#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../oracles/oracles.hpp"
#include "pathnet/community.hpp"
#include "pathnet/error.hpp"

using namespace pathnet;

namespace {

std::vector<std::pair<int, int>> clique(int first, int size) {
  std::vector<std::pair<int, int>> edges;
  for (int a = first; a < first + size; ++a)
    for (int b = a + 1; b < first + size; ++b) edges.emplace_back(a, b);
  return edges;
}

LabeledGraph two_cliques(int a, int b, const std::vector<std::pair<int, int>>& bridges) {
  auto edges = clique(0, a);
  const auto second = clique(a, b);
  edges.insert(edges.end(), second.begin(), second.end());
  edges.insert(edges.end(), bridges.begin(), bridges.end());
  return oracle::from_edges(a + b, false, edges);
}

LabeledGraph two_k4_bridge() { return two_cliques(4, 4, {{3, 4}}); }

std::vector<std::uint32_t> halves(int a, int b) {
  std::vector<std::uint32_t> m(a + b, 0);
  std::fill(m.begin() + a, m.end(), 1);
  return m;
}

void expect_valid(const LabeledGraph& g, const Partition& p) {
  ASSERT_EQ(p.membership.size(), g.node_count());
  EXPECT_EQ(std::accumulate(p.sizes.begin(), p.sizes.end(), std::size_t{0}), g.node_count());
  std::uint32_t next = 0;
  for (auto c : p.membership) {
    EXPECT_LE(c, next);
    if (c == next) ++next;
  }
  EXPECT_EQ(next, p.count());
  const auto comps = connected_components(g);
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (p.membership[u] == p.membership[v]) EXPECT_EQ(comps.component[u], comps.component[v]);
  EXPECT_NEAR(p.modularity, oracle::modularity(oracle::dense(g), p.membership), 1e-9);
}

}  // namespace

TEST(Modularity, SingleCommunityIsZero) {
  const auto g = two_k4_bridge();
  EXPECT_EQ(modularity(g, std::vector<std::uint32_t>(8, 0)), 0.0);
}

TEST(Modularity, DisjointTrianglesIsHalf) {
  const auto g = two_cliques(3, 3, {});
  EXPECT_EQ(modularity(g, halves(3, 3)), 0.5);
}

TEST(Modularity, MatchesDirectFormula) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 7, 0.4, false);
    if (g.edge_count() == 0) continue;
    std::uniform_int_distribution<std::uint32_t> label(0, 3);
    std::vector<std::uint32_t> m(7);
    for (auto& x : m) x = label(rng);
    EXPECT_NEAR(modularity(g, m), oracle::modularity(oracle::dense(g), m), 1e-9);
    const auto p = make_partition(g, m);
    EXPECT_EQ(p.modularity, modularity(g, m));
  }
}

TEST(Modularity, Errors) {
  GraphBuilder b(false);
  b.intern("a");
  const auto lonely = std::move(b).build();
  EXPECT_THROW(modularity(lonely, std::vector<std::uint32_t>{0}), InvalidInput);
  const auto g = two_k4_bridge();
  EXPECT_THROW(modularity(g, std::vector<std::uint32_t>{0, 1}), ContractViolation);
  const auto d = oracle::from_edges(2, true, {{0, 1}});
  EXPECT_THROW(modularity(d, std::vector<std::uint32_t>{0, 0}), ContractViolation);
  EXPECT_THROW(fastgreedy(d), ContractViolation);
}

TEST(MakePartition, RenumbersBySmallestMember) {
  const auto p = make_partition(two_k4_bridge(), std::vector<std::uint32_t>{9, 9, 9, 9, 2, 2, 2, 2});
  EXPECT_EQ(p.membership, halves(4, 4));
  EXPECT_EQ(p.sizes, (std::vector<std::size_t>{4, 4}));
}

TEST(Fastgreedy, TwoK4RecoveredAndOptimal) {
  const auto g = two_k4_bridge();
  const auto p = fastgreedy(g);
  expect_valid(g, p);
  EXPECT_EQ(p.membership, halves(4, 4));
  EXPECT_NEAR(p.modularity, oracle::best_modularity(oracle::dense(g)), 1e-12);
}

TEST(Fastgreedy, TriangleAndDisjointTriangles) {
  const auto tri = two_cliques(3, 0, {});
  EXPECT_EQ(fastgreedy(tri).count(), 1u);
  const auto pair = two_cliques(3, 3, {});
  const auto p = fastgreedy(pair);
  EXPECT_EQ(p.membership, halves(3, 3));
  EXPECT_EQ(p.modularity, 0.5);
}

TEST(Fastgreedy, EdgelessIsInvalid) {
  GraphBuilder b(false);
  b.intern("a");
  b.intern("b");
  EXPECT_THROW(fastgreedy(std::move(b).build()), InvalidInput);
}

TEST(Walktrap, TwoK4RecoveredAtThreeSteps) {
  const auto g = two_k4_bridge();
  for (std::size_t steps : {3u, 10u}) {
    const auto p = walktrap(g, {.steps = steps});
    expect_valid(g, p);
    EXPECT_EQ(p.membership, halves(4, 4));
  }
}

TEST(Walktrap, CompleteGraphIsOneCommunity) {
  const auto k5 = two_cliques(5, 0, {});
  EXPECT_EQ(walktrap(k5).count(), 1u);
}

TEST(Walktrap, DistanceIsADissimilarity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(rng, 9, 0.3, false, true);
    for (NodeId u = 0; u < 9; ++u) {
      EXPECT_EQ(walktrap_distance(g, u, u, 4), 0.0);
      for (NodeId v = u + 1; v < 9; ++v) {
        const double r = walktrap_distance(g, u, v, 4);
        EXPECT_GE(r, 0.0);
        EXPECT_EQ(r, walktrap_distance(g, v, u, 4));
      }
    }
  }
}

TEST(Walktrap, DistanceMatchesDenseWalk) {
  std::mt19937_64 rng(9);
  const auto g = oracle::random_graph(rng, 8, 0.35, false, true);
  const auto d = oracle::dense(g);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(8, 8);
  Eigen::VectorXd deg(8);
  for (int u = 0; u < 8; ++u) {
    deg[u] = 1;
    for (int v = 0; v < 8; ++v) deg[u] += d.edge(u, v) ? 1 : 0;
  }
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v)
      if (d.edge(u, v)) p(u, v) = 1.0;
  for (int u = 0; u < 8; ++u) p.row(u) /= deg[u];
  Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(8, 8);
  for (int s = 0; s < 5; ++s) pt = pt * p;
  for (NodeId u = 0; u < 8; ++u)
    for (NodeId v = 0; v < 8; ++v) {
      const double want = std::sqrt(((pt.row(u) - pt.row(v)).array().square() / deg.transpose().array()).sum());
      EXPECT_NEAR(walktrap_distance(g, u, v, 5), want, 1e-12);
    }
}

TEST(Walktrap, MemoryBudgetIsEnforced) {
  const auto g = two_k4_bridge();
  EXPECT_THROW(walktrap(g, {.steps = 3, .memory_budget_bytes = 64}), InvalidInput);
}

TEST(LeadingEigenvector, DisjointTrianglesSplit) {
  const auto g = two_cliques(3, 3, {});
  const auto p = leading_eigenvector(g);
  EXPECT_EQ(p.membership, halves(3, 3));
}

TEST(LeadingEigenvector, K6IsIndivisible) {
  EXPECT_EQ(leading_eigenvector(two_cliques(6, 0, {})).count(), 1u);
}

TEST(LeadingEigenvector, TwoK4MatchesDenseSignPattern) {
  const auto g = two_k4_bridge();
  const auto p = leading_eigenvector(g);
  expect_valid(g, p);
  const auto d = oracle::dense(g);
  Eigen::MatrixXd b(8, 8);
  std::vector<double> k(8, 0.0);
  double two_m = 0;
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      k[u] += d.edge(u, v) ? 1 : 0;
      two_m += d.edge(u, v) ? 1 : 0;
    }
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) b(u, v) = (d.edge(u, v) ? 1.0 : 0.0) - k[u] * k[v] / two_m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  const Eigen::VectorXd lead = solver.eigenvectors().col(7);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) EXPECT_EQ(p.membership[u] == p.membership[v], (lead[u] > 0) == (lead[v] > 0));
}

TEST(LeadingEigenvector, IterationCapNamesCommunity) {
  std::mt19937_64 rng(13);
  const auto g = oracle::random_graph(rng, 40, 0.15, false, true);
  try {
    leading_eigenvector(g, {.tolerance = 1e-15, .max_iterations = 1});
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_NE(std::string(e.what()).find("community"), std::string::npos);
  }
}

// Recursive bisection with a dense eigensolver on every community.
double dense_bisection_modularity(const LabeledGraph& g) {
  const auto d = oracle::dense(g);
  const int n = static_cast<int>(g.node_count());
  std::vector<double> k(n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) k[u] += d.edge(u, v) ? 1 : 0;
  const double two_m = std::accumulate(k.begin(), k.end(), 0.0);
  std::vector<std::uint32_t> labels(n, 0);
  std::uint32_t next = 0;
  std::vector<std::vector<int>> pending(1, std::vector<int>(n));
  std::iota(pending[0].begin(), pending[0].end(), 0);
  while (!pending.empty()) {
    const auto nodes = pending.back();
    pending.pop_back();
    const auto size = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd b(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index j = 0; j < size; ++j)
        b(i, j) = (d.edge(nodes[i], nodes[j]) ? 1.0 : 0.0) - k[nodes[i]] * k[nodes[j]] / two_m;
    const Eigen::VectorXd row_sums = b.rowwise().sum();
    b -= row_sums.asDiagonal();
    std::vector<int> pos, neg;
    if (size > 1) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
      const Eigen::VectorXd lead = solver.eigenvectors().col(size - 1);
      Eigen::VectorXd s(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        s[i] = lead[i] > 0 ? 1.0 : -1.0;
        (lead[i] > 0 ? pos : neg).push_back(nodes[i]);
      }
      if (solver.eigenvalues()[size - 1] <= 1e-9 || s.dot(b * s) <= 1e-9) pos.clear();
    }
    if (pos.empty() || neg.empty()) {
      for (int v : nodes) labels[v] = next;
      ++next;
      continue;
    }
    pending.push_back(pos);
    pending.push_back(neg);
  }
  return modularity(g, labels);
}

TEST(LeadingEigenvector, ConvergesOnTreesWithClusteredSpectra) {
  // Preferential-attachment trees have many nearly equal top eigenvalues in
  // their sub-communities, which stalls plain power iteration.
  for (std::uint32_t seed : {3u, 4u, 7u}) {
    std::mt19937 rng(seed);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> ends = {0};
    for (int v = 1; v < 200; ++v) {
      const int u = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
      edges.emplace_back(u, v);
      ends.insert(ends.end(), {u, v});
    }
    const auto g = oracle::from_edges(200, false, edges);
    const auto p = leading_eigenvector(g);
    expect_valid(g, p);
    EXPECT_NEAR(p.modularity, dense_bisection_modularity(g), 0.02) << "seed " << seed;
  }
}

TEST(Detectors, NearOptimalOnTwoCliqueFamily) {
  for (int a = 3; a <= 5; ++a)
    for (int b = 3; a + b <= 8; ++b)
      for (int bridges = 0; bridges <= 2; ++bridges) {
        std::vector<std::pair<int, int>> links;
        for (int i = 0; i < bridges; ++i) links.emplace_back(i, a + i);
        const auto g = two_cliques(a, b, links);
        const double best = oracle::best_modularity(oracle::dense(g));
        for (const auto& p : {fastgreedy(g), walktrap(g), walktrap(g, {.steps = 3}), leading_eigenvector(g)}) {
          expect_valid(g, p);
          EXPECT_GE(p.modularity, 0.9 * best) << a << "+" << b << " with " << bridges << " bridges";
        }
      }
}

TEST(Detectors, ValidOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(rng, 25, 0.12, false);
    if (g.edge_count() == 0) continue;
    for (const auto& p : {fastgreedy(g), walktrap(g), leading_eigenvector(g)}) {
      expect_valid(g, p);
      EXPECT_GE(p.modularity, 0.0);
    }
  }
}

TEST(MembershipReport, RowsAndSizes) {
  const auto g = two_cliques(3, 3, {});
  const auto p = fastgreedy(g);
  FeedList feed;
  feed.entries = {{"A", {"v0", "v1"}}, {"B", {"v4", "ghost@x.org"}}};
  const auto r = membership_report(p, g, feed);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].community, r.rows[1].community);
  EXPECT_EQ(r.rows[0].size, std::size_t{3});
  EXPECT_NE(r.rows[2].community, r.rows[0].community);
  EXPECT_FALSE(r.rows[3].community);
  EXPECT_EQ(r.community_count, 2u);

  const auto star = oracle::from_edges(6, false, {{0, 1}, {0, 2}, {3, 4}});
  const auto singleton = make_partition(star, std::vector<std::uint32_t>{0, 0, 0, 1, 1, 2});
  FeedList lone;
  lone.entries = {{"C", {"v5"}}};
  EXPECT_EQ(membership_report(singleton, star, lone).rows[0].size, std::size_t{1});
}
