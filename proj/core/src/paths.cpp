#include "pathnet/paths.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "parallel.hpp"
#include "pathnet/error.hpp"

namespace pathnet {

namespace {

void require(const LabeledGraph& g, NodeId v) {
  if (!g.contains(v)) throw ContractViolation("unknown node id " + std::to_string(v));
}

// Reverse BFS: distance from every node to `target`.
std::vector<Distance> distances_to(const LabeledGraph& g, NodeId target) {
  std::vector<Distance> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue{target};
  dist[target] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId u : g.predecessors(v)) {
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

struct PairSums {
  std::uint64_t total = 0;
  std::uint64_t pairs = 0;
};

PairSums sum_from(const LabeledGraph& g, NodeId source, std::vector<Distance>& dist,
                  std::vector<NodeId>& queue) {
  PairSums sums;
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.successors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        sums.total += dist[w];
        ++sums.pairs;
        queue.push_back(w);
      }
    }
  }
  for (NodeId v : queue) dist[v] = kUnreachable;
  return sums;
}

}  // namespace

std::vector<Distance> bfs_distances(const LabeledGraph& g, NodeId source) {
  require(g, source);
  std::vector<Distance> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.successors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::optional<Path> ShortestPathTree::path_to(NodeId target) const {
  if (target >= distance.size()) throw ContractViolation("unknown node id " + std::to_string(target));
  if (distance[target] == kUnreachable) return std::nullopt;
  Path path;
  path.nodes.resize(distance[target] + 1);
  NodeId v = target;
  for (std::size_t i = path.nodes.size(); i-- > 0;) {
    path.nodes[i] = v;
    v = parent[v];
  }
  return path;
}

ShortestPathTree shortest_path_tree(const LabeledGraph& g, NodeId source) {
  require(g, source);
  ShortestPathTree tree;
  tree.source = source;
  tree.distance.assign(g.node_count(), kUnreachable);
  tree.parent.assign(g.node_count(), source);
  std::vector<NodeId> queue{source};
  tree.distance[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId w : g.successors(u)) {
      if (tree.distance[w] == kUnreachable) {
        tree.distance[w] = tree.distance[u] + 1;
        tree.parent[w] = u;
        queue.push_back(w);
      } else if (tree.distance[w] == tree.distance[u] + 1 && u < tree.parent[w]) {
        tree.parent[w] = u;
      }
    }
  }
  return tree;
}

std::optional<Path> bfs_path(const LabeledGraph& g, NodeId source, NodeId target) {
  require(g, target);
  return shortest_path_tree(g, source).path_to(target);
}

std::vector<std::pair<NodeId, NodeId>> all_shortest_path_edges(const LabeledGraph& g,
                                                                NodeId source, NodeId target) {
  require(g, target);
  const auto from_source = bfs_distances(g, source);
  std::vector<std::pair<NodeId, NodeId>> edges;
  const Distance total = from_source[target];
  if (total == kUnreachable || total == 0) return edges;
  const auto to_target = distances_to(g, target);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (from_source[u] == kUnreachable || from_source[u] >= total) continue;
    for (NodeId v : g.successors(u)) {
      if (to_target[v] != kUnreachable && from_source[u] + 1 + to_target[v] == total)
        edges.emplace_back(u, v);
    }
  }
  return edges;
}

DistanceMatrix distance_matrix(const LabeledGraph& g, std::span<const NodeId> nodes,
                               unsigned threads) {
  for (NodeId v : nodes) require(g, v);
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("distance_matrix: designated nodes must be distinct");

  DistanceMatrix matrix;
  matrix.index.assign(nodes.begin(), nodes.end());
  const std::size_t k = nodes.size();
  matrix.values.assign(k * k, kUnreachable);
  detail::parallel_for(k, threads, [&](std::size_t row) {
    const auto dist = bfs_distances(g, nodes[row]);
    for (std::size_t col = 0; col < k; ++col) matrix.values[row * k + col] = dist[nodes[col]];
  });
  return matrix;
}

double average_path_length(const LabeledGraph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<PairSums> partial(blocks);
  detail::parallel_for(blocks, threads, [&](std::size_t b) {
    std::vector<Distance> dist(n, kUnreachable);
    std::vector<NodeId> queue;
    queue.reserve(n);
    PairSums acc;
    for (std::size_t s = b * kBlock; s < std::min(n, (b + 1) * kBlock); ++s) {
      const auto sums = sum_from(g, static_cast<NodeId>(s), dist, queue);
      acc.total += sums.total;
      acc.pairs += sums.pairs;
    }
    partial[b] = acc;
  });
  PairSums sums;
  for (const auto& p : partial) {
    sums.total += p.total;
    sums.pairs += p.pairs;
  }
  if (sums.pairs == 0) throw InvalidInput("average path length: no connected pair of nodes");
  return static_cast<double>(sums.total) / static_cast<double>(sums.pairs);
}

double sampled_average_path_length(const LabeledGraph& g, std::size_t sources,
                                   std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n == 0 || sources == 0) throw InvalidInput("sampled average path length: nothing to sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<Distance> dist(n, kUnreachable);
  std::vector<NodeId> queue;
  PairSums sums;
  for (std::size_t i = 0; i < sources; ++i) {
    const auto s = sum_from(g, static_cast<NodeId>(pick(rng)), dist, queue);
    sums.total += s.total;
    sums.pairs += s.pairs;
  }
  if (sums.pairs == 0) throw InvalidInput("sampled average path length: no connected pair found");
  return static_cast<double>(sums.total) / static_cast<double>(sums.pairs);
}

double mean_subset_distance(const LabeledGraph& g, std::span<const NodeId> nodes) {
  const auto matrix = distance_matrix(g, nodes);
  std::uint64_t total = 0;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      if (i == j || matrix.at(i, j) == kUnreachable) continue;
      total += matrix.at(i, j);
      ++count;
    }
  }
  if (count == 0) throw InvalidInput("mean subset distance: no designated pair is connected");
  return static_cast<double>(total) / static_cast<double>(count);
}

}  // namespace pathnet
