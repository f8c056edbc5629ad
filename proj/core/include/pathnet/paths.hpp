#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pathnet/graph.hpp"

namespace pathnet {

using Distance = std::uint32_t;
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

struct Path {
  std::vector<NodeId> nodes;

  std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// Hop distances from `source`, following edge direction. kUnreachable marks
/// nodes that cannot be reached.
std::vector<Distance> bfs_distances(const LabeledGraph& g, NodeId source);

/// BFS tree with the canonical parent rule: the parent of v is the smallest
/// NodeId u with dist(u) = dist(v) - 1 and an edge u -> v.
struct ShortestPathTree {
  NodeId source;
  std::vector<Distance> distance;
  std::vector<NodeId> parent;  // parent[source] == source; undefined when unreachable

  std::optional<Path> path_to(NodeId target) const;
};

ShortestPathTree shortest_path_tree(const LabeledGraph& g, NodeId source);

/// Canonical shortest path, or nullopt when target is unreachable.
std::optional<Path> bfs_path(const LabeledGraph& g, NodeId source, NodeId target);

/// Every edge lying on at least one shortest source -> target path, as
/// (tail, head) pairs sorted ascending. Empty when unreachable or equal.
std::vector<std::pair<NodeId, NodeId>> all_shortest_path_edges(const LabeledGraph& g,
                                                                NodeId source, NodeId target);

struct DistanceMatrix {
  std::vector<NodeId> index;
  std::vector<Distance> values;  // row-major, index.size() squared

  std::size_t size() const noexcept { return index.size(); }
  Distance at(std::size_t row, std::size_t col) const { return values[row * index.size() + col]; }
};

/// Pairwise distances among `nodes` (distinct, in g), one BFS per row.
DistanceMatrix distance_matrix(const LabeledGraph& g, std::span<const NodeId> nodes,
                               unsigned threads = 1);

/// Mean finite distance over all ordered pairs of distinct nodes (equal to
/// the unordered mean on undirected graphs). Exact: one BFS per node with
/// integer accumulation. Throws InvalidInput when no pair is connected.
double average_path_length(const LabeledGraph& g, unsigned threads = 1);

/// Estimate of average_path_length from `sources` uniformly drawn BFS roots.
double sampled_average_path_length(const LabeledGraph& g, std::size_t sources,
                                   std::uint64_t seed);

/// Mean of the finite off-diagonal entries of distance_matrix(g, nodes).
/// Throws InvalidInput when every off-diagonal entry is infinite.
double mean_subset_distance(const LabeledGraph& g, std::span<const NodeId> nodes);

}  // namespace pathnet
