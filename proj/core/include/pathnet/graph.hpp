#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pathnet {

/// Dense node index, contiguous 0..n-1 within one graph.
using NodeId = std::uint32_t;

/// Number of messages folded into one edge.
using Weight = std::uint64_t;

struct Edge {
  NodeId source;
  NodeId target;
  Weight weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphBuilder;

/// Immutable simple graph over interned account labels.
///
/// Neighbour lists are sorted by NodeId. Undirected graphs store every edge
/// once in edges() with source < target and expose it from both endpoints.
/// A sealed graph is read-only and may be shared across threads.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  bool directed() const noexcept { return directed_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool contains(NodeId v) const noexcept { return v < labels_.size(); }

  const std::string& label(NodeId v) const;
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  /// Out-neighbours (all neighbours when undirected).
  std::span<const NodeId> successors(NodeId v) const;
  /// Weights aligned with successors(v).
  std::span<const Weight> successor_weights(NodeId v) const;
  /// In-neighbours (all neighbours when undirected).
  std::span<const NodeId> predecessors(NodeId v) const;

  /// Canonical edge list: sorted by (source, target).
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(NodeId u, NodeId v) const;
  /// 0 when the edge does not exist.
  Weight weight(NodeId u, NodeId v) const;

 private:
  friend class GraphBuilder;

  void check(NodeId v) const;

  bool directed_ = false;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<Weight> out_weights_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
};

/// Single-threaded accumulator that seals into a LabeledGraph.
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed);

  /// Returns the existing id for a label or allocates the next one.
  /// Throws InvalidInput on an empty label.
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;

  /// Adds `weight` to edge from->to, creating it when absent. Self-loops are
  /// dropped and counted. Throws ContractViolation on unknown ids.
  void add_edge(NodeId from, NodeId to, Weight weight = 1);

  bool directed() const noexcept { return directed_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return weights_.size(); }
  std::size_t dropped_self_loops() const noexcept { return self_loops_; }

  LabeledGraph build() &&;

 private:
  bool directed_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::unordered_map<std::uint64_t, Weight> weights_;
  std::size_t self_loops_ = 0;
};

/// Symmetrized copy; antiparallel weights are summed. Undirected input is
/// returned unchanged.
LabeledGraph to_undirected(const LabeledGraph& g);

enum class Connectivity { weak, strong };

struct ComponentMap {
  /// Component id per node, ordered by the smallest NodeId they contain.
  std::vector<std::uint32_t> component;
  std::vector<std::size_t> sizes;

  std::size_t count() const noexcept { return sizes.size(); }
};

/// Strong mode requires a directed graph.
ComponentMap connected_components(const LabeledGraph& g,
                                  Connectivity mode = Connectivity::weak);

/// A graph cut out of a parent graph. Local ids follow ascending parent ids,
/// so relative order (and with it every NodeId tie-break) is preserved.
struct Subgraph {
  LabeledGraph graph;
  std::vector<NodeId> origin;  // local id -> parent id, strictly increasing

  std::optional<NodeId> local(NodeId parent) const;
};

Subgraph induced_subgraph(const LabeledGraph& g, std::span<const NodeId> nodes);

/// Induced subgraph on every node within k hops of center, ignoring edge
/// direction.
Subgraph k_neighbourhood(const LabeledGraph& g, NodeId center, std::size_t k);

enum class DegreeMode { in, out, total };

/// Incident edge count (not weight-summed). On undirected graphs every mode
/// returns the number of neighbours.
std::size_t degree(const LabeledGraph& g, NodeId v, DegreeMode mode = DegreeMode::total);

/// 2|E|/|V|; 0 for the empty graph.
double average_degree(const LabeledGraph& g);

/// (degree, frequency) pairs sorted by degree, total degree.
std::vector<std::pair<std::size_t, std::size_t>> degree_histogram(const LabeledGraph& g);

}  // namespace pathnet
