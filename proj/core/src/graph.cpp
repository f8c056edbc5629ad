#include "pathnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "pathnet/error.hpp"

namespace pathnet {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::string describe(NodeId v) { return "unknown node id " + std::to_string(v); }

// Builds the sorted CSR arrays from a canonical edge list.
void build_adjacency(bool directed, std::size_t n, const std::vector<Edge>& edges,
                     std::vector<std::size_t>& out_offsets, std::vector<NodeId>& out_targets,
                     std::vector<Weight>& out_weights, std::vector<std::size_t>& in_offsets,
                     std::vector<NodeId>& in_sources) {
  out_offsets.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++out_offsets[e.source + 1];
    if (!directed) ++out_offsets[e.target + 1];
  }
  for (std::size_t i = 0; i < n; ++i) out_offsets[i + 1] += out_offsets[i];

  out_targets.assign(out_offsets.back(), 0);
  out_weights.assign(out_offsets.back(), 0);
  std::vector<std::size_t> cursor(out_offsets.begin(), out_offsets.end() - 1);
  for (const Edge& e : edges) {
    out_targets[cursor[e.source]] = e.target;
    out_weights[cursor[e.source]++] = e.weight;
    if (!directed) {
      out_targets[cursor[e.target]] = e.source;
      out_weights[cursor[e.target]++] = e.weight;
    }
  }
  // Undirected rows are filled in two interleaved passes, so sort each row.
  if (!directed) {
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t lo = out_offsets[v];
      const std::size_t hi = out_offsets[v + 1];
      std::vector<std::pair<NodeId, Weight>> row;
      row.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) row.emplace_back(out_targets[i], out_weights[i]);
      std::sort(row.begin(), row.end());
      for (std::size_t i = lo; i < hi; ++i) {
        out_targets[i] = row[i - lo].first;
        out_weights[i] = row[i - lo].second;
      }
    }
    in_offsets.clear();
    in_sources.clear();
    return;
  }

  in_offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++in_offsets[e.target + 1];
  for (std::size_t i = 0; i < n; ++i) in_offsets[i + 1] += in_offsets[i];
  in_sources.assign(in_offsets.back(), 0);
  std::vector<std::size_t> in_cursor(in_offsets.begin(), in_offsets.end() - 1);
  // edges are sorted by source, so every in-row ends up sorted as well
  for (const Edge& e : edges) in_sources[in_cursor[e.target]++] = e.source;
}

}  // namespace

void LabeledGraph::check(NodeId v) const {
  if (!contains(v)) throw ContractViolation(describe(v));
}

const std::string& LabeledGraph::label(NodeId v) const {
  check(v);
  return labels_[v];
}

std::optional<NodeId> LabeledGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeId> LabeledGraph::successors(NodeId v) const {
  check(v);
  return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const Weight> LabeledGraph::successor_weights(NodeId v) const {
  check(v);
  return {out_weights_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const NodeId> LabeledGraph::predecessors(NodeId v) const {
  if (!directed_) return successors(v);
  check(v);
  return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

bool LabeledGraph::has_edge(NodeId u, NodeId v) const { return weight(u, v) != 0; }

Weight LabeledGraph::weight(NodeId u, NodeId v) const {
  check(v);
  auto row = successors(u);
  auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return 0;
  return successor_weights(u)[static_cast<std::size_t>(it - row.begin())];
}

GraphBuilder::GraphBuilder(bool directed) : directed_(directed) {}

NodeId GraphBuilder::intern(std::string_view label) {
  if (label.empty()) throw InvalidInput("empty node label");
  std::string key(label);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (labels_.size() >= std::numeric_limits<NodeId>::max())
    throw InvalidInput("too many nodes for a 32-bit NodeId");
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<NodeId> GraphBuilder::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::add_edge(NodeId from, NodeId to, Weight weight) {
  if (from >= labels_.size()) throw ContractViolation(describe(from));
  if (to >= labels_.size()) throw ContractViolation(describe(to));
  if (from == to) {
    ++self_loops_;
    return;
  }
  if (weight == 0) return;
  if (!directed_ && from > to) std::swap(from, to);
  weights_[edge_key(from, to)] += weight;
}

LabeledGraph GraphBuilder::build() && {
  LabeledGraph g;
  g.directed_ = directed_;
  g.labels_ = std::move(labels_);
  g.index_ = std::move(index_);
  g.edges_.reserve(weights_.size());
  for (const auto& [key, w] : weights_) {
    g.edges_.push_back(
        Edge{static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffU), w});
  }
  weights_.clear();
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  build_adjacency(g.directed_, g.labels_.size(), g.edges_, g.out_offsets_, g.out_targets_,
                  g.out_weights_, g.in_offsets_, g.in_sources_);
  return g;
}

LabeledGraph to_undirected(const LabeledGraph& g) {
  GraphBuilder builder(false);
  for (const std::string& label : g.labels()) builder.intern(label);
  for (const Edge& e : g.edges()) builder.add_edge(e.source, e.target, e.weight);
  return std::move(builder).build();
}

namespace {

ComponentMap weak_components(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  ComponentMap map;
  map.component.assign(n, kUnset);
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (map.component[start] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(map.sizes.size());
    std::size_t size = 0;
    map.component[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ++size;
      auto visit = [&](NodeId w) {
        if (map.component[w] == kUnset) {
          map.component[w] = id;
          stack.push_back(w);
        }
      };
      for (NodeId w : g.successors(v)) visit(w);
      if (g.directed())
        for (NodeId w : g.predecessors(v)) visit(w);
    }
    map.sizes.push_back(size);
  }
  return map;
}

// Iterative Tarjan; ids are renumbered afterwards by smallest member.
ComponentMap strong_components(const LabeledGraph& g) {
  const std::size_t n = g.node_count();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0), raw(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> scc_stack;
  std::vector<std::pair<NodeId, std::size_t>> call;
  std::uint32_t next_index = 0;
  std::uint32_t next_component = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child == 0 && index[v] == kUnset) {
        index[v] = lowlink[v] = next_index++;
        scc_stack.push_back(v);
        on_stack[v] = true;
      }
      auto succ = g.successors(v);
      if (child < succ.size()) {
        const NodeId w = succ[child++];
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      if (lowlink[v] == index[v]) {
        NodeId w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = false;
          raw[w] = next_component;
        } while (w != v);
        ++next_component;
      }
      const NodeId finished = v;
      call.pop_back();
      if (!call.empty()) {
        NodeId parent = call.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
      }
    }
  }

  ComponentMap map;
  map.component.assign(n, 0);
  std::vector<std::uint32_t> renumber(next_component, kUnset);
  for (NodeId v = 0; v < n; ++v) {
    auto& id = renumber[raw[v]];
    if (id == kUnset) {
      id = static_cast<std::uint32_t>(map.sizes.size());
      map.sizes.push_back(0);
    }
    map.component[v] = id;
    ++map.sizes[id];
  }
  return map;
}

}  // namespace

ComponentMap connected_components(const LabeledGraph& g, Connectivity mode) {
  if (mode == Connectivity::weak) return weak_components(g);
  if (!g.directed())
    throw ContractViolation("strong connectivity requested on an undirected graph");
  return strong_components(g);
}

std::optional<NodeId> Subgraph::local(NodeId parent) const {
  auto it = std::lower_bound(origin.begin(), origin.end(), parent);
  if (it == origin.end() || *it != parent) return std::nullopt;
  return static_cast<NodeId>(it - origin.begin());
}

Subgraph induced_subgraph(const LabeledGraph& g, std::span<const NodeId> nodes) {
  for (NodeId v : nodes)
    if (!g.contains(v)) throw ContractViolation(describe(v));

  Subgraph sub;
  sub.origin.assign(nodes.begin(), nodes.end());
  std::sort(sub.origin.begin(), sub.origin.end());
  sub.origin.erase(std::unique(sub.origin.begin(), sub.origin.end()), sub.origin.end());

  constexpr auto kAbsent = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> local(g.node_count(), kAbsent);
  GraphBuilder builder(g.directed());
  for (std::size_t i = 0; i < sub.origin.size(); ++i) {
    local[sub.origin[i]] = builder.intern(g.label(sub.origin[i]));
  }
  for (NodeId u : sub.origin) {
    auto succ = g.successors(u);
    auto weights = g.successor_weights(u);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      const NodeId v = succ[i];
      if (local[v] == kAbsent) continue;
      if (!g.directed() && v < u) continue;
      builder.add_edge(local[u], local[v], weights[i]);
    }
  }
  sub.graph = std::move(builder).build();
  return sub;
}

Subgraph k_neighbourhood(const LabeledGraph& g, NodeId center, std::size_t k) {
  if (!g.contains(center)) throw ContractViolation(describe(center));
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.node_count(), kUnseen);
  std::vector<NodeId> reached{center};
  std::queue<NodeId> frontier;
  dist[center] = 0;
  frontier.push(center);
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    if (dist[v] == k) continue;
    auto visit = [&](NodeId w) {
      if (dist[w] != kUnseen) return;
      dist[w] = dist[v] + 1;
      reached.push_back(w);
      frontier.push(w);
    };
    for (NodeId w : g.successors(v)) visit(w);
    if (g.directed())
      for (NodeId w : g.predecessors(v)) visit(w);
  }
  return induced_subgraph(g, reached);
}

std::size_t degree(const LabeledGraph& g, NodeId v, DegreeMode mode) {
  const std::size_t out = g.successors(v).size();
  if (!g.directed()) return out;
  const std::size_t in = g.predecessors(v).size();
  switch (mode) {
    case DegreeMode::in:
      return in;
    case DegreeMode::out:
      return out;
    case DegreeMode::total:
      break;
  }
  return in + out;
}

double average_degree(const LabeledGraph& g) {
  if (g.node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

std::vector<std::pair<std::size_t, std::size_t>> degree_histogram(const LabeledGraph& g) {
  std::vector<std::size_t> degrees(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) degrees[v] = degree(g, v, DegreeMode::total);
  std::sort(degrees.begin(), degrees.end());
  std::vector<std::pair<std::size_t, std::size_t>> histogram;
  for (std::size_t d : degrees) {
    if (histogram.empty() || histogram.back().first != d)
      histogram.emplace_back(d, 0);
    ++histogram.back().second;
  }
  return histogram;
}

}  // namespace pathnet
