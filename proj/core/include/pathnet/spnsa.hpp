#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathnet/centrality.hpp"
#include "pathnet/feed.hpp"
#include "pathnet/graph.hpp"
#include "pathnet/paths.hpp"

namespace pathnet {

// Shortest paths network search: starting from a feed of suspect accounts,
// each resolved feed node in turn acts as the ego. Inside the ego's connected
// component the Middle Man (max betweenness) and Most Influential (max
// eigenvector) nodes are located, and canonical shortest paths are taken
// from the ego to both, from the ego to every other feed node, and from
// every other feed node to both. The union of all paths is the result.

enum class Role : std::uint8_t {
  feed = 1U << 0,
  mm = 1U << 1,
  mi = 1U << 2,
  intermediary = 1U << 3,
};

using RoleSet = std::uint8_t;

constexpr bool has_role(RoleSet set, Role role) {
  return (set & static_cast<RoleSet>(role)) != 0;
}
constexpr RoleSet operator|(RoleSet set, Role role) {
  return static_cast<RoleSet>(set | static_cast<RoleSet>(role));
}

/// "feed|mm|mi" style text, fixed order; "intermediary" for the bare role.
std::string role_names(RoleSet set);
RoleSet parse_role_names(std::string_view text);

enum class PathKind { ego_to_mm, ego_to_mi, ego_to_feed, feed_to_mm, feed_to_mi };

std::string_view to_string(PathKind kind);
std::optional<PathKind> parse_path_kind(std::string_view text);

/// Which extraction produced an edge. Ids refer to the searched graph.
struct PathTag {
  NodeId ego;
  PathKind kind;
  NodeId source;
  NodeId target;

  friend auto operator<=>(const PathTag&, const PathTag&) = default;
};

struct CentralNodes {
  NodeId mm;
  NodeId mi;
  std::uint32_t component = 0;
};

struct SearchOptions {
  /// Restrict each ego's scope to its k-neighbourhood instead of its
  /// whole component.
  std::optional<std::size_t> ego_radius;
  /// Union every shortest path per pair instead of the canonical one.
  bool all_shortest = false;
  unsigned threads = 1;
  EigenvectorOptions eigen;
};

/// Scope of one ego together with the central nodes found in it.
struct EgoScope {
  NodeId ego;
  CentralNodes central;  // ids in the searched graph
  std::size_t scope_nodes;
};

struct InvestigativeSubnetwork {
  /// Union of the extracted path edges; origin maps back to the searched graph.
  Subgraph network;
  std::vector<RoleSet> roles;                    // per local node
  std::vector<std::string> persons;              // per local node, empty unless feed
  std::vector<std::vector<PathTag>> provenance;  // aligned with network.graph.edges()
  ComponentMap components;                       // of network.graph
  std::vector<EgoScope> scopes;                  // one per resolved feed node
};

/// Induced subgraph on the weak component containing ego.
Subgraph ego_component(const LabeledGraph& g, NodeId ego);

/// MM and MI of a connected graph; ids are local to `component`. A graph
/// without edges yields its first node for both.
CentralNodes central_nodes(const LabeledGraph& component, unsigned threads = 1,
                           const EigenvectorOptions& eigen = {});

/// Holds per-component centrality and BFS trees so repeated searches over
/// one graph (for instance leave-one-out) do not recompute them.
class SearchContext {
 public:
  explicit SearchContext(const LabeledGraph& g, SearchOptions options = {});
  ~SearchContext();
  SearchContext(const SearchContext&) = delete;
  SearchContext& operator=(const SearchContext&) = delete;

  const LabeledGraph& graph() const noexcept { return g_; }
  const SearchOptions& options() const noexcept { return options_; }

  InvestigativeSubnetwork run(const ResolvedFeed& feed);

 private:
  struct Scope;
  std::shared_ptr<Scope> scope_for(NodeId ego);

  const LabeledGraph& g_;
  SearchOptions options_;
  ComponentMap components_;
  std::map<std::uint32_t, std::shared_ptr<Scope>> component_scopes_;
};

InvestigativeSubnetwork spnsa(const LabeledGraph& g, const ResolvedFeed& feed,
                              const SearchOptions& options = {});

struct LeaveOneOutRow {
  std::string person;
  std::vector<std::string> addresses;
  std::vector<NodeId> nodes;  // resolved ids of the left-out person
  bool reappears;
};

/// For each person: drop all their addresses from the feed, search with the
/// rest, and report whether any of their nodes shows up in the result.
/// Requires at least two persons.
std::vector<LeaveOneOutRow> leave_one_out(const LabeledGraph& g, const FeedList& feed,
                                          const SearchOptions& options = {});

}  // namespace pathnet
