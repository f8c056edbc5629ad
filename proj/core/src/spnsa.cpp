#include "pathnet/spnsa.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "pathnet/error.hpp"

namespace pathnet {

namespace {

constexpr std::pair<Role, std::string_view> kRoleNames[] = {
    {Role::feed, "feed"},
    {Role::mm, "mm"},
    {Role::mi, "mi"},
    {Role::intermediary, "intermediary"},
};

constexpr std::pair<PathKind, std::string_view> kPathKindNames[] = {
    {PathKind::ego_to_mm, "ego_to_mm"},     {PathKind::ego_to_mi, "ego_to_mi"},
    {PathKind::ego_to_feed, "ego_to_feed"}, {PathKind::feed_to_mm, "feed_to_mm"},
    {PathKind::feed_to_mi, "feed_to_mi"},
};

}  // namespace

std::string role_names(RoleSet set) {
  std::string out;
  for (const auto& [role, name] : kRoleNames) {
    if (!has_role(set, role)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

RoleSet parse_role_names(std::string_view text) {
  RoleSet set = 0;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    const auto bar = std::min(text.find('|', pos), text.size());
    const auto name = text.substr(pos, bar - pos);
    bool known = false;
    for (const auto& [role, role_name] : kRoleNames) {
      if (name == role_name) {
        set = set | role;
        known = true;
      }
    }
    if (!known) throw FormatError("unknown role '" + std::string(name) + "'");
    pos = bar + 1;
  }
  return set;
}

std::string_view to_string(PathKind kind) {
  for (const auto& [k, name] : kPathKindNames)
    if (k == kind) return name;
  return "?";
}

std::optional<PathKind> parse_path_kind(std::string_view text) {
  for (const auto& [k, name] : kPathKindNames)
    if (name == text) return k;
  return std::nullopt;
}

Subgraph ego_component(const LabeledGraph& g, NodeId ego) {
  if (!g.contains(ego)) throw ContractViolation("unknown ego node id " + std::to_string(ego));
  const auto components = connected_components(g, Connectivity::weak);
  std::vector<NodeId> members;
  members.reserve(components.sizes[components.component[ego]]);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (components.component[v] == components.component[ego]) members.push_back(v);
  return induced_subgraph(g, members);
}

CentralNodes central_nodes(const LabeledGraph& component, unsigned threads,
                           const EigenvectorOptions& eigen) {
  if (component.node_count() == 0) throw InvalidInput("central nodes of an empty graph");
  if (component.edge_count() == 0) return CentralNodes{0, 0, 0};
  return CentralNodes{argmax_node(betweenness(component, threads)),
                      argmax_node(eigenvector(component, eigen)), 0};
}

struct SearchContext::Scope {
  Subgraph sub;
  CentralNodes central;  // local ids
  std::map<NodeId, ShortestPathTree> trees;

  const ShortestPathTree& tree(NodeId local_source) {
    auto it = trees.find(local_source);
    if (it == trees.end())
      it = trees.emplace(local_source, shortest_path_tree(sub.graph, local_source)).first;
    return it->second;
  }
};

SearchContext::SearchContext(const LabeledGraph& g, SearchOptions options)
    : g_(g), options_(std::move(options)), components_(connected_components(g)) {}

SearchContext::~SearchContext() = default;

std::shared_ptr<SearchContext::Scope> SearchContext::scope_for(NodeId ego) {
  auto make = [&](Subgraph sub) {
    auto scope = std::make_shared<Scope>();
    scope->sub = std::move(sub);
    scope->central = central_nodes(scope->sub.graph, options_.threads, options_.eigen);
    scope->central.component = components_.component[ego];
    return scope;
  };
  if (options_.ego_radius) return make(k_neighbourhood(g_, ego, *options_.ego_radius));

  const auto id = components_.component[ego];
  auto it = component_scopes_.find(id);
  if (it == component_scopes_.end()) {
    std::vector<NodeId> members;
    members.reserve(components_.sizes[id]);
    for (NodeId v = 0; v < g_.node_count(); ++v)
      if (components_.component[v] == id) members.push_back(v);
    it = component_scopes_.emplace(id, make(induced_subgraph(g_, members))).first;
  }
  return it->second;
}

InvestigativeSubnetwork SearchContext::run(const ResolvedFeed& feed) {
  const auto feed_nodes = feed.nodes();
  for (NodeId v : feed_nodes)
    if (!g_.contains(v)) throw ContractViolation("feed node " + std::to_string(v) + " not in graph");

  std::map<NodeId, RoleSet> present;
  std::map<std::pair<NodeId, NodeId>, std::vector<PathTag>> edge_tags;
  std::set<NodeId> mm_nodes, mi_nodes;
  std::vector<EgoScope> scopes;

  auto edge_key = [&](NodeId u, NodeId v) {
    if (!g_.directed() && v < u) std::swap(u, v);
    return std::make_pair(u, v);
  };

  for (NodeId ego : feed_nodes) {
    auto scope = scope_for(ego);
    const auto& origin = scope->sub.origin;
    const NodeId ego_local = *scope->sub.local(ego);
    const NodeId mm = scope->central.mm;
    const NodeId mi = scope->central.mi;
    scopes.push_back({ego, {origin[mm], origin[mi], scope->central.component},
                      scope->sub.graph.node_count()});
    mm_nodes.insert(origin[mm]);
    mi_nodes.insert(origin[mi]);

    auto extract = [&](NodeId source, NodeId target, PathKind kind) {
      const PathTag tag{ego, kind, origin[source], origin[target]};
      auto add_edge = [&](NodeId u, NodeId v) {
        present.try_emplace(origin[u], RoleSet{0});
        present.try_emplace(origin[v], RoleSet{0});
        edge_tags[edge_key(origin[u], origin[v])].push_back(tag);
      };
      if (source == target) {
        present.try_emplace(origin[source], RoleSet{0});
        return;
      }
      if (options_.all_shortest) {
        for (const auto& [u, v] : all_shortest_path_edges(scope->sub.graph, source, target))
          add_edge(u, v);
        return;
      }
      const auto path = scope->tree(source).path_to(target);
      if (!path) return;
      for (std::size_t i = 0; i + 1 < path->nodes.size(); ++i)
        add_edge(path->nodes[i], path->nodes[i + 1]);
    };

    std::vector<NodeId> others;
    for (NodeId f : feed_nodes) {
      if (f == ego) continue;
      if (auto local = scope->sub.local(f)) others.push_back(*local);
    }

    extract(ego_local, mm, PathKind::ego_to_mm);
    extract(ego_local, mi, PathKind::ego_to_mi);
    for (NodeId f : others) extract(ego_local, f, PathKind::ego_to_feed);
    for (NodeId f : others) {
      extract(f, mm, PathKind::feed_to_mm);
      extract(f, mi, PathKind::feed_to_mi);
    }
  }

  const std::unordered_set<NodeId> feed_set(feed_nodes.begin(), feed_nodes.end());
  InvestigativeSubnetwork result;
  GraphBuilder builder(g_.directed());
  for (auto& [v, roles] : present) {
    if (feed_set.contains(v)) roles = roles | Role::feed;
    if (mm_nodes.contains(v)) roles = roles | Role::mm;
    if (mi_nodes.contains(v)) roles = roles | Role::mi;
    if (roles == 0) roles = static_cast<RoleSet>(Role::intermediary);
    result.network.origin.push_back(v);
    result.roles.push_back(roles);
    const auto owner = feed.person_of(v);
    result.persons.push_back(owner && feed_set.contains(v) ? feed.persons[*owner].person
                                                           : std::string{});
    builder.intern(g_.label(v));
  }
  for (const auto& [key, tags] : edge_tags) {
    builder.add_edge(*result.network.local(key.first), *result.network.local(key.second),
                     g_.weight(key.first, key.second));
  }
  result.network.graph = std::move(builder).build();
  for (const Edge& e : result.network.graph.edges()) {
    auto tags = edge_tags.at({result.network.origin[e.source], result.network.origin[e.target]});
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    result.provenance.push_back(std::move(tags));
  }
  result.components = connected_components(result.network.graph);
  result.scopes = std::move(scopes);
  return result;
}

InvestigativeSubnetwork spnsa(const LabeledGraph& g, const ResolvedFeed& feed,
                              const SearchOptions& options) {
  SearchContext context(g, options);
  return context.run(feed);
}

std::vector<LeaveOneOutRow> leave_one_out(const LabeledGraph& g, const FeedList& feed,
                                          const SearchOptions& options) {
  if (feed.entries.size() < 2)
    throw InvalidInput("leave-one-out needs a feed with at least two persons");

  SearchContext context(g, options);
  const auto full = match_feed(g, feed);
  std::vector<LeaveOneOutRow> rows;
  for (std::size_t i = 0; i < feed.entries.size(); ++i) {
    LeaveOneOutRow row{feed.entries[i].person, {}, {}, false};
    std::unordered_set<std::string> dropped;
    for (const auto& a : full.persons[i].addresses) {
      row.addresses.push_back(a.address);
      dropped.insert(a.address);
      if (a.node) row.nodes.push_back(*a.node);
    }

    FeedList reduced;
    for (std::size_t j = 0; j < feed.entries.size(); ++j) {
      if (j == i) continue;
      FeedEntry entry{feed.entries[j].person, {}};
      for (const auto& a : full.persons[j].addresses)
        if (!dropped.contains(a.address)) entry.addresses.push_back(a.address);
      if (!entry.addresses.empty()) reduced.entries.push_back(std::move(entry));
    }
    const auto remaining = match_feed(g, reduced);
    if (!row.nodes.empty() && remaining.resolved_count() > 0) {
      const auto net = context.run(remaining);
      row.reappears = std::any_of(row.nodes.begin(), row.nodes.end(),
                                  [&](NodeId v) { return net.network.local(v).has_value(); });
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pathnet
