#include "pathnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "pathnet/error.hpp"

namespace pathnet {

namespace {

void require_undirected(const LabeledGraph& g, const char* what) {
  if (g.directed())
    throw ContractViolation(std::string(what) + " requires an undirected graph");
}

void require_edges(const LabeledGraph& g) {
  if (g.edge_count() == 0) throw InvalidInput("modularity is undefined on a graph without edges");
}

// Scaled modularity contribution of one community: 4m*l - d^2, so that
// Q = sum(score) / (4m^2) with every term an exact integer.
std::int64_t community_score(std::int64_t m, std::int64_t internal, std::int64_t degree) {
  return 4 * m * internal - degree * degree;
}

struct CommunityState {
  std::int64_t degree = 0;
  std::int64_t internal = 0;
  std::uint32_t size = 1;
  std::uint32_t version = 0;
  bool alive = true;
  std::map<std::uint32_t, std::int64_t> links;  // neighbour community -> edge count
};

// Dendrogram bookkeeping shared by the agglomerative detectors. Community
// ids are node ids; a merge keeps the smaller id, which is therefore always
// the smallest member.
class Agglomeration {
 public:
  explicit Agglomeration(const LabeledGraph& g)
      : m_(static_cast<std::int64_t>(g.edge_count())),
        states_(g.node_count()),
        component_(connected_components(g).component) {
    for (NodeId v = 0; v < g.node_count(); ++v)
      states_[v].degree = static_cast<std::int64_t>(g.successors(v).size());
    for (const Edge& e : g.edges()) {
      states_[e.source].links[e.target] = 1;
      states_[e.target].links[e.source] = 1;
    }
  }

  std::int64_t edges() const noexcept { return m_; }
  const CommunityState& state(std::uint32_t c) const { return states_[c]; }

  bool current(std::uint32_t a, std::uint32_t va, std::uint32_t b, std::uint32_t vb) const {
    return states_[a].alive && states_[b].alive && states_[a].version == va &&
           states_[b].version == vb;
  }

  std::int64_t links_between(std::uint32_t a, std::uint32_t b) const {
    auto it = states_[a].links.find(b);
    return it == states_[a].links.end() ? 0 : it->second;
  }

  /// Change in summed community_score if a and b merged.
  std::int64_t merge_gain(std::uint32_t a, std::uint32_t b) const {
    return 4 * m_ * links_between(a, b) - 2 * states_[a].degree * states_[b].degree;
  }

  /// Merges the larger id into the smaller one and returns the survivor.
  std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
    if (b < a) std::swap(a, b);
    merges_.emplace_back(a, b);
    gains_.push_back(merge_gain(a, b));

    auto& keep = states_[a];
    auto& gone = states_[b];
    const std::int64_t between = links_between(a, b);
    keep.internal += gone.internal + between;
    keep.degree += gone.degree;
    keep.size += gone.size;
    keep.links.erase(b);
    for (const auto& [k, w] : gone.links) {
      if (k == a) continue;
      keep.links[k] += w;
      auto& other = states_[k].links;
      other.erase(b);
      other[a] += w;
    }
    gone.links.clear();
    gone.alive = false;
    ++keep.version;
    return a;
  }

  /// Replays each component's merges up to the prefix with the highest
  /// modularity (earliest on ties) and returns the resulting labels.
  std::vector<std::uint32_t> best_cut() const {
    const std::size_t components =
        component_.empty() ? 0 : *std::max_element(component_.begin(), component_.end()) + 1;
    std::vector<std::int64_t> running(components, 0), best(components, 0);
    std::vector<std::size_t> count(components, 0), best_count(components, 0);
    for (std::size_t i = 0; i < merges_.size(); ++i) {
      const auto c = component_[merges_[i].first];
      running[c] += gains_[i];
      ++count[c];
      if (running[c] > best[c]) {
        best[c] = running[c];
        best_count[c] = count[c];
      }
    }

    std::vector<std::uint32_t> parent(states_.size());
    std::iota(parent.begin(), parent.end(), 0U);
    auto find = [&](std::uint32_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::fill(count.begin(), count.end(), 0);
    for (const auto& [a, b] : merges_) {
      const auto c = component_[a];
      if (count[c]++ >= best_count[c]) continue;
      parent[find(b)] = find(a);
    }
    std::vector<std::uint32_t> labels(states_.size());
    for (std::uint32_t v = 0; v < labels.size(); ++v) labels[v] = find(v);
    return labels;
  }

 private:
  std::int64_t m_;
  std::vector<CommunityState> states_;
  std::vector<std::uint32_t> component_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> merges_;
  std::vector<std::int64_t> gains_;
};

struct GainEntry {
  std::int64_t gain;
  std::uint32_t a, b;  // a < b
  std::uint32_t va, vb;
};

// Max gain first, then the lexicographically smallest pair.
struct GainOrder {
  bool operator()(const GainEntry& x, const GainEntry& y) const {
    if (x.gain != y.gain) return x.gain < y.gain;
    return std::tie(x.a, x.b) > std::tie(y.a, y.b);
  }
};

struct SigmaEntry {
  double delta_sigma;
  std::uint32_t a, b;
  std::uint32_t va, vb;
};

// Min delta-sigma first, then the lexicographically smallest pair.
struct SigmaOrder {
  bool operator()(const SigmaEntry& x, const SigmaEntry& y) const {
    if (x.delta_sigma != y.delta_sigma) return x.delta_sigma > y.delta_sigma;
    return std::tie(x.a, x.b) > std::tie(y.a, y.b);
  }
};

// Row vector e_v * P^t with P = D^-1 (A + I): every node carries a self-loop,
// as in the original walktrap formulation.
std::vector<double> walk_distribution(const LabeledGraph& g, NodeId v, std::size_t steps,
                                      std::span<const NodeId> local_to_node,
                                      std::span<const std::uint32_t> node_to_local) {
  const std::size_t n = local_to_node.size();
  std::vector<double> cur(n, 0.0), next(n, 0.0);
  cur[node_to_local[v]] = 1.0;
  for (std::size_t step = 0; step < steps; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (cur[j] == 0.0) continue;
      auto neighbours = g.successors(local_to_node[j]);
      const double share = cur[j] / static_cast<double>(neighbours.size() + 1);
      next[j] += share;
      for (NodeId k : neighbours) next[node_to_local[k]] += share;
    }
    cur.swap(next);
  }
  return cur;
}

double squared_walk_distance(std::span<const double> p, std::span<const double> q,
                             std::span<const double> inverse_degree) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double diff = p[k] - q[k];
    sum += diff * diff * inverse_degree[k];
  }
  return sum;
}

}  // namespace

double modularity(const LabeledGraph& g, std::span<const std::uint32_t> membership) {
  require_undirected(g, "modularity");
  require_edges(g);
  if (membership.size() != g.node_count())
    throw ContractViolation("membership size does not match node count");
  const auto m = static_cast<std::int64_t>(g.edge_count());
  std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> per;  // internal, degree
  for (NodeId v = 0; v < g.node_count(); ++v)
    per[membership[v]].second += static_cast<std::int64_t>(g.successors(v).size());
  for (const Edge& e : g.edges())
    if (membership[e.source] == membership[e.target]) ++per[membership[e.source]].first;
  std::int64_t total = 0;
  for (const auto& [c, counts] : per) total += community_score(m, counts.first, counts.second);
  return static_cast<double>(total) / (4.0 * static_cast<double>(m) * static_cast<double>(m));
}

Partition make_partition(const LabeledGraph& g, std::span<const std::uint32_t> labels) {
  if (labels.size() != g.node_count())
    throw ContractViolation("label count does not match node count");
  Partition p;
  p.membership.resize(labels.size());
  std::map<std::uint32_t, std::uint32_t> renumber;
  for (NodeId v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = renumber.try_emplace(labels[v], static_cast<std::uint32_t>(p.sizes.size()));
    if (inserted) p.sizes.push_back(0);
    p.membership[v] = it->second;
    ++p.sizes[it->second];
  }
  p.modularity = modularity(g, p.membership);
  return p;
}

Partition fastgreedy(const LabeledGraph& g) {
  require_undirected(g, "fastgreedy");
  require_edges(g);
  Agglomeration agg(g);
  std::priority_queue<GainEntry, std::vector<GainEntry>, GainOrder> heap;
  for (const Edge& e : g.edges())
    heap.push({agg.merge_gain(e.source, e.target), e.source, e.target, 0, 0});

  while (!heap.empty()) {
    const GainEntry top = heap.top();
    heap.pop();
    if (!agg.current(top.a, top.va, top.b, top.vb)) continue;
    const auto c = agg.merge(top.a, top.b);
    for (const auto& [k, w] : agg.state(c).links) {
      const auto lo = std::min(c, k), hi = std::max(c, k);
      heap.push({agg.merge_gain(lo, hi), lo, hi, agg.state(lo).version, agg.state(hi).version});
    }
  }
  return make_partition(g, agg.best_cut());
}

double walktrap_distance(const LabeledGraph& g, NodeId u, NodeId v, std::size_t steps) {
  require_undirected(g, "walktrap");
  if (!g.contains(u) || !g.contains(v)) throw ContractViolation("unknown node id");
  const std::size_t n = g.node_count();
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<std::uint32_t> identity(all.begin(), all.end());
  std::vector<double> inverse_degree(n);
  for (NodeId k = 0; k < n; ++k)
    inverse_degree[k] = 1.0 / static_cast<double>(g.successors(k).size() + 1);
  const auto p = walk_distribution(g, u, steps, all, identity);
  const auto q = walk_distribution(g, v, steps, all, identity);
  return std::sqrt(squared_walk_distance(p, q, inverse_degree));
}

Partition walktrap(const LabeledGraph& g, const WalktrapOptions& options) {
  require_undirected(g, "walktrap");
  require_edges(g);
  const auto components = connected_components(g);
  const double n = static_cast<double>(g.node_count());
  Agglomeration agg(g);

  std::vector<std::vector<NodeId>> members(components.count());
  for (NodeId v = 0; v < g.node_count(); ++v) members[components.component[v]].push_back(v);

  std::vector<std::uint32_t> node_to_local(g.node_count(), 0);
  for (const auto& nodes : members) {
    if (nodes.size() < 2) continue;
    const std::size_t size = nodes.size();
    if (size > options.memory_budget_bytes / sizeof(double) / size)
      throw InvalidInput("walktrap: component of " + std::to_string(size) +
                         " nodes exceeds the memory budget");
    for (std::size_t i = 0; i < size; ++i) node_to_local[nodes[i]] = static_cast<std::uint32_t>(i);

    std::vector<double> inverse_degree(size);
    for (std::size_t i = 0; i < size; ++i)
      inverse_degree[i] = 1.0 / static_cast<double>(g.successors(nodes[i]).size() + 1);
    // indexed by local id of the community representative
    std::vector<std::vector<double>> prob(size);
    for (std::size_t i = 0; i < size; ++i)
      prob[i] = walk_distribution(g, nodes[i], options.steps, nodes, node_to_local);

    auto delta_sigma = [&](std::uint32_t a, std::uint32_t b) {
      const double sa = agg.state(a).size, sb = agg.state(b).size;
      const double r2 =
          squared_walk_distance(prob[node_to_local[a]], prob[node_to_local[b]], inverse_degree);
      return (sa * sb / (sa + sb)) * r2 / n;
    };

    std::priority_queue<SigmaEntry, std::vector<SigmaEntry>, SigmaOrder> heap;
    for (NodeId u : nodes)
      for (NodeId v : g.successors(u))
        if (u < v) heap.push({delta_sigma(u, v), u, v, 0, 0});

    while (!heap.empty()) {
      const SigmaEntry top = heap.top();
      heap.pop();
      if (!agg.current(top.a, top.va, top.b, top.vb)) continue;
      const double sa = agg.state(top.a).size, sb = agg.state(top.b).size;
      auto& keep = prob[node_to_local[top.a]];
      auto& gone = prob[node_to_local[top.b]];
      for (std::size_t k = 0; k < size; ++k) keep[k] = (sa * keep[k] + sb * gone[k]) / (sa + sb);
      std::vector<double>().swap(gone);
      const auto c = agg.merge(top.a, top.b);
      for (const auto& [k, w] : agg.state(c).links) {
        const auto lo = std::min(c, k), hi = std::max(c, k);
        heap.push({delta_sigma(lo, hi), lo, hi, agg.state(lo).version, agg.state(hi).version});
      }
    }
  }
  return make_partition(g, agg.best_cut());
}

namespace {

// Generalized modularity matrix B^(g) of one community, applied implicitly.
class ModularityOperator {
 public:
  ModularityOperator(const LabeledGraph& g, std::span<const NodeId> nodes,
                     std::span<std::int32_t> local_of)
      : g_(g), nodes_(nodes), local_of_(local_of), two_m_(2.0 * static_cast<double>(g.edge_count())) {
    const std::size_t n = nodes.size();
    degree_.resize(n);
    row_sum_.resize(n);
    double community_degree = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      degree_[i] = static_cast<double>(g.successors(nodes[i]).size());
      community_degree += degree_[i];
    }
    bound_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double inside = 0.0;
      for (NodeId w : g.successors(nodes[i]))
        if (local_of_[w] >= 0) inside += 1.0;
      row_sum_[i] = inside - degree_[i] * community_degree / two_m_;
      // Gershgorin bound on |B^(g)| row sums
      const double row_abs = inside + degree_[i] * community_degree / two_m_ + std::abs(row_sum_[i]);
      bound_ = std::max(bound_, row_abs);
    }
  }

  double shift() const noexcept { return bound_; }

  void apply(std::span<const double> x, std::span<double> y) const {
    double kx = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) kx += degree_[i] * x[i];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      double sum = 0.0;
      for (NodeId w : g_.successors(nodes_[i]))
        if (const auto j = local_of_[w]; j >= 0) sum += x[static_cast<std::size_t>(j)];
      y[i] = sum - degree_[i] * kx / two_m_ - row_sum_[i] * x[i];
    }
  }

 private:
  const LabeledGraph& g_;
  std::span<const NodeId> nodes_;
  std::span<std::int32_t> local_of_;
  double two_m_;
  double bound_ = 0.0;
  std::vector<double> degree_;
  std::vector<double> row_sum_;
};

struct Eigenpair {
  double value;
  std::vector<double> vector;
};

// Thick-restart Lanczos (Rayleigh-Ritz on an orthonormal Krylov basis) for
// the algebraically largest eigenpair of B^(g). B^(g) maps the all-ones
// vector to zero and splitting along it separates nothing, so the basis is
// kept orthogonal to it. Each operator application counts as one iteration.
Eigenpair leading_eigenpair(const ModularityOperator& op, std::size_t n,
                            const LeadingEigenvectorOptions& options, const std::string& name) {
  const double scale = std::max(op.shift(), 1.0);
  const std::size_t max_basis = std::min<std::size_t>(n - 1, 48);
  const std::size_t keep = std::min<std::size_t>(max_basis - 1, 8);

  std::vector<std::vector<double>> basis, images;
  Eigen::MatrixXd projected(0, 0);

  // Deterministic, platform-independent start vector (raw mt19937 output).
  std::mt19937 rng(5489U);
  auto random_vector = [&] {
    std::vector<double> v(n);
    for (auto& vi : v) vi = 0.5 + static_cast<double>(rng()) / 4294967296.0;
    return v;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
  };
  // Orthogonalizes v against the all-ones vector and the basis, twice, and
  // normalizes it. Returns false when nothing is left.
  auto orthonormalize = [&](std::vector<double>& v) {
    const double before = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
      for (double& vi : v) vi -= mean;
      for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 1e-10 * before)) return false;
    for (double& vi : v) vi /= norm;
    return true;
  };

  std::vector<double> next = random_vector();
  std::vector<double> ritz(n), ritz_image(n);
  double theta = 0.0;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    while (!orthonormalize(next)) next = random_vector();
    std::vector<double> image(n);
    op.apply(next, image);
    const std::size_t k = basis.size();
    basis.push_back(std::move(next));
    images.push_back(std::move(image));
    projected.conservativeResize(k + 1, k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
      const double h = 0.5 * (dot(basis[i], images[k]) + dot(basis[k], images[i]));
      projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = h;
      projected(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = h;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected);
    const auto top = static_cast<Eigen::Index>(k);
    theta = solver.eigenvalues()(top);
    std::fill(ritz.begin(), ritz.end(), 0.0);
    std::fill(ritz_image.begin(), ritz_image.end(), 0.0);
    for (std::size_t j = 0; j <= k; ++j) {
      const double c = solver.eigenvectors()(static_cast<Eigen::Index>(j), top);
      for (std::size_t i = 0; i < n; ++i) {
        ritz[i] += c * basis[j][i];
        ritz_image[i] += c * images[j][i];
      }
    }
    next.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) next[i] = ritz_image[i] - theta * ritz[i];
    // a basis spanning the whole complement makes the Ritz pair exact up to rounding
    const double residual = std::sqrt(dot(next, next));
    if (residual <= options.tolerance * scale || (basis.size() == n - 1 && residual <= 1e-8 * scale))
      return {theta, ritz};

    if (basis.size() == max_basis) {
      // keep the top Ritz vectors and their images
      std::vector<std::vector<double>> kept(keep, std::vector<double>(n, 0.0));
      std::vector<std::vector<double>> kept_images(keep, std::vector<double>(n, 0.0));
      Eigen::MatrixXd restarted = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(keep),
                                                        static_cast<Eigen::Index>(keep));
      for (std::size_t r = 0; r < keep; ++r) {
        const auto col = top - static_cast<Eigen::Index>(r);
        restarted(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = solver.eigenvalues()(col);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const double c = solver.eigenvectors()(static_cast<Eigen::Index>(j), col);
          for (std::size_t i = 0; i < n; ++i) {
            kept[r][i] += c * basis[j][i];
            kept_images[r][i] += c * images[j][i];
          }
        }
      }
      basis = std::move(kept);
      images = std::move(kept_images);
      projected = std::move(restarted);
    }
  }
  throw NonConvergence("leading eigenvector did not converge on " + name, ritz,
                       options.max_iterations);
}

}  // namespace

Partition leading_eigenvector(const LabeledGraph& g, const LeadingEigenvectorOptions& options) {
  require_undirected(g, "leading eigenvector");
  require_edges(g);
  const auto m = static_cast<std::int64_t>(g.edge_count());
  const auto components = connected_components(g);

  std::deque<std::vector<NodeId>> pending;
  {
    std::vector<std::vector<NodeId>> initial(components.count());
    for (NodeId v = 0; v < g.node_count(); ++v) initial[components.component[v]].push_back(v);
    for (auto& c : initial) pending.push_back(std::move(c));
  }

  std::vector<std::int32_t> local_of(g.node_count(), -1);
  std::vector<std::uint32_t> labels(g.node_count(), 0);
  std::uint32_t next_label = 0;
  auto finish = [&](const std::vector<NodeId>& nodes) {
    for (NodeId v : nodes) labels[v] = next_label;
    ++next_label;
  };
  // internal edge count and degree sum of a node set, given local_of marks
  auto counts = [&](const std::vector<NodeId>& nodes) {
    std::int64_t internal2 = 0, degree = 0;
    for (NodeId v : nodes) {
      degree += static_cast<std::int64_t>(g.successors(v).size());
      for (NodeId w : g.successors(v))
        if (local_of[w] >= 0) ++internal2;
    }
    return std::make_pair(internal2 / 2, degree);
  };
  auto mark = [&](const std::vector<NodeId>& nodes, bool on) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      local_of[nodes[i]] = on ? static_cast<std::int32_t>(i) : -1;
  };

  while (!pending.empty()) {
    std::vector<NodeId> nodes = std::move(pending.front());
    pending.pop_front();
    if (nodes.size() < 2) {
      finish(nodes);
      continue;
    }
    mark(nodes, true);
    const ModularityOperator op(g, nodes, local_of);
    const auto [whole_internal, whole_degree] = counts(nodes);
    const auto pair = leading_eigenpair(
        op, nodes.size(), options,
        "community of " + std::to_string(nodes.size()) + " nodes containing " + g.label(nodes[0]));
    mark(nodes, false);

    std::vector<NodeId> positive, negative;
    if (pair.value > options.tolerance * std::max(op.shift(), 1.0)) {
      for (std::size_t i = 0; i < nodes.size(); ++i)
        (pair.vector[i] > 0.0 ? positive : negative).push_back(nodes[i]);
    }
    bool split = !positive.empty() && !negative.empty();
    if (split) {
      mark(positive, true);
      const auto [pi, pd] = counts(positive);
      mark(positive, false);
      mark(negative, true);
      const auto [ni, nd] = counts(negative);
      mark(negative, false);
      split = community_score(m, pi, pd) + community_score(m, ni, nd) >
              community_score(m, whole_internal, whole_degree);
    }
    if (!split) {
      finish(nodes);
      continue;
    }
    if (negative.front() < positive.front()) std::swap(positive, negative);
    pending.push_back(std::move(positive));
    pending.push_back(std::move(negative));
  }
  return make_partition(g, labels);
}

MembershipReport membership_report(const Partition& partition, const LabeledGraph& g,
                                   const FeedList& feed) {
  if (partition.membership.size() != g.node_count())
    throw ContractViolation("partition does not belong to this graph");
  MembershipReport report;
  report.community_count = partition.count();
  const auto resolved = match_feed(g, feed);
  for (const auto& person : resolved.persons) {
    for (const auto& address : person.addresses) {
      MembershipRow row{person.person, address.address, std::nullopt, std::nullopt};
      if (address.node) {
        row.community = partition.membership[*address.node];
        row.size = partition.sizes[*row.community];
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace pathnet
