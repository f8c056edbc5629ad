#include "pathnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "parallel.hpp"
#include "pathnet/error.hpp"

namespace pathnet {

namespace {

constexpr std::size_t kMaxBlocks = 64;
constexpr std::size_t kMinBlockSize = 32;

struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n)
      : dist(n, kUnreached), sigma(n, 0.0), delta(n, 0.0) {
    order.reserve(n);
  }

  static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;
};

// Adds the dependencies of one source to `acc`.
void accumulate_source(const LabeledGraph& g, NodeId s, BrandesWorkspace& ws,
                       std::vector<double>& acc) {
  ws.order.clear();
  ws.dist[s] = 0;
  ws.sigma[s] = 1.0;
  ws.order.push_back(s);
  for (std::size_t head = 0; head < ws.order.size(); ++head) {
    const NodeId v = ws.order[head];
    for (NodeId w : g.successors(v)) {
      if (ws.dist[w] == BrandesWorkspace::kUnreached) {
        ws.dist[w] = ws.dist[v] + 1;
        ws.order.push_back(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    const NodeId w = *it;
    const double coefficient = (1.0 + ws.delta[w]) / ws.sigma[w];
    for (NodeId v : g.predecessors(w)) {
      if (ws.dist[v] != BrandesWorkspace::kUnreached && ws.dist[v] + 1 == ws.dist[w])
        ws.delta[v] += ws.sigma[v] * coefficient;
    }
    if (w != s) acc[w] += ws.delta[w];
  }
  for (NodeId v : ws.order) {
    ws.dist[v] = BrandesWorkspace::kUnreached;
    ws.sigma[v] = 0.0;
    ws.delta[v] = 0.0;
  }
}

}  // namespace

CentralityScores betweenness(const LabeledGraph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  CentralityScores result;
  result.kind = CentralityKind::betweenness;
  result.scores.assign(n, 0.0);
  if (n == 0) return result;

  const std::size_t block_size =
      std::max(kMinBlockSize, (n + kMaxBlocks - 1) / kMaxBlocks);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  std::vector<std::vector<double>> partial(blocks);

  detail::parallel_for(blocks, threads, [&](std::size_t b) {
    BrandesWorkspace ws(n);
    std::vector<double> acc(n, 0.0);
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(n, lo + block_size);
    for (std::size_t s = lo; s < hi; ++s) accumulate_source(g, static_cast<NodeId>(s), ws, acc);
    partial[b] = std::move(acc);
  });

  for (const auto& acc : partial)
    for (std::size_t v = 0; v < n; ++v) result.scores[v] += acc[v];
  if (!g.directed())
    for (double& x : result.scores) x /= 2.0;
  return result;
}

CentralityScores eigenvector(const LabeledGraph& g, const EigenvectorOptions& options) {
  if (g.node_count() == 0 || g.edge_count() == 0)
    throw InvalidInput("eigenvector centrality is undefined on a graph without edges");

  const LabeledGraph symmetric_copy = g.directed() ? to_undirected(g) : LabeledGraph{};
  const LabeledGraph& a = g.directed() ? symmetric_copy : g;
  const std::size_t n = a.node_count();

  std::vector<double> x(n, 1.0), y(n, 0.0);
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    double scale = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double sum = x[v];
      auto succ = a.successors(v);
      auto weights = a.successor_weights(v);
      for (std::size_t i = 0; i < succ.size(); ++i)
        sum += static_cast<double>(weights[i]) * x[succ[i]];
      y[v] = sum;
      scale = std::max(scale, sum);
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      y[v] /= scale;
      change = std::max(change, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    if (change < options.tolerance) {
      CentralityScores result;
      result.kind = CentralityKind::eigenvector;
      result.scores = std::move(x);
      result.iterations = iter;
      result.residual = change;
      return result;
    }
  }
  throw NonConvergence("eigenvector centrality did not converge in " +
                           std::to_string(options.max_iterations) + " iterations",
                       std::move(x), options.max_iterations);
}

NodeId argmax_node(const CentralityScores& scores) {
  if (scores.scores.empty()) throw InvalidInput("argmax of empty scores");
  const double best = *std::max_element(scores.scores.begin(), scores.scores.end());
  const double slack = 1e-9 * std::abs(best);
  for (std::size_t v = 0; v < scores.scores.size(); ++v) {
    if (scores.scores[v] >= best - slack) return static_cast<NodeId>(v);
  }
  return 0;  // unreachable: the maximum itself qualifies
}

}  // namespace pathnet
