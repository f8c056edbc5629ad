#pragma once

#include <cstddef>
#include <vector>

#include "pathnet/graph.hpp"

namespace pathnet {

enum class CentralityKind { betweenness, eigenvector };

struct CentralityScores {
  CentralityKind kind = CentralityKind::betweenness;
  std::vector<double> scores;  // indexed by NodeId
  // eigenvector only
  std::size_t iterations = 0;
  double residual = 0.0;  // max-norm change of the final iteration
};

/// Unnormalized hop-count betweenness (Brandes). Direction is respected on
/// directed graphs; undirected graphs count each unordered pair once.
///
/// Sources are processed in fixed blocks whose partial sums are merged in
/// block order, so the result is bit-identical for every thread count.
CentralityScores betweenness(const LabeledGraph& g, unsigned threads = 1);

struct EigenvectorOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
};

/// Leading eigenvector of the weighted adjacency (symmetrized when g is
/// directed), scaled to unit max-norm.
///
/// Power iteration from the all-ones vector on A + I; the unit shift keeps
/// bipartite components from oscillating without changing eigenvectors.
/// Throws InvalidInput on an edgeless graph and NonConvergence (carrying the
/// last iterate) when max_iterations is exhausted.
CentralityScores eigenvector(const LabeledGraph& g, const EigenvectorOptions& options = {});

/// Node with the maximal score; scores within a relative 1e-9 of the maximum
/// count as tied and the smallest NodeId wins.
NodeId argmax_node(const CentralityScores& scores);

}  // namespace pathnet
