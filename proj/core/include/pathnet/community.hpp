#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathnet/feed.hpp"
#include "pathnet/graph.hpp"

namespace pathnet {

// Baseline community detectors. All of them work on undirected graphs and
// ignore edge weights. Disconnected graphs are handled component by
// component inside one community-id space; communities never span
// components.

struct Partition {
  /// Community per node; ids are contiguous and ordered by smallest member.
  std::vector<std::uint32_t> membership;
  std::vector<std::size_t> sizes;
  double modularity = 0.0;

  std::size_t count() const noexcept { return sizes.size(); }
};

/// Q = sum over communities of (e_c/m - (d_c/2m)^2), evaluated from exact
/// integer counts. Throws InvalidInput on an edgeless graph and
/// ContractViolation on directed graphs or a membership of the wrong size.
double modularity(const LabeledGraph& g, std::span<const std::uint32_t> membership);

/// Renumbers arbitrary labels into canonical ids and scores the result.
Partition make_partition(const LabeledGraph& g, std::span<const std::uint32_t> labels);

/// Clauset-Newman-Moore greedy agglomeration. Adjacent communities are
/// merged by largest modularity gain (ties: smallest id pair) and each
/// component is cut where its modularity contribution peaks.
Partition fastgreedy(const LabeledGraph& g);

struct WalktrapOptions {
  std::size_t steps = 10;
  /// Upper bound on the dense probability vectors of one component.
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
};

/// Pons-Latapy walktrap with exact t-step transition vectors and Ward
/// merging of adjacent communities, cut at maximal modularity. Each node
/// carries a self-loop, so walks use P = D^-1 (A + I) with d(k) = deg(k) + 1.
Partition walktrap(const LabeledGraph& g, const WalktrapOptions& options = {});

/// Random-walk distance r_uv = sqrt(sum_k (P^t_uk - P^t_vk)^2 / d(k)) with
/// the self-loop convention above.
double walktrap_distance(const LabeledGraph& g, NodeId u, NodeId v, std::size_t steps);

struct LeadingEigenvectorOptions {
  /// Ritz residual, relative to a bound on the matrix norm, at which the
  /// eigensolver stops.
  double tolerance = 1e-10;
  /// Operator applications allowed per community.
  std::size_t max_iterations = 200'000;
};

/// Newman's recursive spectral bisection on the generalized modularity
/// matrix. A community is split by the signs of the leading eigenvector
/// only when the split raises Q. Leading eigenpairs come from restarted
/// Lanczos. Throws NonConvergence naming the community.
Partition leading_eigenvector(const LabeledGraph& g, const LeadingEigenvectorOptions& options = {});

struct MembershipRow {
  std::string person;
  std::string address;
  std::optional<std::uint32_t> community;  // nullopt when unresolved
  std::optional<std::size_t> size;
};

struct MembershipReport {
  std::vector<MembershipRow> rows;
  std::size_t community_count = 0;
};

MembershipReport membership_report(const Partition& partition, const LabeledGraph& g,
                                   const FeedList& feed);

}  // namespace pathnet
