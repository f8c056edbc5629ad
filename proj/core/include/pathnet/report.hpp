#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathnet/centrality.hpp"
#include "pathnet/community.hpp"
#include "pathnet/feed.hpp"
#include "pathnet/graph.hpp"
#include "pathnet/graph_io.hpp"
#include "pathnet/paths.hpp"
#include "pathnet/spnsa.hpp"

namespace pathnet {

// CSV and text renderers for the command-line reports. Every function is
// deterministic: numbers use the shortest round-trip representation and
// row order only depends on the inputs.

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// RFC-4180 quoting, applied only when needed.
std::string csv_field(std::string_view text);

/// person,address,degree; unresolved addresses get "-".
std::string degree_report_csv(const LabeledGraph& g, const FeedList& feed,
                              DegreeMode mode = DegreeMode::total);

/// Square matrix with address headers; unreachable pairs are "Inf".
std::string distance_matrix_csv(const LabeledGraph& g, const DistanceMatrix& matrix);

/// address,score sorted by descending score, ties by node id. `top` = 0
/// keeps every row.
std::string centrality_csv(const LabeledGraph& g, const CentralityScores& scores,
                           std::size_t top = 0);

/// person,address,community,size followed by a total_communities line.
std::string membership_csv(const MembershipReport& report);

/// person,addresses,resolved,reappears; reappears is a check or cross mark.
std::string leave_one_out_csv(const LabeledGraph& g, std::span<const LeaveOneOutRow> rows);

/// degree,frequency for log-log plotting.
std::string degree_histogram_csv(const LabeledGraph& g);

/// "kind ego source target" per tag, joined by "; ", using labels of g.
std::string format_provenance(const LabeledGraph& g, std::span<const PathTag> tags);

/// Roles, feed person names and provenance of a search result, ready for export.
GraphAttributes subnetwork_attributes(const LabeledGraph& g, const InvestigativeSubnetwork& net);

}  // namespace pathnet
