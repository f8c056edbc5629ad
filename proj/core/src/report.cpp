#include "pathnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "pathnet/error.hpp"

namespace pathnet {

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw ContractViolation("number formatting failed");
  return std::string(buffer, ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string degree_report_csv(const LabeledGraph& g, const FeedList& feed, DegreeMode mode) {
  std::ostringstream out;
  out << "person,address,degree\n";
  for (const auto& person : match_feed(g, feed).persons) {
    for (const auto& a : person.addresses) {
      out << csv_field(person.person) << ',' << csv_field(a.address) << ',';
      if (a.node)
        out << degree(g, *a.node, mode);
      else
        out << '-';
      out << '\n';
    }
  }
  return out.str();
}

std::string distance_matrix_csv(const LabeledGraph& g, const DistanceMatrix& matrix) {
  std::ostringstream out;
  out << "address";
  for (NodeId v : matrix.index) out << ',' << csv_field(g.label(v));
  out << '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out << csv_field(g.label(matrix.index[r]));
    for (std::size_t c = 0; c < matrix.size(); ++c) {
      const Distance d = matrix.at(r, c);
      out << ',';
      if (d == kUnreachable)
        out << "Inf";
      else
        out << d;
    }
    out << '\n';
  }
  return out.str();
}

std::string centrality_csv(const LabeledGraph& g, const CentralityScores& scores, std::size_t top) {
  if (scores.scores.size() != g.node_count())
    throw ContractViolation("scores do not belong to this graph");
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return scores.scores[a] > scores.scores[b]; });
  if (top != 0 && order.size() > top) order.resize(top);
  std::ostringstream out;
  out << "address,score\n";
  for (NodeId v : order) out << csv_field(g.label(v)) << ',' << format_number(scores.scores[v]) << '\n';
  return out.str();
}

std::string membership_csv(const MembershipReport& report) {
  std::ostringstream out;
  out << "person,address,community,size\n";
  for (const auto& row : report.rows) {
    out << csv_field(row.person) << ',' << csv_field(row.address) << ',';
    if (row.community)
      out << *row.community << ',' << *row.size;
    else
      out << "-,-";
    out << '\n';
  }
  out << "total_communities," << report.community_count << '\n';
  return out.str();
}

std::string leave_one_out_csv(const LabeledGraph& g, std::span<const LeaveOneOutRow> rows) {
  std::ostringstream out;
  out << "person,addresses,resolved,reappears\n";
  for (const auto& row : rows) {
    std::string addresses;
    for (const auto& a : row.addresses) {
      if (!addresses.empty()) addresses += ' ';
      addresses += a;
    }
    std::string resolved;
    for (NodeId v : row.nodes) {
      if (!resolved.empty()) resolved += ' ';
      resolved += g.label(v);
    }
    out << csv_field(row.person) << ',' << csv_field(addresses) << ','
        << csv_field(resolved.empty() ? "-" : resolved) << ','
        << (row.reappears ? "✓" : "✗") << '\n';
  }
  return out.str();
}

std::string degree_histogram_csv(const LabeledGraph& g) {
  std::ostringstream out;
  out << "degree,frequency\n";
  for (const auto& [d, count] : degree_histogram(g)) out << d << ',' << count << '\n';
  return out.str();
}

std::string format_provenance(const LabeledGraph& g, std::span<const PathTag> tags) {
  std::string out;
  for (const auto& tag : tags) {
    if (!out.empty()) out += "; ";
    out += to_string(tag.kind);
    out += ' ';
    out += g.label(tag.ego);
    out += ' ';
    out += g.label(tag.source);
    out += ' ';
    out += g.label(tag.target);
  }
  return out;
}

GraphAttributes subnetwork_attributes(const LabeledGraph& g, const InvestigativeSubnetwork& net) {
  GraphAttributes attributes;
  for (RoleSet roles : net.roles) attributes.roles.push_back(role_names(roles));
  attributes.persons = net.persons;
  for (const auto& tags : net.provenance) attributes.provenance.push_back(format_provenance(g, tags));
  return attributes;
}

}  // namespace pathnet
