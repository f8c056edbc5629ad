#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathnet/graph.hpp"

namespace pathnet {

/// Optional annotations carried next to a graph. Each vector is either
/// empty or sized to the node (edge) count; empty strings mean "absent".
struct GraphAttributes {
  std::vector<std::string> roles;       // per node, "feed|mm" style
  std::vector<std::string> persons;     // per node
  std::vector<std::string> provenance;  // per edge, aligned with edges()

  bool empty() const noexcept { return roles.empty() && persons.empty() && provenance.empty(); }
  friend bool operator==(const GraphAttributes&, const GraphAttributes&) = default;
};

struct AnnotatedGraph {
  LabeledGraph graph;
  GraphAttributes attributes;
};

enum class GraphFormat { graphml, dot, json, binary };

std::string_view to_string(GraphFormat format);
std::optional<GraphFormat> parse_graph_format(std::string_view text);

void write_graphml(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes = {});
/// Accepts the schema written by write_graphml and plain GraphML with
/// node ids only. Throws FormatError on malformed input.
AnnotatedGraph read_graphml(std::istream& in);

void write_dot(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes = {});
void write_json(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes = {});

/// Versioned little-endian edge list; annotations are not stored.
void write_binary(std::ostream& out, const LabeledGraph& g);
LabeledGraph read_binary(std::istream& in);

void write_graph(std::ostream& out, GraphFormat format, const LabeledGraph& g,
                 const GraphAttributes& attributes = {});

/// Reads a GraphML or binary cache file, chosen by content.
AnnotatedGraph load_graph(const std::filesystem::path& path);

/// Writes via a temporary sibling and renames into place.
void save_graph(const std::filesystem::path& path, GraphFormat format, const LabeledGraph& g,
                const GraphAttributes& attributes = {});

}  // namespace pathnet
