#include "pathnet/graph_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "pathnet/error.hpp"

namespace pathnet {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'N', 'E', 'T', 'G', 'R', 'F', '1'};
constexpr std::uint32_t kBinaryVersion = 1;

void check_attributes(const LabeledGraph& g, const GraphAttributes& a) {
  auto sized = [](const auto& v, std::size_t n) { return v.empty() || v.size() == n; };
  if (!sized(a.roles, g.node_count()) || !sized(a.persons, g.node_count()) ||
      !sized(a.provenance, g.edge_count()))
    throw ContractViolation("graph attributes do not match the graph");
}

const std::string& attribute(const std::vector<std::string>& values, std::size_t i) {
  static const std::string none;
  return values.empty() ? none : values[i];
}

std::string xml_escaped(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_quoted(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

// Highest-priority role decides the colour.
std::string_view role_colour(std::string_view roles) {
  auto has = [&](std::string_view role) {
    std::size_t pos = 0;
    while (pos <= roles.size()) {
      const auto bar = std::min(roles.find('|', pos), roles.size());
      if (roles.substr(pos, bar - pos) == role) return true;
      pos = bar + 1;
    }
    return false;
  };
  if (has("feed")) return "red";
  if (has("mm")) return "orange";
  if (has("mi")) return "gold";
  if (has("intermediary")) return "lightblue";
  return {};
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw FormatError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw FormatError("truncated binary graph");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= std::uint64_t{bytes[i]} << (8 * i);
  return static_cast<T>(value);
}

}  // namespace

std::string_view to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::graphml: return "graphml";
    case GraphFormat::dot: return "dot";
    case GraphFormat::json: return "json";
    case GraphFormat::binary: return "bin";
  }
  return "?";
}

std::optional<GraphFormat> parse_graph_format(std::string_view text) {
  for (auto f : {GraphFormat::graphml, GraphFormat::dot, GraphFormat::json, GraphFormat::binary})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

void write_graphml(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes) {
  check_attributes(g, attributes);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n"
      << "  <key id=\"person\" for=\"node\" attr.name=\"person\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      << "  <key id=\"provenance\" for=\"edge\" attr.name=\"provenance\" attr.type=\"string\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"" << (g.directed() ? "directed" : "undirected") << "\">\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "    <node id=\"n" << v << "\">\n"
        << "      <data key=\"label\">" << xml_escaped(g.label(v)) << "</data>\n";
    if (const auto& role = attribute(attributes.roles, v); !role.empty())
      out << "      <data key=\"role\">" << xml_escaped(role) << "</data>\n";
    if (const auto& person = attribute(attributes.persons, v); !person.empty())
      out << "      <data key=\"person\">" << xml_escaped(person) << "</data>\n";
    out << "    </node>\n";
  }
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    out << "    <edge id=\"e" << i << "\" source=\"n" << e.source << "\" target=\"n" << e.target
        << "\">\n"
        << "      <data key=\"weight\">" << e.weight << "</data>\n";
    if (const auto& prov = attribute(attributes.provenance, i); !prov.empty())
      out << "      <data key=\"provenance\">" << xml_escaped(prov) << "</data>\n";
    out << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

AnnotatedGraph read_graphml(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw FormatError(std::string("GraphML: ") + e.what());
  }
  const auto root = doc.get_child_optional("graphml");
  if (!root) throw FormatError("GraphML: missing <graphml> root");

  // key id -> attribute name
  std::map<std::string, std::string> key_names;
  for (const auto& [tag, child] : *root) {
    if (tag != "key") continue;
    const auto id = child.get<std::string>("<xmlattr>.id", "");
    key_names[id] = child.get<std::string>("<xmlattr>.attr.name", id);
  }
  const auto graph = root->get_child_optional("graph");
  if (!graph) throw FormatError("GraphML: missing <graph>");
  const auto edgedefault = graph->get<std::string>("<xmlattr>.edgedefault", "directed");
  if (edgedefault != "directed" && edgedefault != "undirected")
    throw FormatError("GraphML: unknown edgedefault '" + edgedefault + "'");

  auto data_of = [&](const pt::ptree& element) {
    std::map<std::string, std::string> values;
    for (const auto& [tag, child] : element) {
      if (tag != "data") continue;
      const auto key = child.get<std::string>("<xmlattr>.key", "");
      const auto it = key_names.find(key);
      values[it == key_names.end() ? key : it->second] = child.data();
    }
    return values;
  };

  GraphBuilder builder(edgedefault == "directed");
  std::map<std::string, NodeId> by_id;
  std::vector<std::string> roles, persons;
  struct PendingEdge {
    NodeId u, v;
    Weight w;
    std::string provenance;
  };
  std::vector<PendingEdge> pending;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw FormatError("GraphML: node without id");
      auto data = data_of(child);
      const std::string label = data.contains("label") ? data["label"] : id;
      if (builder.find(label)) throw FormatError("GraphML: duplicate node label '" + label + "'");
      const NodeId v = builder.intern(label);
      if (!by_id.emplace(id, v).second) throw FormatError("GraphML: duplicate node id '" + id + "'");
      roles.push_back(data["role"]);
      persons.push_back(data["person"]);
    } else if (tag == "edge") {
      auto endpoint = [&](const char* attr) {
        const auto id = child.get<std::string>(std::string("<xmlattr>.") + attr, "");
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw FormatError("GraphML: edge refers to unknown node '" + id + "'");
        return it->second;
      };
      auto data = data_of(child);
      const Weight w = data.contains("weight") ? parse_u64(data["weight"], "edge weight") : 1;
      pending.push_back({endpoint("source"), endpoint("target"), w, data["provenance"]});
    }
  }

  std::map<std::pair<NodeId, NodeId>, std::string> provenance_of;
  bool any_provenance = false;
  for (auto& e : pending) {
    builder.add_edge(e.u, e.v, e.w);
    if (!builder.directed() && e.v < e.u) std::swap(e.u, e.v);
    any_provenance = any_provenance || !e.provenance.empty();
    provenance_of[{e.u, e.v}] = std::move(e.provenance);
  }

  AnnotatedGraph result{std::move(builder).build(), {}};
  auto keep_if_any = [](std::vector<std::string>& values) {
    for (const auto& v : values)
      if (!v.empty()) return;
    values.clear();
  };
  keep_if_any(roles);
  keep_if_any(persons);
  result.attributes.roles = std::move(roles);
  result.attributes.persons = std::move(persons);
  if (any_provenance) {
    for (const Edge& e : result.graph.edges())
      result.attributes.provenance.push_back(provenance_of[{e.source, e.target}]);
  }
  return result;
}

void write_dot(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes) {
  check_attributes(g, attributes);
  const char* arrow = g.directed() ? " -> " : " -- ";
  out << (g.directed() ? "digraph" : "graph") << " pathnet {\n"
      << "  node [shape=ellipse, style=filled, fillcolor=white];\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  n" << v << " [label=" << dot_quoted(g.label(v));
    if (const auto& role = attribute(attributes.roles, v); !role.empty()) {
      out << ", role=" << dot_quoted(role);
      if (const auto colour = role_colour(role); !colour.empty())
        out << ", fillcolor=" << dot_quoted(colour);
    }
    if (const auto& person = attribute(attributes.persons, v); !person.empty())
      out << ", person=" << dot_quoted(person);
    out << "];\n";
  }
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    out << "  n" << e.source << arrow << "n" << e.target << " [weight=" << e.weight;
    if (const auto& prov = attribute(attributes.provenance, i); !prov.empty())
      out << ", provenance=" << dot_quoted(prov);
    out << "];\n";
  }
  out << "}\n";
}

void write_json(std::ostream& out, const LabeledGraph& g, const GraphAttributes& attributes) {
  check_attributes(g, attributes);
  nlohmann::json doc;
  doc["directed"] = g.directed();
  doc["nodes"] = nlohmann::json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    nlohmann::json node{{"id", v}, {"label", g.label(v)}};
    if (const auto& role = attribute(attributes.roles, v); !role.empty()) node["role"] = role;
    if (const auto& person = attribute(attributes.persons, v); !person.empty()) node["person"] = person;
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = nlohmann::json::array();
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    nlohmann::json edge{{"source", edges[i].source}, {"target", edges[i].target},
                        {"weight", edges[i].weight}};
    if (const auto& prov = attribute(attributes.provenance, i); !prov.empty()) edge["provenance"] = prov;
    doc["edges"].push_back(std::move(edge));
  }
  out << doc.dump(2) << '\n';
}

void write_binary(std::ostream& out, const LabeledGraph& g) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kBinaryVersion);
  put_le<std::uint8_t>(out, g.directed() ? 1 : 0);
  put_le<std::uint64_t>(out, g.node_count());
  for (const auto& label : g.labels()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(label.size()));
    out.write(label.data(), static_cast<std::streamsize>(label.size()));
  }
  put_le<std::uint64_t>(out, g.edge_count());
  for (const Edge& e : g.edges()) {
    put_le<std::uint32_t>(out, e.source);
    put_le<std::uint32_t>(out, e.target);
    put_le<std::uint64_t>(out, e.weight);
  }
}

LabeledGraph read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw FormatError("not a binary graph cache");
  if (const auto version = get_le<std::uint32_t>(in); version != kBinaryVersion)
    throw FormatError("unsupported binary graph version " + std::to_string(version));
  const auto directed = get_le<std::uint8_t>(in);
  if (directed > 1) throw FormatError("corrupt binary graph header");
  GraphBuilder builder(directed == 1);
  const auto nodes = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < nodes; ++i) {
    std::string label(get_le<std::uint32_t>(in), '\0');
    if (!in.read(label.data(), static_cast<std::streamsize>(label.size())))
      throw FormatError("truncated binary graph");
    if (builder.find(label)) throw FormatError("duplicate label in binary graph");
    builder.intern(label);
  }
  const auto edges = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < edges; ++i) {
    const auto u = get_le<std::uint32_t>(in);
    const auto v = get_le<std::uint32_t>(in);
    const auto w = get_le<std::uint64_t>(in);
    if (u >= nodes || v >= nodes) throw FormatError("binary graph edge out of range");
    builder.add_edge(u, v, w);
  }
  return std::move(builder).build();
}

void write_graph(std::ostream& out, GraphFormat format, const LabeledGraph& g,
                 const GraphAttributes& attributes) {
  switch (format) {
    case GraphFormat::graphml: write_graphml(out, g, attributes); break;
    case GraphFormat::dot: write_dot(out, g, attributes); break;
    case GraphFormat::json: write_json(out, g, attributes); break;
    case GraphFormat::binary: write_binary(out, g); break;
  }
}

AnnotatedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const auto got = in.gcount();
  in.clear();
  in.seekg(0);
  if (got == static_cast<std::streamsize>(head.size()) && head == kMagic)
    return AnnotatedGraph{read_binary(in), {}};
  try {
    return read_graphml(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_graph(const std::filesystem::path& path, GraphFormat format, const LabeledGraph& g,
                const GraphAttributes& attributes) {
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_graph(out, format, g, attributes);
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      throw IoError("cannot write " + path.string());
    }
  }
  std::filesystem::rename(temp, path);
}

}  // namespace pathnet
