#include "pathnet/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pathnet/error.hpp"
#include "pathnet/graph_io.hpp"
#include "pathnet/report.hpp"

namespace pathnet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string GraphTarget::name() const {
  return std::string(bcc ? "bcc-netgraph-" : "netgraph-") + (directed ? "directed" : "undirected");
}

std::vector<GraphTarget> all_graph_targets() {
  return {{false, true}, {false, false}, {true, true}, {true, false}};
}

std::optional<GraphTarget> parse_graph_target(std::string_view name) {
  for (const auto& t : all_graph_targets())
    if (t.name() == name) return t;
  return std::nullopt;
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config: expected a JSON object");

  static const std::set<std::string> known{"input", "rules", "bcc_edges", "targets", "out_dir", "threads"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw FormatError("config: unknown key '" + key + "'");

  auto path_of = [&](const json& value, const char* key) {
    if (!value.is_string()) throw FormatError(std::string("config: '") + key + "' must be a string");
    fs::path p = value.get<std::string>();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  PipelineConfig config;
  if (!doc.contains("input")) throw FormatError("config: missing 'input'");
  config.input = path_of(doc["input"], "input");
  if (doc.contains("rules") && !doc["rules"].is_null()) config.rules = path_of(doc["rules"], "rules");
  if (doc.contains("out_dir")) config.out_dir = path_of(doc["out_dir"], "out_dir");
  if (doc.contains("bcc_edges")) {
    const auto& v = doc["bcc_edges"];
    const auto mode = v.is_string() ? parse_bcc_edges(v.get<std::string>()) : std::nullopt;
    if (!mode) throw FormatError("config: 'bcc_edges' must be \"all\" or \"bcc_only\"");
    config.bcc_edges = *mode;
  }
  if (doc.contains("targets")) {
    const auto& v = doc["targets"];
    if (!v.is_array() || v.empty()) throw FormatError("config: 'targets' must be a non-empty array");
    config.targets.clear();
    for (const auto& item : v) {
      const auto target = item.is_string() ? parse_graph_target(item.get<std::string>()) : std::nullopt;
      if (!target) throw FormatError("config: unknown target " + item.dump());
      if (std::find(config.targets.begin(), config.targets.end(), *target) == config.targets.end())
        config.targets.push_back(*target);
    }
  }
  if (doc.contains("threads")) {
    const auto& v = doc["threads"];
    if (!v.is_number_unsigned() || v.get<unsigned>() == 0)
      throw FormatError("config: 'threads' must be a positive integer");
    config.threads = v.get<unsigned>();
  }
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  return parse_config(read_text_file(path), path.parent_path());
}

std::string write_config(const PipelineConfig& config) {
  json doc;
  doc["input"] = config.input.generic_string();
  doc["rules"] = config.rules ? json(config.rules->generic_string()) : json(nullptr);
  doc["bcc_edges"] = std::string(to_string(config.bcc_edges));
  doc["targets"] = json::array();
  for (const auto& t : config.targets) doc["targets"].push_back(t.name());
  doc["out_dir"] = config.out_dir.generic_string();
  doc["threads"] = config.threads;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buffer.str();
}

FeedList load_feed(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  return parse_feed(in);
}

CleaningRules load_rules(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  return parse_rules(in);
}

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ignored;
  for (const auto& [temp, final_path] : staged_) fs::remove(temp, ignored);
}

fs::path OutputSet::stage(const std::string& name) {
  fs::path final_path = dir_ / name;
  fs::path temp = dir_ / ("." + name + ".partial");
  staged_.emplace_back(temp, final_path);
  return temp;
}

void OutputSet::write(const std::string& name, std::string_view contents) {
  const auto temp = stage(name);
  std::ofstream out(temp, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("cannot write " + (dir_ / name).string());
}

std::vector<fs::path> OutputSet::commit() {
  std::vector<fs::path> files;
  for (const auto& [temp, final_path] : staged_) {
    std::error_code ec;
    fs::rename(temp, final_path, ec);
    if (ec) throw IoError("cannot move " + final_path.string() + " into place: " + ec.message());
    files.push_back(final_path);
  }
  committed_ = true;
  return files;
}

BuildResult run_build(const PipelineConfig& config) {
  if (config.targets.empty()) throw InvalidInput("no graph targets configured");
  std::istringstream input(read_text_file(config.input));
  const ParsedLog log = parse_log(input);
  const CleaningRules rules = config.rules ? load_rules(*config.rules) : CleaningRules{};
  const CleanResult cleaned = clean(log.records, rules);
  if (cleaned.kept.empty()) throw InvalidInput("no records survive parsing and cleaning");
  const CorpusSplit split = split_by_bcc(cleaned.kept, config.bcc_edges);

  OutputSet outputs(config.out_dir);
  json report;
  report["input"] = {{"file", config.input.filename().generic_string()},
                     {"rows", log.records.size() + log.rejects.size()},
                     {"parsed", log.records.size()},
                     {"rejected", log.rejects.size()}};
  json per_rule = json::array();
  for (const auto& rc : cleaned.report.per_rule)
    per_rule.push_back({{"rule", rc.rule}, {"dropped", rc.dropped}});
  report["cleaning"] = {{"input", cleaned.report.input},
                        {"kept", cleaned.report.kept},
                        {"per_rule", per_rule}};
  const auto& s = split.stats;
  report["split"] = {{"bcc_edges", std::string(to_string(config.bcc_edges))},
                     {"records", s.records},
                     {"messages", s.messages},
                     {"tocc_messages", s.tocc_messages},
                     {"tocc_records", s.tocc_records},
                     {"bcc_messages", s.bcc_messages},
                     {"bcc_records", s.bcc_records},
                     {"discarded_records", s.discarded_records}};

  std::ostringstream rejects;
  rejects << "line,reason\n";
  for (const auto& r : log.rejects) rejects << r.line << ',' << csv_field(r.reason) << '\n';
  outputs.write("rejects.csv", rejects.str());

  for (const auto& target : config.targets) {
    const auto& records = target.bcc ? split.bcc_records : split.tocc_records;
    const BuiltGraph built = build_graph(records, target.directed);
    const auto& g = built.graph;
    const auto name = target.name();

    for (auto format : {GraphFormat::graphml, GraphFormat::binary}) {
      const auto temp = outputs.stage(name + "." + std::string(to_string(format)));
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      write_graph(out, format, g);
      out.flush();
      if (!out) throw IoError("cannot write " + temp.string());
    }
    outputs.write(name + ".degrees.csv", degree_histogram_csv(g));

    json histogram = json::array();
    for (const auto& [d, count] : degree_histogram(g)) histogram.push_back({d, count});
    const auto components = connected_components(g);
    std::size_t largest = 0;
    for (auto size : components.sizes) largest = std::max(largest, size);
    report["graphs"][name] = {
        {"directed", target.directed},
        {"group", target.bcc ? "bcc" : "tocc"},
        {"nodes", g.node_count()},
        {"edges", g.edge_count()},
        {"records", built.records},
        {"self_loops_dropped", built.self_loops_dropped},
        {"average_degree", g.node_count() == 0 ? 0.0 : average_degree(g)},
        {"weak_components", components.count()},
        {"largest_component", largest},
        {"degree_histogram", histogram},
    };
  }

  std::string rules_text = write_rules(rules);
  outputs.write("rules.txt", rules_text);
  outputs.write("config.json", write_config(config));
  BuildResult result;
  result.report_json = report.dump(2) + "\n";
  outputs.write("report.json", result.report_json);
  result.files = outputs.commit();
  return result;
}

}  // namespace pathnet
