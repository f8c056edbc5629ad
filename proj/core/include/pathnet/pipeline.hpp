#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathnet/feed.hpp"
#include "pathnet/ingest.hpp"

namespace pathnet {

/// One of the four graphs the build stage can produce.
struct GraphTarget {
  bool bcc = false;  // BCC group instead of the TO/CC group
  bool directed = false;

  /// "netgraph-directed", "bcc-netgraph-undirected", ...
  std::string name() const;
  friend bool operator==(const GraphTarget&, const GraphTarget&) = default;
};

std::optional<GraphTarget> parse_graph_target(std::string_view name);
std::vector<GraphTarget> all_graph_targets();

struct PipelineConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> rules;
  BccEdges bcc_edges = BccEdges::all;
  std::vector<GraphTarget> targets = all_graph_targets();
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
};

/// Reads the JSON config. Relative paths are taken relative to the
/// config file's directory. Throws FormatError on unknown keys or values.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(std::string_view json, const std::filesystem::path& base_dir = {});
/// Canonical JSON text with sorted keys.
std::string write_config(const PipelineConfig& config);

std::string read_text_file(const std::filesystem::path& path);
FeedList load_feed(const std::filesystem::path& path);
CleaningRules load_rules(const std::filesystem::path& path);

/// Collects output files as temporaries and moves them into place on
/// commit(). Uncommitted temporaries are removed on destruction, so a
/// failed stage leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Temporary path to write `name` to; it becomes dir/name on commit.
  std::filesystem::path stage(const std::string& name);
  void write(const std::string& name, std::string_view contents);
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
  bool committed_ = false;
};

struct BuildResult {
  std::vector<std::filesystem::path> files;
  std::string report_json;
};

/// Parse, clean, split and build every configured graph. Writes
/// <target>.graphml, <target>.bin and <target>.degrees.csv per target plus
/// report.json and config.json. Throws InvalidInput("no records") when
/// nothing survives cleaning.
BuildResult run_build(const PipelineConfig& config);

}  // namespace pathnet
