// pathnet: build email graphs and run investigative searches on them.
//
//   pathnet build --config run.json
//   pathnet spnsa --graph out/bcc-netgraph-undirected.bin --feed feed.txt --format dot
//
// Exit codes: 0 ok, 1 usage, 2 data or format error, 3 non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "pathnet/centrality.hpp"
#include "pathnet/community.hpp"
#include "pathnet/error.hpp"
#include "pathnet/graph_io.hpp"
#include "pathnet/paths.hpp"
#include "pathnet/pipeline.hpp"
#include "pathnet/report.hpp"
#include "pathnet/spnsa.hpp"

namespace fs = std::filesystem;
using namespace pathnet;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNonConvergence = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::string out_dir;
  unsigned threads = 0;

  std::optional<PipelineConfig> loaded;

  const PipelineConfig* pipeline() {
    if (!config.empty() && !loaded) loaded = load_config(config);
    return loaded ? &*loaded : nullptr;
  }
  unsigned thread_count() {
    if (threads != 0) return threads;
    if (const auto* c = pipeline()) return c->threads;
    return 1;
  }
  std::optional<fs::path> output_dir() {
    if (!out_dir.empty()) return fs::path(out_dir);
    if (const auto* c = pipeline()) return c->out_dir;
    return std::nullopt;
  }
};

// Writes a text report into the output directory, or to stdout without one.
void emit(Globals& globals, const std::string& name, const std::string& contents) {
  if (const auto dir = globals.output_dir()) {
    OutputSet out(*dir);
    out.write(name, contents);
    for (const auto& path : out.commit()) std::cerr << "wrote " << path.generic_string() << '\n';
  } else {
    std::cout << contents;
  }
}

void emit_graph(Globals& globals, const std::string& stem, const std::string& output, GraphFormat format,
                const LabeledGraph& g, const GraphAttributes& attributes) {
  if (!output.empty()) {
    save_graph(output, format, g, attributes);
    std::cerr << "wrote " << output << '\n';
    return;
  }
  if (const auto dir = globals.output_dir()) {
    OutputSet out(*dir);
    const auto temp = out.stage(stem + "." + std::string(to_string(format)));
    {
      std::ofstream file(temp, std::ios::binary);
      write_graph(file, format, g, attributes);
      if (!file.flush()) throw IoError("cannot write " + temp.string());
    }
    for (const auto& path : out.commit()) std::cerr << "wrote " << path.generic_string() << '\n';
    return;
  }
  write_graph(std::cout, format, g, attributes);
}

GraphFormat format_option(const std::string& text) {
  const auto format = parse_graph_format(text);
  if (!format) throw UsageError("unknown format '" + text + "' (graphml, dot, json, bin)");
  return *format;
}

LabeledGraph load(const std::string& path) { return load_graph(path).graph; }

const LabeledGraph& undirected_view(const LabeledGraph& g, std::optional<LabeledGraph>& storage) {
  if (!g.directed()) return g;
  storage = to_undirected(g);
  return *storage;
}

NodeId node_by_label(const LabeledGraph& g, const std::string& label) {
  const auto v = g.find(normalize_address(label));
  if (!v) throw InvalidInput("address '" + label + "' is not in the graph");
  return *v;
}

FeedList feed_of_all_nodes(const LabeledGraph& g) {
  FeedList feed;
  for (const auto& label : g.labels()) feed.entries.push_back({label, {label}});
  return feed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Email network construction and investigative subnetwork search"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "pathnet 0.1.0");

  Globals globals;
  app.add_option("--config", globals.config, "Pipeline configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out-dir", globals.out_dir, "Directory for output files");
  app.add_option("--threads", globals.threads, "Worker threads")->check(CLI::PositiveNumber);

  // build
  auto* build = app.add_subcommand("build", "Parse, clean and split a transaction log into graphs");
  std::string input, rules, bcc_edges;
  std::vector<std::string> targets;
  build->add_option("--input", input, "Transaction CSV (overrides the config)");
  build->add_option("--rules", rules, "Cleaning rules file (overrides the config)");
  build->add_option("--bcc-edges", bcc_edges, "all | bcc_only")->check(CLI::IsMember({"all", "bcc_only"}));
  build->add_option("--target", targets, "Graph to build (repeatable)");

  // shared options of the analysis commands
  std::string graph_path, feed_path, output, format_text = "graphml";
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_path, "Graph file (.graphml or .bin)")->required()->check(CLI::ExistingFile);
  };
  auto add_feed = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--feed", feed_path, "Feed file of suspect accounts")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format,--out", format_text, "graphml | dot | json | bin");
    sub->add_option("-o,--output", output, "Output file");
  };

  auto* degrees = app.add_subcommand("degrees", "Degree of every feed address");
  add_graph(degrees);
  add_feed(degrees, true);
  std::string degree_mode = "total";
  bool histogram = false;
  degrees->add_option("--mode", degree_mode, "total | in | out")->check(CLI::IsMember({"total", "in", "out"}));
  degrees->add_flag("--histogram", histogram, "Degree distribution instead of per-address degrees");

  auto* distances = app.add_subcommand("distances", "Distance matrix of feed nodes and average path length");
  add_graph(distances);
  add_feed(distances, false);
  bool average = false;
  std::size_t sample = 0;
  std::uint64_t seed = 1;
  distances->add_flag("--average", average, "Average path length over all connected pairs");
  distances->add_option("--sample", sample, "Estimate the average from this many BFS sources");
  distances->add_option("--seed", seed, "Seed for --sample");

  auto* centrality = app.add_subcommand("centrality", "Betweenness or eigenvector centrality");
  add_graph(centrality);
  std::string kind = "betweenness";
  std::size_t top = 0;
  EigenvectorOptions eigen;
  centrality->add_option("--kind", kind, "betweenness | eigenvector")
      ->check(CLI::IsMember({"betweenness", "eigenvector"}));
  centrality->add_option("--top", top, "Keep the highest N rows");
  centrality->add_option("--tolerance", eigen.tolerance, "Eigenvector convergence tolerance");
  centrality->add_option("--max-iterations", eigen.max_iterations, "Eigenvector iteration cap");

  auto* kneigh = app.add_subcommand("kneigh", "Induced k-hop neighbourhood of an address");
  add_graph(kneigh);
  add_format(kneigh);
  std::string center;
  std::size_t hops = 1;
  kneigh->add_option("--center", center, "Center address")->required();
  kneigh->add_option("-k,--hops", hops, "Neighbourhood radius");

  auto* community = app.add_subcommand("community", "Community detection and feed membership");
  add_graph(community);
  add_feed(community, false);
  std::string method = "fastgreedy";
  WalktrapOptions walktrap_options;
  LeadingEigenvectorOptions leading_options;
  community->add_option("--method,--algo", method, "fastgreedy | walktrap | leading-eigenvector")
      ->check(CLI::IsMember({"fastgreedy", "walktrap", "leading-eigenvector"}));
  community->add_option("--steps", walktrap_options.steps, "Walktrap walk length");
  community->add_option("--max-iterations", leading_options.max_iterations, "Leading eigenvector iteration cap");

  auto* search = app.add_subcommand("spnsa", "Shortest paths network search from a feed");
  add_graph(search);
  add_feed(search, true);
  add_format(search);
  SearchOptions search_options;
  std::size_t radius = 0;
  search->add_option("--radius,--ego", radius, "Limit each ego to its k-neighbourhood");
  search->add_flag("--all-shortest", search_options.all_shortest, "Union of all shortest paths per pair");

  auto* loo = app.add_subcommand("leave-one-out", "Drop each person from the feed and check reappearance");
  add_graph(loo);
  add_feed(loo, true);
  std::size_t loo_radius = 0;
  loo->add_option("--radius,--ego", loo_radius, "Limit each ego to its k-neighbourhood");

  auto* exporter = app.add_subcommand("export", "Convert a graph file");
  add_graph(exporter);
  add_format(exporter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (build->parsed()) {
      PipelineConfig config;
      if (const auto* c = globals.pipeline()) config = *c;
      if (!input.empty()) config.input = input;
      if (!rules.empty()) config.rules = fs::path(rules);
      if (!bcc_edges.empty()) config.bcc_edges = *parse_bcc_edges(bcc_edges);
      if (!targets.empty()) {
        config.targets.clear();
        for (const auto& t : targets) {
          const auto target = parse_graph_target(t);
          if (!target) throw UsageError("unknown target '" + t + "'");
          config.targets.push_back(*target);
        }
      }
      if (config.input.empty()) throw UsageError("build needs --input or a config with 'input'");
      if (!globals.out_dir.empty()) config.out_dir = globals.out_dir;
      if (globals.threads != 0) config.threads = globals.threads;
      const auto result = run_build(config);
      for (const auto& path : result.files) std::cerr << "wrote " << path.generic_string() << '\n';
      return kOk;
    }

    const unsigned threads = globals.thread_count();
    const GraphFormat graph_format = format_option(format_text);
    const LabeledGraph g = load(graph_path);

    if (degrees->parsed()) {
      if (histogram) {
        emit(globals, "degree_histogram.csv", degree_histogram_csv(g));
      } else {
        const auto mode = degree_mode == "in" ? DegreeMode::in
                          : degree_mode == "out" ? DegreeMode::out
                                                 : DegreeMode::total;
        emit(globals, "degrees.csv", degree_report_csv(g, load_feed(feed_path), mode));
      }
    } else if (distances->parsed()) {
      if (feed_path.empty() && !average) throw UsageError("distances needs --feed and/or --average");
      std::ostringstream summary;
      if (!feed_path.empty()) {
        const auto nodes = resolve_feed(g, load_feed(feed_path)).nodes();
        const auto matrix = distance_matrix(g, nodes, threads);
        emit(globals, "distances.csv", distance_matrix_csv(g, matrix));
        if (nodes.size() > 1) summary << "mean_feed_distance," << format_number(mean_subset_distance(g, nodes)) << '\n';
      }
      if (average) {
        const double apl = sample > 0 ? sampled_average_path_length(g, sample, seed)
                                      : average_path_length(g, threads);
        summary << (sample > 0 ? "sampled_average_path_length," : "average_path_length,")
                << format_number(apl) << '\n';
      }
      std::cerr << summary.str();
      if (globals.output_dir() && !summary.str().empty()) emit(globals, "distance_summary.csv", summary.str());
    } else if (centrality->parsed()) {
      const auto scores = kind == "eigenvector" ? pathnet::eigenvector(g, eigen) : betweenness(g, threads);
      emit(globals, kind + ".csv", centrality_csv(g, scores, top));
    } else if (kneigh->parsed()) {
      const auto sub = k_neighbourhood(g, node_by_label(g, center), hops);
      emit_graph(globals, "kneigh-" + std::to_string(hops), output, graph_format, sub.graph, {});
    } else if (community->parsed()) {
      std::optional<LabeledGraph> storage;
      const LabeledGraph& u = undirected_view(g, storage);
      Partition partition;
      if (method == "fastgreedy")
        partition = fastgreedy(u);
      else if (method == "walktrap")
        partition = walktrap(u, walktrap_options);
      else
        partition = leading_eigenvector(u, leading_options);
      const FeedList feed = feed_path.empty() ? feed_of_all_nodes(u) : load_feed(feed_path);
      emit(globals, method + ".csv", membership_csv(membership_report(partition, u, feed)));
      std::cerr << "communities " << partition.count() << ", modularity " << format_number(partition.modularity)
                << '\n';
    } else if (search->parsed()) {
      if (radius > 0) search_options.ego_radius = radius;
      search_options.threads = threads;
      const auto feed = resolve_feed(g, load_feed(feed_path));
      for (const auto& a : feed.unresolved()) std::cerr << "unresolved " << a << '\n';
      const auto net = spnsa(g, feed, search_options);
      emit_graph(globals, "spnsa", output, graph_format, net.network.graph,
                 subnetwork_attributes(g, net));
      std::cerr << "nodes " << net.network.graph.node_count() << ", edges " << net.network.graph.edge_count()
                << ", components " << net.components.count() << '\n';
    } else if (loo->parsed()) {
      SearchOptions options;
      options.threads = threads;
      if (loo_radius > 0) options.ego_radius = loo_radius;
      const auto rows = leave_one_out(g, load_feed(feed_path), options);
      emit(globals, "leave_one_out.csv", leave_one_out_csv(g, rows));
    } else if (exporter->parsed()) {
      const auto annotated = load_graph(graph_path);
      emit_graph(globals, fs::path(graph_path).stem().string(), output, graph_format, annotated.graph,
                 annotated.attributes);
    }
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "pathnet: " << e.what() << '\n';
    return kUsage;
  } catch (const NonConvergence& e) {
    std::cerr << "pathnet: " << e.what() << " after " << e.iterations() << " iterations\n";
    return kNonConvergence;
  } catch (const Error& e) {
    std::cerr << "pathnet: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "pathnet: " << e.what() << '\n';
    return kData;
  }
}
