#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forestlab/analytics.hpp"
#include "forestlab/model.hpp"
#include "forestlab/walks.hpp"

namespace forestlab::cli {

using nlohmann::json;

struct ModelSection {
  GraphSpec graph;
  std::optional<std::filesystem::path> graph_file;
  ForestMode forest = ForestMode::fusf;
  std::optional<json> labels;  // host labels for minimal forests
};

struct RunSection {
  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  std::size_t cap = 100000;
};

struct SurgerySection {
  bool present = false;
  std::optional<SurgeryMode> mode;
  std::optional<std::pair<std::int64_t, std::int64_t>> edge;
  std::optional<std::int64_t> anchor;
  std::int64_t radius = 0;
};

struct WalkSection {
  bool present = false;
  std::int64_t anchor = 0;
  std::int64_t forward = 100;
  std::int64_t backward = 100;
  bool stationarity = false;
  Observable observable = Observable::omega_degree;
};

struct MtpSection {
  bool present = false;
  TransportSpec transport;
};

struct ExperimentSection {
  bool present = false;
  ClusterStatistic statistic = ClusterStatistic::leaf_density;
  std::int64_t min_cluster_size = 10;
  std::int64_t min_sites = 200;
  std::int64_t permutations = 999;
};

struct AnalyzeSection {
  std::int64_t ends_radius = 1;
};

struct Config {
  ModelSection model;
  RunSection run;
  SurgerySection surgery;
  WalkSection walk;
  MtpSection mtp;
  ExperimentSection experiment;
  AnalyzeSection analyze;
  json echo = json::object();  // the configuration file as read
};

struct Loaded {
  Config config;
  std::vector<std::string> diagnostics;  // "field: message"
};

/// Parses a TOML configuration. Problems are collected as diagnostics naming
/// the offending field rather than thrown.
Loaded load_config_file(const std::filesystem::path& path);
Loaded load_config_text(const std::string& text, const std::filesystem::path& base_dir);
/// Defaults only (used when no --config is given).
Loaded default_config();

/// Builds the window described by the model section.
Graph build_window(const Config& config);

/// Cross-field checks that need the graph: wired modes need boundary stubs,
/// radii below the window radius, anchors inside the window, label counts.
void check_config(const Config& config, std::vector<std::string>& diagnostics);

/// Edge id joining the given window vertices (smallest id when parallel).
std::optional<EdgeId> find_edge(const Graph& g, std::int64_t u, std::int64_t v);

}  // namespace forestlab::cli
