#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "forestlab/error.hpp"
#include "forestlab/io.hpp"

namespace forestlab::cli {

namespace {

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = toml_to_json(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& value : *a) out.push_back(toml_to_json(value));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  std::ostringstream text;
  node.visit([&](const auto& n) { text << n; });
  return text.str();
}

class Section {
 public:
  Section(const json& root, std::string name, std::vector<std::string>& diags,
          std::set<std::string> allowed)
      : name_(std::move(name)), diags_(diags) {
    if (!root.contains(name_)) return;
    const json& s = root.at(name_);
    if (!s.is_object()) {
      diags_.push_back(name_ + ": must be a table");
      return;
    }
    present_ = true;
    data_ = s;
    for (const auto& [key, value] : data_.items())
      if (!allowed.count(key)) diags_.push_back(path(key) + ": unknown field");
  }

  bool present() const { return present_; }
  bool has(const char* key) const { return data_.contains(key); }
  const json& raw(const char* key) const { return data_.at(key); }
  std::string path(const std::string& key) const { return name_ + "." + key; }
  void error(const std::string& key, const std::string& message) {
    diags_.push_back(path(key) + ": " + message);
  }

  void integer(const char* key, std::int64_t& out) {
    if (!has(key)) return;
    if (!raw(key).is_number_integer()) return error(key, "must be an integer");
    out = raw(key).get<std::int64_t>();
  }
  void count(const char* key, std::int64_t min, std::int64_t& out) {
    const std::int64_t before = out;
    integer(key, out);
    if (out < min) {
      error(key, "must be at least " + std::to_string(min) + " (got " + std::to_string(out) + ")");
      out = before;
    }
  }
  void number(const char* key, double& out) {
    if (!has(key)) return;
    if (!raw(key).is_number()) return error(key, "must be a number");
    out = raw(key).get<double>();
  }
  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    if (!raw(key).is_boolean()) return error(key, "must be true or false");
    out = raw(key).get<bool>();
  }
  std::optional<std::string> string(const char* key) {
    if (!has(key)) return std::nullopt;
    if (!raw(key).is_string()) {
      error(key, "must be a string");
      return std::nullopt;
    }
    return raw(key).get<std::string>();
  }

 private:
  std::string name_;
  std::vector<std::string>& diags_;
  bool present_ = false;
  json data_ = json::object();
};

template <typename Parser>
void parse_enum(Section& s, const char* key, Parser parser, auto& out, const char* choices) {
  if (auto text = s.string(key)) {
    if (auto value = parser(*text)) {
      out = *value;
    } else {
      s.error(key, "unknown value '" + *text + "' (expected " + choices + ")");
    }
  }
}

void parse_model(const json& root, const std::filesystem::path& base_dir, Config& c,
                 std::vector<std::string>& d) {
  Section s(root, "model", d,
            {"graph", "dimension", "side", "degree", "radius", "vertices", "edges", "wired",
             "decorate", "graph_file", "forest", "labels"});
  GraphSpec& g = c.model.graph;
  parse_enum(s, "graph", parse_graph_kind, g.kind,
             "torus, box, tree_ball, path, cycle, complete, edge_list");
  std::int64_t dimension = g.dimension, side = g.side, degree = g.degree, radius = g.radius;
  s.integer("dimension", dimension);
  s.integer("side", side);
  s.integer("degree", degree);
  s.integer("radius", radius);
  g.dimension = static_cast<int>(dimension);
  g.side = static_cast<int>(side);
  g.degree = static_cast<int>(degree);
  g.radius = static_cast<int>(radius);
  s.boolean("decorate", g.decorate);
  parse_enum(s, "forest", parse_forest_mode, c.model.forest, "fusf, wusf, fmsf, wmsf");
  if (s.has("labels")) c.model.labels = s.raw("labels");
  if (auto file = s.string("graph_file")) {
    std::filesystem::path p(*file);
    c.model.graph_file = p.is_absolute() ? p : base_dir / p;
  }

  // `vertices` is a count for path/cycle/complete and a table list for edge_list.
  if (s.has("vertices")) {
    const json& v = s.raw("vertices");
    if (v.is_number_integer()) {
      g.vertices = static_cast<int>(v.get<std::int64_t>());
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const json& item = v[i];
        const std::string where = "model.vertices[" + std::to_string(i) + "]";
        if (!item.is_object() || !item.contains("id") || !item["id"].is_number_integer()) {
          d.push_back(where + ": needs an integer id");
          continue;
        }
        VertexSpec spec;
        spec.id = item["id"].get<std::int64_t>();
        if (item.contains("boundary")) {
          if (item["boundary"].is_boolean()) spec.mark.boundary = item["boundary"].get<bool>();
          else d.push_back(where + ".boundary: must be true or false");
        }
        if (item.contains("stubs")) {
          if (item["stubs"].is_number_integer() && item["stubs"].get<std::int64_t>() >= 0)
            spec.mark.stubs = item["stubs"].get<std::uint32_t>();
          else d.push_back(where + ".stubs: must be a non-negative integer");
        }
        g.edge_list.vertices.push_back(spec);
      }
    } else {
      s.error("vertices", "must be a count or a list of vertex tables");
    }
  }
  if (s.has("edges")) {
    const json& e = s.raw("edges");
    bool ok = e.is_array();
    if (ok) {
      for (const json& pair : e) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer()) {
          ok = false;
          break;
        }
        g.edge_list.edges.emplace_back(pair[0].get<std::int64_t>(), pair[1].get<std::int64_t>());
      }
    }
    if (!ok) s.error("edges", "must be a list of [u, v] integer pairs");
  }
  if (s.has("wired")) {
    if (s.raw("wired").is_number_integer()) g.edge_list.wired = s.raw("wired").get<std::int64_t>();
    else s.error("wired", "must be a vertex id");
  }
  if (g.kind == GraphKind::edge_list && !c.model.graph_file && g.edge_list.vertices.empty())
    d.push_back("model.vertices: edge_list graphs need a vertex list or model.graph_file");
}

void parse_run(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "run", d, {"replicates", "seed", "cap"});
  std::int64_t replicates = static_cast<std::int64_t>(c.run.replicates);
  std::int64_t cap = static_cast<std::int64_t>(c.run.cap);
  s.count("replicates", 1, replicates);
  s.count("cap", 1, cap);
  c.run.replicates = static_cast<std::size_t>(replicates);
  c.run.cap = static_cast<std::size_t>(cap);
  if (s.has("seed")) {
    const json& seed = s.raw("seed");
    if (seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
      c.run.seed = seed.get<std::uint64_t>();
    else s.error("seed", "must be a non-negative integer");
  }
}

void parse_surgery(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "surgery", d, {"mode", "edge", "anchor", "radius"});
  c.surgery.present = s.present();
  SurgeryMode mode = SurgeryMode::usf;
  if (s.has("mode")) {
    parse_enum(s, "mode", parse_surgery_mode, mode, "usf, msf");
    c.surgery.mode = mode;
  }
  if (s.has("edge")) {
    const json& e = s.raw("edge");
    if (e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer())
      c.surgery.edge = std::pair(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
    else s.error("edge", "must be a pair [u, v] of vertex indices");
  }
  if (s.has("anchor")) {
    std::int64_t anchor = 0;
    s.integer("anchor", anchor);
    c.surgery.anchor = anchor;
  }
  s.integer("radius", c.surgery.radius);
}

void parse_walk(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "walk", d, {"anchor", "forward", "backward", "stationarity", "observable"});
  c.walk.present = s.present();
  s.integer("anchor", c.walk.anchor);
  s.count("forward", 0, c.walk.forward);
  s.count("backward", 0, c.walk.backward);
  s.boolean("stationarity", c.walk.stationarity);
  parse_enum(s, "observable", parse_observable, c.walk.observable,
             "omega_degree, is_leaf, constant_one, cluster_ball");
}

void parse_mtp(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "mtp", d, {"transport", "evaluation", "mark_probability"});
  c.mtp.present = s.present();
  parse_enum(s, "transport", parse_transport, c.mtp.transport.kind,
             "zero, shift, neighbor_split, cluster_uniform, nearest_mark, random_neighbor");
  if (auto text = s.string("evaluation")) {
    if (*text == "exact_symmetric") c.mtp.transport.evaluation = TransportEvaluation::exact_symmetric;
    else if (*text == "monte_carlo") c.mtp.transport.evaluation = TransportEvaluation::monte_carlo;
    else s.error("evaluation", "unknown value '" + *text + "' (expected exact_symmetric, monte_carlo)");
  }
  s.number("mark_probability", c.mtp.transport.mark_probability);
  if (c.mtp.transport.mark_probability <= 0.0 || c.mtp.transport.mark_probability > 1.0)
    s.error("mark_probability", "must lie in (0, 1]");
  if (c.mtp.transport.evaluation == TransportEvaluation::exact_symmetric &&
      !is_deterministic(c.mtp.transport.kind))
    s.error("evaluation", "randomized transports need monte_carlo evaluation");
}

void parse_experiment(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "experiment", d, {"statistic", "min_cluster_size", "min_sites", "permutations"});
  c.experiment.present = s.present();
  parse_enum(s, "statistic", parse_cluster_statistic, c.experiment.statistic,
             "leaf_density, mean_degree");
  s.count("min_cluster_size", 1, c.experiment.min_cluster_size);
  s.count("min_sites", 1, c.experiment.min_sites);
  s.count("permutations", 1, c.experiment.permutations);
}

void parse_analyze(const json& root, Config& c, std::vector<std::string>& d) {
  Section s(root, "analyze", d, {"ends_radius"});
  s.count("ends_radius", 0, c.analyze.ends_radius);
}

Loaded parse_json(const json& root, const std::filesystem::path& base_dir) {
  Loaded out;
  out.config.echo = root;
  static const std::set<std::string> sections{"model", "run", "surgery", "walk",
                                              "mtp", "experiment", "analyze"};
  for (const auto& [key, value] : root.items())
    if (!sections.count(key)) out.diagnostics.push_back(key + ": unknown section");
  parse_model(root, base_dir, out.config, out.diagnostics);
  parse_run(root, out.config, out.diagnostics);
  parse_surgery(root, out.config, out.diagnostics);
  parse_walk(root, out.config, out.diagnostics);
  parse_mtp(root, out.config, out.diagnostics);
  parse_experiment(root, out.config, out.diagnostics);
  parse_analyze(root, out.config, out.diagnostics);
  return out;
}

}  // namespace

Loaded load_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  try {
    const toml::table table = toml::parse(text);
    return parse_json(toml_to_json(table), base_dir);
  } catch (const toml::parse_error& err) {
    Loaded out;
    std::ostringstream msg;
    msg << "config: TOML syntax error at line " << err.source().begin.line << ": "
        << err.description();
    out.diagnostics.push_back(msg.str());
    return out;
  }
}

Loaded load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Loaded out;
    out.diagnostics.push_back("config: cannot read '" + path.string() + "'");
    return out;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_config_text(text.str(), path.parent_path());
}

Loaded default_config() { return parse_json(json::object(), "."); }

Graph build_window(const Config& config) {
  if (config.model.graph_file) {
    std::ifstream in(*config.model.graph_file, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::invalid_argument,
            "cannot read graph file '" + config.model.graph_file->string() + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& err) {
      fail(ErrorCode::invalid_argument, std::string("graph file is not valid JSON: ") + err.what());
    }
    Graph g = io::graph_from_json(j);
    return config.model.graph.decorate ? build_decorated(g) : g;
  }
  return build_graph(config.model.graph);
}

std::optional<EdgeId> find_edge(const Graph& g, std::int64_t u, std::int64_t v) {
  const auto n = static_cast<std::int64_t>(g.vertex_count());
  if (u < 0 || v < 0 || u >= n || v >= n) return std::nullopt;
  const auto ids = edges_between(g, static_cast<VertexId>(u), static_cast<VertexId>(v));
  if (ids.empty()) return std::nullopt;
  return ids.front();
}

void check_config(const Config& config, std::vector<std::string>& d) {
  Graph window;
  try {
    window = build_window(config);
  } catch (const Error& err) {
    d.push_back(std::string("model: ") + err.what());
    return;
  }
  if (window.is_wired()) {
    d.push_back("model: pass the unwired window; wired forest modes add the wired vertex");
    return;
  }
  const ForestMode mode = config.model.forest;
  if (is_wired(mode) && !window.has_boundary())
    d.push_back("model.forest: " + std::string(to_string(mode)) +
                " needs boundary stubs, and graph '" +
                std::string(to_string(config.model.graph.kind)) + "' has none");
  if (config.model.labels) {
    if (!is_minimal(mode)) {
      d.push_back("model.labels: labels only apply to fmsf and wmsf");
    } else if (!is_wired(mode) || window.has_boundary()) {
      const std::size_t host_edges =
          is_wired(mode) ? wire_boundary(window).edge_count() : window.edge_count();
      try {
        const EdgeLabels labels = io::labels_from_json(*config.model.labels, host_edges);
        if (!labels.is_injective()) d.push_back("model.labels: labels must be distinct");
      } catch (const Error& err) {
        d.push_back(std::string("model.labels: ") + err.what());
      }
    }
  }
  const auto n = static_cast<std::int64_t>(window.vertex_count());

  if (config.surgery.present) {
    const auto& s = config.surgery;
    if (s.radius < 0) d.push_back("surgery.radius: must be non-negative (got " +
                                  std::to_string(s.radius) + ")");
    std::optional<EdgeId> e;
    if (s.edge) {
      e = find_edge(window, s.edge->first, s.edge->second);
      if (!e) d.push_back("surgery.edge: no window edge joins those vertices");
    }
    if (s.anchor) {
      if (*s.anchor < 0 || *s.anchor >= n) {
        d.push_back("surgery.anchor: vertex outside the window");
      } else if (e && !window.edge(*e).touches(static_cast<VertexId>(*s.anchor))) {
        d.push_back("surgery.anchor: must be an endpoint of surgery.edge");
      } else if (s.radius >= 0) {
        const int ecc = eccentricity(window, static_cast<VertexId>(*s.anchor));
        if (s.radius >= ecc)
          d.push_back("surgery.radius: must be below the window radius " + std::to_string(ecc) +
                      " seen from the anchor");
      }
    }
  }
  if (config.walk.present && (config.walk.anchor < 0 || config.walk.anchor >= n))
    d.push_back("walk.anchor: vertex outside the window");
}

}  // namespace forestlab::cli
