#include "app.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "forestlab/error.hpp"
#include "forestlab/io.hpp"
#include "forestlab/oracles.hpp"
#include "forestlab/parallel.hpp"

#ifndef FORESTLAB_VERSION
#define FORESTLAB_VERSION "unknown"
#endif

namespace forestlab::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t jobs = 1;
  // surgery overrides
  std::string mode;
  std::string edge;
  std::optional<std::int64_t> anchor;
  std::optional<std::int64_t> radius;
};

class Run {
 public:
  Run(std::string command, Config config, const Options& opts, std::ostream& out)
      : command_(std::move(command)), config_(std::move(config)), opts_(opts), out_(out),
        start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(opts_.out_dir);
  }

  const Config& config() const { return config_; }
  std::uint64_t seed() const { return config_.run.seed; }
  std::size_t jobs() const { return opts_.jobs; }

  void write(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(opts_.out_dir) / name;
    std::ofstream file(path, std::ios::binary);
    require(static_cast<bool>(file), ErrorCode::invalid_argument,
            "cannot write '" + path.string() + "'");
    file << content;
    artifacts_.push_back(name);
    out_ << "wrote " << path.string() << "\n";
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  json& summary() { return summary_; }

  void finish() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest = {{"command", command_},
                     {"config", config_.echo},
                     {"overrides", overrides()},
                     {"seed", config_.run.seed},
                     {"code_version", FORESTLAB_VERSION},
                     {"wall_time_seconds", seconds},
                     {"artifacts", artifacts_}};
    if (!summary_.empty()) manifest["summary"] = summary_;
    const auto path = std::filesystem::path(opts_.out_dir) / "manifest.json";
    std::ofstream(path, std::ios::binary) << manifest.dump(2) << "\n";
  }

 private:
  json overrides() const {
    json o = json::object();
    if (opts_.seed) o["seed"] = *opts_.seed;
    if (!opts_.mode.empty()) o["mode"] = opts_.mode;
    if (!opts_.edge.empty()) o["edge"] = opts_.edge;
    if (opts_.anchor) o["anchor"] = *opts_.anchor;
    if (opts_.radius) o["radius"] = *opts_.radius;
    return o;
  }

  std::string command_;
  Config config_;
  const Options& opts_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> artifacts_;
  json summary_ = json::object();
};

ForestMode with_class(ForestMode base, SurgeryMode mode) {
  const bool wired = is_wired(base);
  if (mode == SurgeryMode::msf) return wired ? ForestMode::wmsf : ForestMode::fmsf;
  return wired ? ForestMode::wusf : ForestMode::fusf;
}

Model model_for(const Config& c, ForestMode mode) {
  return make_model(std::make_shared<const Graph>(build_window(c)), mode);
}

ForestSample first_sample(const Config& c, const Model& model) {
  if (is_minimal(model.mode) && c.model.labels)
    return forest_from_labels(model, io::labels_from_json(*c.model.labels, model.host->edge_count()));
  Rng rng(derive_seed(c.run.seed, 0));
  return sample_forest(model, rng);
}

void cmd_gen(Run& run) {
  const Graph window = build_window(run.config());
  run.write_json("graph.json", io::graph_to_json(window));
  run.summary() = {{"vertices", window.vertex_count()}, {"edges", window.edge_count()}};
}

void cmd_sample(Run& run, bool minimal) {
  const Config& c = run.config();
  require(is_minimal(c.model.forest) == minimal, ErrorCode::invalid_argument,
          std::string("model.forest: ") + (minimal ? "sample-msf needs fmsf or wmsf"
                                                   : "sample-ust needs fusf or wusf"));
  const Model model = model_for(c, c.model.forest);
  std::vector<std::string> lines(c.run.replicates);
  std::optional<EdgeLabels> fixed;
  if (minimal && c.model.labels)
    fixed = io::labels_from_json(*c.model.labels, model.host->edge_count());
  parallel_for(c.run.replicates, run.jobs(), [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(c.run.seed, i);
    Rng rng(seed);
    const ForestSample sample = fixed ? forest_from_labels(model, *fixed) : sample_forest(model, rng);
    lines[i] = io::forest_record(i, seed, model.mode, sample.window_forest,
                                 sample.labels ? &*sample.labels : nullptr)
                   .dump();
  });
  std::string text;
  for (const auto& line : lines) text += line + "\n";
  run.write("forests.jsonl", text);
}

void cmd_surgery(Run& run) {
  const Config& c = run.config();
  const auto& s = c.surgery;
  require(s.edge.has_value(), ErrorCode::invalid_argument, "surgery.edge: required");
  require(s.anchor.has_value(), ErrorCode::invalid_argument, "surgery.anchor: required");
  const SurgeryMode mode = s.mode.value_or(surgery_mode(c.model.forest));
  const Model model = model_for(c, with_class(c.model.forest, mode));
  const auto e = find_edge(*model.window, s.edge->first, s.edge->second);
  require(e.has_value(), ErrorCode::invalid_argument, "surgery.edge: no such window edge");
  const ForestSample sample = first_sample(c, model);
  const SurgeryRecord rec =
      perform_surgery(model, sample, *e, static_cast<VertexId>(*s.anchor), static_cast<int>(s.radius));
  json j = io::surgery_to_json(*model.window, rec);
  if (rec.relabel) j["relabel"] = io::relabel_to_json(*rec.relabel, *sample.labels);
  run.write_json("surgery.json", j);
}

void cmd_enumerate(Run& run) {
  const Config& c = run.config();
  const Model model = model_for(c, c.model.forest);
  const auto trees = oracles::enumerate_spanning_trees(*model.host, c.run.cap);
  std::string text;
  for (std::size_t i = 0; i < trees.count(); ++i)
    text += io::tree_record(i, trees.trees[i]).dump() + "\n";
  run.write("trees.jsonl", text);
  std::ostringstream matrix_tree;
  matrix_tree << oracles::count_spanning_trees(*model.host);
  run.summary() = {{"trees", trees.count()},
                   {"matrix_tree_count", matrix_tree.str()},
                   {"wired", model.wired()}};
}

void cmd_analyze(Run& run) {
  const Config& c = run.config();
  const Model model = model_for(c, c.model.forest);
  std::vector<std::string> chunks(c.run.replicates);
  parallel_for(c.run.replicates, run.jobs(), [&](std::size_t i) {
    Rng rng(derive_seed(c.run.seed, i));
    const ForestSample sample = sample_forest(model, rng);
    std::ostringstream rows;
    write_cluster_csv_rows(rows, i,
                           cluster_stats(*model.window, sample.window_forest,
                                         static_cast<int>(c.analyze.ends_radius)));
    chunks[i] = rows.str();
  });
  std::ostringstream csv;
  write_cluster_csv_header(csv);
  for (const auto& chunk : chunks) csv << chunk;
  run.write("clusters.csv", csv.str());
}

void cmd_walk(Run& run) {
  const Config& c = run.config();
  const Model model = model_for(c, c.model.forest);
  const ForestSample sample = first_sample(c, model);
  Rng rng(derive_seed(c.run.seed, 1u << 20));
  const WalkTrace trace =
      delayed_srw(*model.window, sample.window_forest, static_cast<VertexId>(c.walk.anchor),
                  static_cast<std::size_t>(c.walk.forward),
                  static_cast<std::size_t>(c.walk.backward), rng);
  run.write_json("walk.json", {{"forest", io::forest_record(0, derive_seed(c.run.seed, 0),
                                                           model.mode, sample.window_forest)},
                               {"trace", io::walk_to_json(trace)}});
  if (c.walk.stationarity) {
    const auto report =
        stationarity_check(c.walk.observable, model, c.run.replicates, c.run.seed, run.jobs());
    run.write_json("stationarity.json", io::stationarity_to_json(report));
  }
}

void cmd_mtp(Run& run) {
  const Config& c = run.config();
  require(c.model.graph.kind == GraphKind::torus && !c.model.graph.decorate &&
              !c.model.graph_file,
          ErrorCode::invalid_argument, "model.graph: mtp-check runs on a torus");
  const MtpReport report = mtp_check(c.mtp.transport, c.model.graph.dimension, c.model.graph.side,
                                     c.model.forest, c.run.replicates, c.run.seed, run.jobs());
  run.write_json("mtp.json", io::mtp_to_json(report));
}

void cmd_indist(Run& run) {
  const Config& c = run.config();
  require(!c.model.graph_file, ErrorCode::invalid_argument,
          "model.graph_file: experiments need a generated graph");
  IndistConfig ic;
  ic.graph = c.model.graph;
  ic.mode = c.model.forest;
  ic.statistic = c.experiment.statistic;
  ic.min_cluster_size = static_cast<std::size_t>(c.experiment.min_cluster_size);
  ic.permutations = static_cast<std::size_t>(c.experiment.permutations);
  ic.replicates = c.run.replicates;
  ic.seed = c.run.seed;
  ic.jobs = run.jobs();
  run.write_json("indist.json", io::indist_to_json(indist_experiment(ic)));
}

void cmd_decorated(Run& run) {
  const Config& c = run.config();
  require(!c.model.graph_file, ErrorCode::invalid_argument,
          "model.graph_file: experiments need a generated graph");
  DecoratedConfig dc;
  dc.graph = c.model.graph;
  dc.mode = c.model.forest;
  dc.min_sites = static_cast<std::size_t>(c.experiment.min_sites);
  dc.replicates = c.run.replicates;
  dc.seed = c.run.seed;
  dc.jobs = run.jobs();
  run.write_json("decorated.json", io::decorated_to_json(decorated_experiment(dc)));
}

std::optional<std::pair<std::int64_t, std::int64_t>> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const auto u = std::stoll(a, &used);
    if (used != a.size()) return std::nullopt;
    const auto v = std::stoll(b, &used);
    if (used != b.size()) return std::nullopt;
    return std::pair(u, v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Loaded load(const Options& opts) {
  Loaded loaded = opts.config_path.empty() ? default_config() : load_config_file(opts.config_path);
  Config& c = loaded.config;
  if (opts.seed) c.run.seed = *opts.seed;
  if (!opts.mode.empty()) {
    c.surgery.present = true;
    if (auto m = parse_surgery_mode(opts.mode)) c.surgery.mode = m;
    else loaded.diagnostics.push_back("--mode: expected usf or msf");
  }
  if (!opts.edge.empty()) {
    c.surgery.present = true;
    if (auto p = parse_pair(opts.edge)) c.surgery.edge = p;
    else loaded.diagnostics.push_back("--edge: expected u,v");
  }
  if (opts.anchor) {
    c.surgery.present = true;
    c.surgery.anchor = opts.anchor;
  }
  if (opts.radius) {
    c.surgery.present = true;
    c.surgery.radius = *opts.radius;
  }
  if (loaded.diagnostics.empty()) check_config(c, loaded.diagnostics);
  return loaded;
}

int report_diagnostics(const std::vector<std::string>& diagnostics, std::ostream& err) {
  for (const auto& d : diagnostics) err << "error: " << d << "\n";
  return kValidation;
}

int execute(const std::string& command, const Options& opts,
            const std::function<void(Run&)>& body, std::ostream& out, std::ostream& err) {
  Loaded loaded = load(opts);
  if (!loaded.diagnostics.empty()) return report_diagnostics(loaded.diagnostics, err);
  try {
    Run run(command, std::move(loaded.config), opts, out);
    body(run);
    run.finish();
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return e.code() == ErrorCode::cap_exceeded ? kCapExceeded : kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"forestlab: random spanning forest laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  app.add_option("--config", opts.config_path, "TOML configuration file");
  app.add_option("--seed", opts.seed, "master seed (overrides run.seed)");
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", FORESTLAB_VERSION);

  std::function<void(Run&)> body;
  std::string command;
  auto add = [&](CLI::App& parent, const std::string& name, const std::string& help,
                 std::function<void(Run&)> fn) {
    CLI::App* sub = parent.add_subcommand(name, help);
    sub->callback([&, name, fn] {
      command = name;
      body = fn;
    });
    return sub;
  };
  add(app, "gen", "write the configured graph as JSON", cmd_gen);
  add(app, "sample-ust", "sample uniform spanning forests", [](Run& r) { cmd_sample(r, false); });
  add(app, "sample-msf", "sample minimal spanning forests", [](Run& r) { cmd_sample(r, true); });
  CLI::App* surgery = add(app, "surgery", "insert an edge by WIT surgery", cmd_surgery);
  surgery->add_option("--mode", opts.mode, "usf or msf");
  surgery->add_option("--edge", opts.edge, "window edge as u,v");
  surgery->add_option("--anchor", opts.anchor, "endpoint x of the edge");
  surgery->add_option("--radius", opts.radius, "ball radius r");
  add(app, "enumerate", "list every spanning tree (JSONL)", cmd_enumerate);
  add(app, "analyze", "per-cluster statistics (CSV)", cmd_analyze);
  add(app, "walk", "delayed random walk on a sampled forest", cmd_walk);
  add(app, "mtp-check", "mass transport check on the torus", cmd_mtp);
  CLI::App* experiment = app.add_subcommand("experiment", "statistical experiments");
  experiment->require_subcommand(1);
  add(*experiment, "indist", "cluster indistinguishability experiment", cmd_indist);
  add(*experiment, "decorated", "decorated-graph positive control", cmd_decorated);
  bool validate = false;
  app.add_subcommand("validate", "check a configuration without running")
      ->callback([&] { validate = true; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(FORESTLAB_VERSION) + "\n"
                                                          : app.help());
      return kOk;
    }
    err << "usage error: " << e.what() << "\n" << "run 'forestlab --help' for usage\n";
    return kUsage;
  }

  if (validate) {
    const Loaded loaded = load(opts);
    if (!loaded.diagnostics.empty()) return report_diagnostics(loaded.diagnostics, err);
    out << "ok\n";
    return kOk;
  }
  return execute(command, opts, body, out, err);
}

}  // namespace forestlab::cli
