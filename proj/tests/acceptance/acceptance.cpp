// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "app.hpp"
#include "forestlab/analytics.hpp"
#include "forestlab/error.hpp"
#include "forestlab/oracles.hpp"
#include "forestlab/stats.hpp"
#include "forestlab/surgery.hpp"
#include "forestlab/walks.hpp"
#include "support/generators.hpp"
#include "support/laws.hpp"

using namespace forestlab;
namespace fs = std::filesystem;

namespace {

constexpr double kAlpha = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool subset(const ForestConfig& a, const ForestConfig& b) {
  for (EdgeId e : a.edges())
    if (!b.contains(e)) return false;
  return true;
}

// 1 ------------------------------------------------------------------------

Outcome sampler_law() {
  const auto start = Clock::now();
  Outcome out;
  Rng rng(1001);
  const std::size_t n = 100000;
  const std::vector<std::pair<std::string, Graph>> graphs{
      {"triangle", build_cycle(3)}, {"C4", build_cycle(4)}, {"K4", build_complete(4)}};
  for (const auto& [name, g] : graphs) {
    const auto trees = oracles::enumerate_spanning_trees(g);
    const auto wilson =
        testing::tree_histogram(trees, n, [&] { return wilson_ust(g, 0, rng); });
    const auto ab =
        testing::tree_histogram(trees, n, [&] { return oracles::aldous_broder_ust(g, rng); });
    const double p = stats::chi_square_gof(wilson, testing::uniform_probs(trees.count())).p_value;
    const double p2 = stats::chi_square_two_sample(wilson, ab).p_value;
    out.pass = out.pass && p > kAlpha && p2 > kAlpha;
    out.detail += fmt("%s(%zu trees) p=%.3g wilson-vs-ab p=%.3g; ", name.c_str(), trees.count(),
                      p, p2);
  }
  const double t = seconds_since(start);
  out.pass = out.pass && t < 30.0;
  out.detail += fmt("%.1fs (limit 30s)", t);
  return out;
}

// 2 ------------------------------------------------------------------------

Outcome msf_definition() {
  const auto start = Clock::now();
  Rng rng(1002);
  testing::RandomGraphOptions opt;
  opt.min_vertices = 2;
  opt.max_vertices = 12;
  opt.extra_edge_probability = 0.25;
  opt.parallel_probability = 0.05;
  std::size_t equal = 0;
  const std::size_t total = 1000;
  for (std::size_t i = 0; i < total; ++i) {
    const Graph g = testing::random_connected_graph(rng, opt);
    const EdgeLabels l = sample_labels(g, rng);
    equal += free_msf(g, l) == oracles::msf_by_definition(g, l);
  }
  const double t = seconds_since(start);
  return {equal == total && t < 60.0,
          fmt("%zu/%zu graphs equal, %.1fs (limit 60s)", equal, total, t)};
}

// 3 ------------------------------------------------------------------------

Outcome label_change() {
  Rng rng(1003);
  testing::RandomGraphOptions opt;
  opt.max_vertices = 10;
  opt.extra_edge_probability = 0.35;
  opt.parallel_probability = 0.05;
  std::size_t equal = 0;
  const std::size_t total = 500;
  for (std::size_t i = 0; i < total; ++i) {
    const Graph g = testing::random_connected_graph(rng, opt);
    const EdgeLabels labels = sample_labels(g, rng);
    const auto e = static_cast<EdgeId>(rng.index(g.edge_count()));
    double v = rng.uniform01();
    while (labels.collides(v)) v = rng.uniform01();
    EdgeLabels changed = labels;
    changed.set(e, v);
    equal += predict_label_change(g, labels, e, v) == free_msf(g, changed);
  }
  return {equal == total, fmt("%zu/%zu quadruples match recomputation", equal, total)};
}

// 4 ------------------------------------------------------------------------

Outcome wit_msf() {
  Rng rng(1004);
  const std::size_t total = 200;
  std::size_t done = 0, ok = 0, window_terminals = 0, multi = 0;
  // Sparse boundaries make window terminals common, dense ones long chains.
  testing::RandomGraphOptions sparse;
  sparse.min_vertices = 4;
  sparse.max_vertices = 12;
  sparse.extra_edge_probability = 0.35;
  sparse.stub_probability = 0.05;
  while (done < total) {
    const Graph window = done % 2 == 0 ? testing::random_wired_window(rng, 10, 0.35)
                                       : testing::random_connected_graph(rng, sparse);
    const Graph hat = wire_boundary(window);
    const EdgeLabels l = sample_labels(hat, rng);
    const ForestConfig forest = minimal_spanning_forest(hat, l);
    const auto crossing = testing::crossing_edges(
        window, forest.restricted(window.edge_count(), Provenance::wired), window.edge_count());
    if (crossing.empty()) continue;
    const EdgeId e = crossing[rng.index(crossing.size())];
    const VertexId x = rng.bernoulli(0.5) ? hat.edge(e).u : hat.edge(e).v;
    const int r = done % 2 == 0 ? static_cast<int>(rng.index(3)) : 0;
    ++done;

    const RelabelResult rel = msf_relabel(hat, l, e, x, r);
    bool good = minimal_spanning_forest(hat, rel.labels) == forest;
    for (std::size_t j = 1; j < rel.thresholds.size(); ++j)
      good = good && rel.thresholds[j] < rel.thresholds[j - 1];
    const InsertResult ins = msf_insert(hat, rel);
    ForestConfig expected = forest;
    expected.insert(e);
    if (ins.removed != kNoEdge) expected.erase(ins.removed);
    good = good && ins.swap_identity_holds && ins.recomputed == expected;
    if (rel.window_terminal != kNoEdge) {
      ++window_terminals;
      UnionFind clusters(hat.vertex_count());
      for (EdgeId h : forest.edges())
        if (!hat.is_wired_edge(h)) clusters.unite(hat.edge(h).u, hat.edge(h).v);
      good = good && clusters.same(hat.edge(rel.window_terminal).u, x) &&
             edge_distance(hat, distances(hat, x), rel.window_terminal) > r;
    }
    multi += rel.pivots.size() > 1;
    ok += good;
  }
  return {ok == total, fmt("%zu/%zu instances hold (%zu window terminals, %zu with k>1)", ok,
                           total, window_terminals, multi)};
}

// 5 ------------------------------------------------------------------------

Outcome delta_bound() {
  Rng rng(1005);
  const std::size_t cap = 2000;
  std::size_t tried = 0, enumerable = 0, nonvacuous = 0, held = 0, atoms = 0;
  Rational worst = 0;
  while (nonvacuous < 25 && tried < 2000) {
    ++tried;
    const Graph window = testing::random_wired_window(rng, 7, 0.3);
    const auto e = static_cast<EdgeId>(rng.index(window.edge_count()));
    const VertexId x = rng.bernoulli(0.5) ? window.edge(e).u : window.edge(e).v;
    const int r = static_cast<int>(rng.index(2));
    DeltaBoundReport rep;
    try {
      rep = delta_bound_check(window, e, x, r, cap);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::cap_exceeded) continue;
      throw;
    }
    ++enumerable;
    bool good = rep.holds();
    for (const auto& a : rep.detail.atoms) {
      good = good && a.ratio <= Rational(static_cast<long long>(rep.detail.sphere_size));
      worst = std::max(worst, a.ratio / Rational(static_cast<long long>(rep.detail.sphere_size)));
      ++atoms;
    }
    held += good;
    nonvacuous += !rep.vacuous;
  }
  return {held == enumerable && nonvacuous >= 10,
          fmt("%zu/%zu enumerable instances hold (%zu non-vacuous, %zu atoms, "
              "max ratio/|S| = %.3f)",
              held, enumerable, nonvacuous, atoms, static_cast<double>(worst))};
}

// 6 ------------------------------------------------------------------------

Outcome wired_inside_free() {
  Rng rng(1006);
  const std::size_t total = 1000;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const Graph g = testing::random_wired_window(rng, 12, 0.3);
    const Graph hat = wire_boundary(g);
    const EdgeLabels joint = sample_labels(hat, rng);
    const auto& v = joint.values();
    const EdgeLabels window(std::vector<double>(v.begin(), v.begin() + g.edge_count()));
    const EdgeLabels star(std::vector<double>(v.begin() + g.edge_count(), v.end()));
    ok += subset(wired_msf_window(g, window, star), free_msf(g, window));
  }
  return {ok == total, fmt("%zu/%zu windows", ok, total)};
}

// 7 ------------------------------------------------------------------------

Outcome stationarity() {
  const auto start = Clock::now();
  const Model model = make_model(std::make_shared<const Graph>(build_torus(2, 8)),
                                 ForestMode::fusf);
  const StationarityReport rep = stationarity_check(Observable::omega_degree, model, 10000, 1007);
  const double t = seconds_since(start);
  const double diff = std::abs(rep.mean0 - rep.mean1);
  return {rep.within(3.0) && t < 120.0,
          fmt("mean W(0)=%.4f W(1)=%.4f |diff|=%.4f = %.2f combined SE, %.1fs (limit 120s)",
              rep.mean0, rep.mean1, diff, diff / rep.combined_se, t)};
}

// 8 ------------------------------------------------------------------------

Outcome mass_transport() {
  Outcome out;
  for (TransportKind kind :
       {TransportKind::shift, TransportKind::neighbor_split, TransportKind::cluster_uniform}) {
    TransportSpec spec;
    spec.kind = kind;
    const MtpReport rep = mtp_check(spec, 2, 10, ForestMode::fusf, 20, 1008);
    out.pass = out.pass && rep.exact_equal && rep.origin_exact_equal;
    out.detail += fmt("%s exact=%s; ", std::string(to_string(kind)).c_str(),
                      rep.exact_equal && rep.origin_exact_equal ? "yes" : "no");
  }
  for (TransportKind kind : {TransportKind::nearest_mark, TransportKind::random_neighbor}) {
    TransportSpec spec;
    spec.kind = kind;
    spec.evaluation = TransportEvaluation::monte_carlo;
    const MtpReport rep = mtp_check(spec, 2, 10, ForestMode::fusf, 4000, 1009);
    out.pass = out.pass && std::abs(rep.z_score) < 3.0;
    out.detail += fmt("%s z=%.2f; ", std::string(to_string(kind)).c_str(), rep.z_score);
  }
  out.detail.resize(out.detail.size() - 2);
  return out;
}

// 9 ------------------------------------------------------------------------

// Types of both endpoints recomputed on omega and on pi_e^f omega.
std::optional<std::array<bool, 4>> recompute_types(const Graph& window, const ForestConfig& omega,
                                                   const TypePredicate& pred, EdgeId e,
                                                   VertexId x, EdgeId f) {
  const VertexId y = window.edge(e).other(x);
  ForestConfig after = omega;
  if (f != kNoEdge) after.erase(f);
  after.insert(e);
  const std::array<bool, 4> t{pred.evaluate(window, omega, x), pred.evaluate(window, omega, y),
                              pred.evaluate(window, after, x), pred.evaluate(window, after, y)};
  if (t[0] == t[2] && t[1] == t[3]) return std::nullopt;
  return t;
}

Outcome pivotal() {
  Rng rng(1010);
  const std::vector<TypePredicate> preds{*parse_predicate("ends_proxy_at_least:2:1"),
                                         *parse_predicate("ends_proxy_at_least:3:2"),
                                         *parse_predicate("cluster_size_at_least:8"),
                                         *parse_predicate("touches_boundary")};
  const auto window = std::make_shared<const Graph>(build_box(2, 6));
  const std::array<Model, 2> models{make_model(window, ForestMode::wusf),
                                    make_model(window, ForestMode::wmsf)};
  const std::size_t total = 200;
  std::size_t done = 0, ok = 0, flips = 0;
  while (done < total) {
    const Model& model = models[done % 2];
    const ForestSample sample = sample_forest(model, rng);
    const auto crossing =
        testing::crossing_edges(*window, sample.window_forest, window->edge_count());
    if (crossing.empty()) continue;
    const EdgeId e = crossing[rng.index(crossing.size())];
    const VertexId x = rng.bernoulli(0.5) ? window->edge(e).u : window->edge(e).v;
    const int r = static_cast<int>(rng.index(2));
    const TypePredicate& pred = preds[rng.index(preds.size())];
    PivotalScan scan;
    try {
      scan = pivotal_scan(model, sample, pred, e, x, r);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::condition_d_failed) continue;
      throw;
    }
    ++done;
    const auto expected =
        recompute_types(*window, sample.window_forest, pred, e, x, scan.record.window_f);
    bool good = scan.pair.has_value() == expected.has_value();
    if (good && expected) {
      ++flips;
      const auto& p = *scan.pair;
      const VertexId z = (*expected)[0] != (*expected)[2] ? x : window->edge(e).other(x);
      good = p.z == z && p.before == std::array<bool, 2>{(*expected)[0], (*expected)[1]} &&
             p.after == std::array<bool, 2>{(*expected)[2], (*expected)[3]};
    }
    ok += good;
  }
  return {ok == total, fmt("%zu/%zu instances agree (%zu with a type flip)", ok, total, flips)};
}

// 10 -----------------------------------------------------------------------

// Base window and replicate count were chosen from cluster yield alone; the
// seed was fixed before the first run.
constexpr int kDecoratedSide = 60;
constexpr std::size_t kDecoratedReplicates = 30;

Outcome decorated() {
  DecoratedConfig cfg;
  cfg.graph.kind = GraphKind::box;
  cfg.graph.dimension = 2;
  cfg.graph.side = kDecoratedSide;
  cfg.graph.decorate = true;
  cfg.mode = ForestMode::wusf;
  cfg.min_sites = 200;
  cfg.replicates = kDecoratedReplicates;
  cfg.seed = 42;
  const DecoratedReport rep = decorated_experiment(cfg);
  std::size_t within = 0;
  double worst = 0.0;
  for (const auto& c : rep.clusters) {
    within += c.within_3se;
    for (double z : c.z_scores) worst = std::max(worst, std::abs(z));
  }
  const bool pass = rep.clusters.size() >= 100 && rep.auc > 0.95 && rep.all_within_3se;
  return {pass, fmt("%zu clusters >= 200 sites (%zu head, %zu tail), AUC=%.4f, %zu/%zu within "
                    "3 SE (max |z|=%.2f)",
                    rep.clusters.size(), rep.heads, rep.tails, rep.auc, within,
                    rep.clusters.size(), worst)};
}

// 11 -----------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Artifact bytes by relative path; the manifest's wall time is dropped.
std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string bytes = slurp(entry.path());
    if (entry.path().filename() == "manifest.json") {
      auto manifest = nlohmann::json::parse(bytes);
      manifest.erase("wall_time_seconds");
      bytes = manifest.dump(2);
    }
    out[fs::relative(entry.path(), dir).string()] = std::move(bytes);
  }
  return out;
}

struct CliCase {
  std::string name;
  std::vector<std::string> command;
  std::string config;
};

Outcome determinism() {
  const fs::path root =
      fs::temp_directory_path() / ("forestlab-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  const std::vector<CliCase> cases{
      {"gen", {"gen"}, "[model]\ngraph = \"tree_ball\"\ndegree = 3\nradius = 4\n"},
      {"sample-ust", {"sample-ust"},
       "[model]\ngraph = \"box\"\nside = 12\nforest = \"wusf\"\n[run]\nreplicates = 64\n"},
      {"sample-msf", {"sample-msf"},
       "[model]\ngraph = \"torus\"\nside = 10\nforest = \"fmsf\"\n[run]\nreplicates = 64\n"},
      {"surgery", {"surgery"},
       "[model]\ngraph = \"edge_list\"\n"
       "vertices = [{ id = 0, boundary = true, stubs = 1 }, { id = 1, boundary = true, stubs = 1 "
       "}]\nedges = [[0, 1]]\nforest = \"wmsf\"\nlabels = [0.9, 0.2, 0.4]\n"
       "[surgery]\nmode = \"msf\"\nedge = [0, 1]\nanchor = 0\nradius = 0\n"},
      {"enumerate", {"enumerate"}, "[model]\ngraph = \"torus\"\nside = 3\n[run]\ncap = 20000\n"},
      {"analyze", {"analyze"},
       "[model]\ngraph = \"box\"\nside = 16\nforest = \"wmsf\"\n[run]\nreplicates = 32\n"},
      {"walk", {"walk"},
       "[model]\ngraph = \"torus\"\nside = 8\n[run]\nreplicates = 400\n"
       "[walk]\nforward = 50\nbackward = 50\nstationarity = true\n"},
      {"mtp-check", {"mtp-check"},
       "[model]\ngraph = \"torus\"\nside = 8\n[run]\nreplicates = 200\n"
       "[mtp]\ntransport = \"random_neighbor\"\nevaluation = \"monte_carlo\"\n"},
      {"experiment indist", {"experiment", "indist"},
       "[model]\ngraph = \"box\"\nside = 10\nforest = \"wusf\"\n[run]\nreplicates = 16\n"
       "[experiment]\nmin_cluster_size = 4\npermutations = 199\n"},
      {"experiment decorated", {"experiment", "decorated"},
       "[model]\ngraph = \"box\"\nside = 20\ndecorate = true\nforest = \"wusf\"\n"
       "[run]\nreplicates = 8\n[experiment]\nmin_sites = 20\n"},
  };

  Outcome out;
  std::size_t identical = 0, files = 0;
  for (const auto& c : cases) {
    const fs::path cfg = root / (c.command.back() + ".toml");
    std::ofstream(cfg) << c.config;
    auto run = [&](const std::string& tag, const std::string& jobs) {
      std::vector<std::string> args{"--config", cfg.string(), "--seed", "2024", "--jobs", jobs,
                                    "--out", (root / (c.command.back() + "-" + tag)).string()};
      args.insert(args.end(), c.command.begin(), c.command.end());
      std::ostringstream sink;
      const int code = cli::run(args, sink, sink);
      if (code != 0) throw std::runtime_error(c.name + " exited " + std::to_string(code) + ": " +
                                              sink.str());
      return artifacts(root / (c.command.back() + "-" + tag));
    };
    const auto first = run("a", "1");
    const auto repeat = run("b", "1");
    const auto wide = run("c", "8");
    files += first.size();
    if (first == repeat && first == wide && first.size() > 1) {
      ++identical;
    } else {
      out.pass = false;
      out.detail += c.name + " differs; ";
    }
  }
  fs::remove_all(root);
  out.detail += fmt("%zu/%zu subcommands byte-identical across reruns and --jobs 1/8 (%zu "
                    "artifacts)",
                    identical, cases.size(), files);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sampler law", sampler_law},
      {"msf definition fidelity", msf_definition},
      {"label change rule", label_change},
      {"msf surgery contract", wit_msf},
      {"delta(r) bound", delta_bound},
      {"wired msf inside free msf", wired_inside_free},
      {"stationarity", stationarity},
      {"mass transport checker", mass_transport},
      {"pivotal detector", pivotal},
      {"decorated positive control", decorated},
      {"cli determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, check] = criteria[i];
    const auto start = Clock::now();
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& err) {
      result = {false, std::string("exception: ") + err.what()};
    }
    failures += !result.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", result.pass ? "PASS" : "FAIL", i + 1, name.c_str(),
                result.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
