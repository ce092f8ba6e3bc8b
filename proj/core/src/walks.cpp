#include "forestlab/walks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <numeric>

#include "forestlab/analytics.hpp"
#include "forestlab/error.hpp"
#include "forestlab/parallel.hpp"
#include "forestlab/stats.hpp"

namespace forestlab {

namespace {

void walk_half(const Graph& g, const ForestConfig& omega, VertexId anchor, std::size_t steps,
               Rng& rng, std::vector<VertexId>& path, std::vector<WalkStep>& log) {
  path.assign(1, anchor);
  log.clear();
  log.reserve(steps);
  VertexId at = anchor;
  for (std::size_t i = 0; i < steps; ++i) {
    const auto inc = g.incident(at);
    if (inc.empty()) {
      log.push_back({at, at, kNoEdge, false});
    } else {
      const Incidence& step = inc[rng.index(inc.size())];
      const bool accepted = omega.contains(step.edge);
      log.push_back({at, step.neighbor, step.edge, accepted});
      if (accepted) at = step.neighbor;
    }
    path.push_back(at);
  }
}

}  // namespace

WalkTrace delayed_srw(const Graph& g, const ForestConfig& omega, VertexId anchor,
                      std::size_t steps_forward, std::size_t steps_backward, Rng& rng) {
  require(anchor < g.vertex_count(), ErrorCode::invalid_argument, "anchor outside graph");
  require(omega.edge_capacity() == g.edge_count(), ErrorCode::invalid_argument,
          "forest does not belong to this graph");
  Rng forward_stream = rng.split();
  Rng backward_stream = rng.split();
  WalkTrace trace;
  trace.anchor = anchor;
  walk_half(g, omega, anchor, steps_forward, forward_stream, trace.forward, trace.forward_steps);
  walk_half(g, omega, anchor, steps_backward, backward_stream, trace.backward,
            trace.backward_steps);
  return trace;
}

std::string_view to_string(Observable obs) {
  switch (obs) {
    case Observable::omega_degree: return "omega_degree";
    case Observable::is_leaf: return "is_leaf";
    case Observable::constant_one: return "constant_one";
    case Observable::cluster_ball: return "cluster_ball";
  }
  return "unknown";
}

std::optional<Observable> parse_observable(std::string_view text) {
  for (auto obs : {Observable::omega_degree, Observable::is_leaf, Observable::constant_one,
                   Observable::cluster_ball})
    if (to_string(obs) == text) return obs;
  return std::nullopt;
}

namespace {

std::size_t omega_degree(const Graph& g, const ForestConfig& omega, VertexId v) {
  std::size_t d = 0;
  for (const Incidence& inc : g.incident(v)) d += omega.contains(inc.edge);
  return d;
}

}  // namespace

double observe(Observable obs, const Graph& g, const ForestConfig& omega, VertexId v) {
  switch (obs) {
    case Observable::omega_degree:
      return static_cast<double>(omega_degree(g, omega, v));
    case Observable::is_leaf:
      return omega_degree(g, omega, v) == 1 ? 1.0 : 0.0;
    case Observable::constant_one:
      return 1.0;
    case Observable::cluster_ball: {
      // Intrinsic ball of radius 2 in the forest.
      std::vector<VertexId> frontier{v}, seen{v};
      for (int r = 0; r < 2; ++r) {
        std::vector<VertexId> next;
        for (VertexId u : frontier)
          for (const Incidence& inc : g.incident(u))
            if (omega.contains(inc.edge) &&
                std::find(seen.begin(), seen.end(), inc.neighbor) == seen.end()) {
              seen.push_back(inc.neighbor);
              next.push_back(inc.neighbor);
            }
        frontier = std::move(next);
      }
      return static_cast<double>(seen.size());
    }
  }
  return 0.0;
}

StationarityReport stationarity_check(Observable obs, const Model& model,
                                      std::size_t replicates, std::uint64_t seed,
                                      std::size_t jobs) {
  require(replicates >= 2, ErrorCode::invalid_argument, "need at least two replicates");
  std::vector<double> at0(replicates), at1(replicates), diff(replicates);
  parallel_for(replicates, jobs, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const ForestSample sample = sample_forest(model, rng);
    const WalkTrace walk = delayed_srw(*model.window, sample.window_forest, 0, 1, 0, rng);
    at0[i] = observe(obs, *model.window, sample.window_forest, walk.at(0));
    at1[i] = observe(obs, *model.window, sample.window_forest, walk.at(1));
    diff[i] = at0[i] - at1[i];
  });
  StationarityReport report;
  report.observable = obs;
  report.replicates = replicates;
  const auto s0 = stats::mean_se(at0);
  const auto s1 = stats::mean_se(at1);
  report.mean0 = s0.mean;
  report.se0 = s0.se;
  report.mean1 = s1.mean;
  report.se1 = s1.se;
  report.combined_se = std::sqrt(s0.se * s0.se + s1.se * s1.se);
  report.paired_se = stats::mean_se(diff).se;
  report.ks_distance = stats::ks_distance(at0, at1);
  return report;
}

// ---------------------------------------------------------------------------

std::string TypePredicate::id() const {
  switch (kind) {
    case PredicateKind::always: return "always";
    case PredicateKind::cluster_size_at_least:
      return "cluster_size_at_least:" + std::to_string(threshold);
    case PredicateKind::ends_proxy_at_least:
      return "ends_proxy_at_least:" + std::to_string(threshold) + ":" + std::to_string(radius);
    case PredicateKind::touches_boundary: return "touches_boundary";
  }
  return "unknown";
}

bool TypePredicate::evaluate(const Graph& window, const ForestConfig& omega, VertexId v) const {
  switch (kind) {
    case PredicateKind::always:
      return true;
    case PredicateKind::cluster_size_at_least: {
      const Components parts = components(window, omega);
      return parts.sizes[parts.label[v]] >= threshold;
    }
    case PredicateKind::ends_proxy_at_least:
      return static_cast<std::size_t>(ends_proxy(window, omega, v, radius)) >= threshold;
    case PredicateKind::touches_boundary: {
      const Components parts = components(window, omega);
      for (VertexId u = 0; u < window.vertex_count(); ++u)
        if (parts.same(u, v) && window.mark(u).boundary) return true;
      return false;
    }
  }
  return false;
}

namespace {

std::optional<long long> parse_int(std::string_view text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_colon(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) return parts;
    start = colon + 1;
  }
}

}  // namespace

std::optional<TypePredicate> parse_predicate(std::string_view text) {
  const auto parts = split_colon(text);
  TypePredicate pred;
  if (parts[0] == "always" && parts.size() == 1) {
    pred.kind = PredicateKind::always;
    return pred;
  }
  if (parts[0] == "touches_boundary" && parts.size() == 1) {
    pred.kind = PredicateKind::touches_boundary;
    return pred;
  }
  if (parts[0] == "cluster_size_at_least" && parts.size() == 2) {
    const auto n = parse_int(parts[1]);
    if (!n || *n < 0) return std::nullopt;
    pred.kind = PredicateKind::cluster_size_at_least;
    pred.threshold = static_cast<std::size_t>(*n);
    return pred;
  }
  if (parts[0] == "ends_proxy_at_least" && (parts.size() == 2 || parts.size() == 3)) {
    const auto n = parse_int(parts[1]);
    const auto r = parts.size() == 3 ? parse_int(parts[2]) : std::optional<long long>(1);
    if (!n || !r || *n < 0 || *r < 0) return std::nullopt;
    pred.kind = PredicateKind::ends_proxy_at_least;
    pred.threshold = static_cast<std::size_t>(*n);
    pred.radius = static_cast<int>(*r);
    return pred;
  }
  return std::nullopt;
}

namespace {

std::optional<PivotalPair> compare_types(const Graph& window, const ForestConfig& before,
                                         const ForestConfig& after, const TypePredicate& pred,
                                         EdgeId e, VertexId x, int r, EdgeId f) {
  const VertexId y = window.edge(e).other(x);
  PivotalPair pair;
  pair.e = e;
  pair.f = f;
  pair.r = r;
  pair.anchor = x;
  pair.before = {pred.evaluate(window, before, x), pred.evaluate(window, before, y)};
  pair.after = {pred.evaluate(window, after, x), pred.evaluate(window, after, y)};
  if (pair.before[0] != pair.after[0]) {
    pair.z = x;
  } else if (pair.before[1] != pair.after[1]) {
    pair.z = y;
  } else {
    return std::nullopt;
  }
  return pair;
}

void require_distinct_clusters(const Graph& window, const ForestConfig& omega, EdgeId e,
                               VertexId anchor) {
  require(e < window.edge_count(), ErrorCode::invalid_argument, "edge outside window");
  require(window.edge(e).touches(anchor), ErrorCode::invalid_argument,
          "anchor is not an endpoint of the edge");
  const Components parts = components(window, omega);
  require(!parts.same(window.edge(e).u, window.edge(e).v), ErrorCode::same_cluster,
          "endpoints of edge " + std::to_string(e) + " lie in one cluster");
}

}  // namespace

std::optional<PivotalPair> pivotal_scan(const Graph& window, const ForestConfig& omega,
                                        const TypePredicate& pred, EdgeId e, VertexId anchor,
                                        int r, EdgeId f) {
  require_distinct_clusters(window, omega, e, anchor);
  const ForestConfig after = apply_surgery(window, omega, e, f);
  return compare_types(window, omega, after, pred, e, anchor, r, f);
}

PivotalScan pivotal_scan(const Model& model, const ForestSample& sample,
                         const TypePredicate& pred, EdgeId e, VertexId anchor, int r) {
  require_distinct_clusters(*model.window, sample.window_forest, e, anchor);
  PivotalScan out;
  out.record = perform_surgery(model, sample, e, anchor, r);
  out.pair = compare_types(*model.window, out.record.before, out.record.result, pred, e, anchor,
                           r, out.record.window_f);
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ClusterStatistic s) {
  return s == ClusterStatistic::leaf_density ? "leaf_density" : "mean_degree";
}

std::optional<ClusterStatistic> parse_cluster_statistic(std::string_view text) {
  if (text == "leaf_density") return ClusterStatistic::leaf_density;
  if (text == "mean_degree") return ClusterStatistic::mean_degree;
  return std::nullopt;
}

namespace {

struct IndistPart {
  std::vector<IndistCluster> clusters;
  IndistReplicate summary;
};

std::array<double, 5> summary_quantiles(const std::vector<double>& values) {
  std::array<double, 5> out{};
  const std::array<double, 5> qs{0.1, 0.25, 0.5, 0.75, 0.9};
  for (std::size_t i = 0; i < qs.size(); ++i) out[i] = stats::quantile(values, qs[i]);
  return out;
}

}  // namespace

IndistReport indist_experiment(const IndistConfig& config) {
  require(config.replicates > 0, ErrorCode::invalid_argument, "need at least one replicate");
  const auto window = std::make_shared<const Graph>(build_graph(config.graph));
  const Model model = make_model(window, config.mode);
  const std::vector<int> to_boundary = boundary_distances(*window);

  std::vector<IndistPart> parts(config.replicates);
  parallel_for(config.replicates, config.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, i));
    const ForestSample sample = sample_forest(model, rng);
    const Components comps = components(*window, sample.window_forest);
    const auto degree = forest_degrees(*window, sample.window_forest);

    std::vector<std::vector<double>> values(comps.count());
    std::vector<int> nearest(comps.count(), kUnreachable);
    std::vector<VertexId> representative(comps.count(), kNoVertex);
    for (VertexId v = 0; v < window->vertex_count(); ++v) {
      const std::uint32_t c = comps.label[v];
      if (representative[c] == kNoVertex) representative[c] = v;
      const double value = config.statistic == ClusterStatistic::leaf_density
                               ? (degree[v] == 1 ? 1.0 : 0.0)
                               : static_cast<double>(degree[v]);
      values[c].push_back(value);
      if (to_boundary[v] != kUnreachable &&
          (nearest[c] == kUnreachable || to_boundary[v] < nearest[c]))
        nearest[c] = to_boundary[v];
    }

    IndistPart& part = parts[i];
    part.summary.replicate = i;
    std::vector<std::uint32_t> qualifying;
    for (std::uint32_t c = 0; c < comps.count(); ++c) {
      if (comps.sizes[c] < config.min_cluster_size) continue;
      qualifying.push_back(c);
      const double mean = std::accumulate(values[c].begin(), values[c].end(), 0.0) /
                          static_cast<double>(values[c].size());
      part.clusters.push_back({i, c, representative[c], comps.sizes[c], mean, nearest[c]});
    }
    part.summary.qualifying = qualifying.size();
    if (qualifying.size() < 2) return;
    std::stable_sort(qualifying.begin(), qualifying.end(), [&](std::uint32_t a, std::uint32_t b) {
      return comps.sizes[a] > comps.sizes[b];
    });
    const std::uint32_t a = qualifying[0];
    const std::uint32_t b = qualifying[1];
    part.summary.insufficient = false;
    part.summary.first = a;
    part.summary.second = b;
    const auto mean_of = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    part.summary.difference = mean_of(values[a]) - mean_of(values[b]);
    part.summary.p_value =
        stats::permutation_p_value(values[a], values[b], config.permutations, rng);
  });

  IndistReport report;
  report.config = config;
  std::vector<double> statistic_values, p_values;
  for (IndistPart& part : parts) {
    for (const IndistCluster& c : part.clusters) statistic_values.push_back(c.statistic);
    report.clusters.insert(report.clusters.end(), part.clusters.begin(), part.clusters.end());
    if (part.summary.insufficient) {
      ++report.insufficient;
    } else {
      p_values.push_back(part.summary.p_value);
    }
    report.replicates.push_back(part.summary);
  }
  report.statistic_quantiles = summary_quantiles(statistic_values);
  report.p_value_quantiles = summary_quantiles(p_values);
  if (!p_values.empty())
    report.share_p_below_005 =
        static_cast<double>(std::count_if(p_values.begin(), p_values.end(),
                                          [](double p) { return p < 0.05; })) /
        static_cast<double>(p_values.size());
  return report;
}

// ---------------------------------------------------------------------------

std::optional<GadgetPattern> read_pattern(const GadgetSite& site, const ForestConfig& forest) {
  const bool prime = forest.contains(site.to_prime);
  const bool double_prime = forest.contains(site.to_double_prime);
  const bool across = forest.contains(site.across);
  if (prime && double_prime && !across) return GadgetPattern::cherry;
  if (prime && across && !double_prime) return GadgetPattern::path_prime;
  if (double_prime && across && !prime) return GadgetPattern::path_double;
  return std::nullopt;
}

DecoratedForest decorate_forest(const Graph& decorated, const Subgraph& base,
                                const ForestConfig& base_forest, Rng& rng) {
  require(base_forest.edge_capacity() == base.graph.edge_count(), ErrorCode::invalid_argument,
          "forest does not belong to the base graph");
  const auto sites = gadget_sites(decorated);
  std::vector<std::size_t> site_of(decorated.vertex_count(), SIZE_MAX);
  for (std::size_t s = 0; s < sites.size(); ++s) site_of[sites[s].base] = s;

  const Components parts = components(base.graph, base_forest);
  DecoratedForest out;
  out.forest = ForestConfig(decorated.edge_count(), base_forest.provenance());
  for (EdgeId e : base_forest.edges()) out.forest.insert(base.parent_edge[e]);
  out.head.resize(parts.count());
  for (auto& coin : out.head) coin = rng.bernoulli(0.5) ? 1 : 0;

  for (VertexId v = 0; v < base.graph.vertex_count(); ++v) {
    const GadgetSite& site = sites.at(site_of.at(base.parent_vertex[v]));
    const auto& law = out.head[parts.label[v]] ? kHeadLaw : kTailLaw;
    const double u = rng.uniform01();
    if (u < law[0]) {
      out.forest.insert(site.to_prime);
      out.forest.insert(site.to_double_prime);
    } else if (u < law[0] + law[1]) {
      out.forest.insert(site.to_prime);
      out.forest.insert(site.across);
    } else {
      out.forest.insert(site.to_double_prime);
      out.forest.insert(site.across);
    }
  }
  return out;
}

DecoratedReport decorated_experiment(const DecoratedConfig& config) {
  require(config.replicates > 0, ErrorCode::invalid_argument, "need at least one replicate");
  const Graph decorated = build_graph(config.graph);
  require(decorated.has_gadgets(), ErrorCode::precondition,
          "decorated experiment needs a decorated graph");
  const Subgraph base = base_subgraph(decorated);
  const auto base_graph = std::make_shared<const Graph>(base.graph);
  const Model model = make_model(base_graph, config.mode);
  const auto sites = gadget_sites(decorated);

  std::vector<std::vector<DecoratedCluster>> parts(config.replicates);
  parallel_for(config.replicates, config.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, i));
    const ForestSample sample = sample_forest(model, rng);
    const DecoratedForest dressed = decorate_forest(decorated, base, sample.window_forest, rng);
    const Components base_parts = components(base.graph, sample.window_forest);
    std::vector<VertexId> base_index(decorated.vertex_count(), kNoVertex);
    for (VertexId v = 0; v < base.parent_vertex.size(); ++v) base_index[base.parent_vertex[v]] = v;

    // Everything below reads the decorated forest; the coin is only used to
    // label clusters.
    const Components comps = components(decorated, dressed.forest);
    std::vector<DecoratedCluster> found(comps.count());
    for (const GadgetSite& site : sites) {
      const std::uint32_t c = comps.label[site.base];
      DecoratedCluster& cluster = found[c];
      cluster.cluster = c;
      ++cluster.sites;
      cluster.head = dressed.head[base_parts.label[base_index[site.base]]] != 0;
      const auto pattern = read_pattern(site, dressed.forest);
      require(pattern.has_value(), ErrorCode::internal, "gadget carries no pattern");
      ++cluster.counts[static_cast<std::size_t>(*pattern)];
    }
    for (DecoratedCluster& cluster : found) {
      if (cluster.sites < config.min_sites) continue;
      cluster.replicate = i;
      const double n = static_cast<double>(cluster.sites);
      const auto& law = cluster.head ? kHeadLaw : kTailLaw;
      cluster.cherry_frequency = static_cast<double>(cluster.counts[0]) / n;
      cluster.within_3se = true;
      for (std::size_t j = 0; j < 3; ++j) {
        const double freq = static_cast<double>(cluster.counts[j]) / n;
        cluster.z_scores[j] = (freq - law[j]) / std::sqrt(law[j] * (1.0 - law[j]) / n);
        if (std::abs(cluster.z_scores[j]) > 3.0) cluster.within_3se = false;
      }
      parts[i].push_back(cluster);
    }
  });

  DecoratedReport report;
  report.config = config;
  std::vector<double> head_scores, tail_scores;
  std::array<std::size_t, 3> head_counts{}, tail_counts{};
  for (const auto& part : parts) {
    for (const DecoratedCluster& c : part) {
      report.clusters.push_back(c);
      auto& counts = c.head ? head_counts : tail_counts;
      for (std::size_t j = 0; j < 3; ++j) counts[j] += c.counts[j];
      (c.head ? head_scores : tail_scores).push_back(c.cherry_frequency);
    }
  }
  report.heads = head_scores.size();
  report.tails = tail_scores.size();
  report.auc = stats::auc(tail_scores, head_scores);
  report.all_within_3se = !report.clusters.empty() &&
                          std::all_of(report.clusters.begin(), report.clusters.end(),
                                      [](const DecoratedCluster& c) { return c.within_3se; });
  const auto pool = [](const std::array<std::size_t, 3>& counts) {
    const double total = static_cast<double>(counts[0] + counts[1] + counts[2]);
    std::array<double, 3> out{};
    if (total > 0)
      for (std::size_t j = 0; j < 3; ++j) out[j] = static_cast<double>(counts[j]) / total;
    return out;
  };
  report.pooled_head = pool(head_counts);
  report.pooled_tail = pool(tail_counts);
  return report;
}

}  // namespace forestlab
