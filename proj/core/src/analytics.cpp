#include "forestlab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <string>

#include "forestlab/error.hpp"
#include "forestlab/parallel.hpp"
#include "forestlab/stats.hpp"

namespace forestlab {

std::vector<VertexId> Components::members(std::uint32_t id) const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < label.size(); ++v)
    if (label[v] == id) out.push_back(v);
  return out;
}

namespace {

void check_forest(const Graph& g, const ForestConfig& forest) {
  require(forest.edge_capacity() == g.edge_count(), ErrorCode::invalid_argument,
          "forest does not belong to this graph");
}

// Forest adjacency restricted to member edges.
std::vector<std::vector<VertexId>> forest_adjacency(const Graph& g, const ForestConfig& forest) {
  std::vector<std::vector<VertexId>> adj(g.vertex_count());
  for (EdgeId e : forest.edges()) {
    adj[g.edge(e).u].push_back(g.edge(e).v);
    adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  return adj;
}

std::vector<int> forest_distances(const std::vector<std::vector<VertexId>>& adj, VertexId x) {
  std::vector<int> dist(adj.size(), kUnreachable);
  std::deque<VertexId> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId w : adj[u]) {
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

}  // namespace

Components components(const Graph& g, const ForestConfig& forest) {
  check_forest(g, forest);
  UnionFind uf(g.vertex_count());
  for (EdgeId e : forest.edges()) uf.unite(g.edge(e).u, g.edge(e).v);
  Components out;
  out.label.assign(g.vertex_count(), 0);
  std::vector<std::uint32_t> id_of_root(g.vertex_count(), UINT32_MAX);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::size_t root = uf.find(v);
    if (id_of_root[root] == UINT32_MAX) {
      id_of_root[root] = static_cast<std::uint32_t>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.label[v] = id_of_root[root];
    ++out.sizes[out.label[v]];
  }
  return out;
}

int ends_proxy(const Graph& g, const ForestConfig& forest, VertexId x, int r) {
  check_forest(g, forest);
  require(x < g.vertex_count(), ErrorCode::invalid_argument, "vertex outside graph");
  require(r >= 0, ErrorCode::invalid_argument, "radius must be non-negative");
  const std::vector<int> dist = distances(g, x);
  auto in_ball = [&](VertexId v) { return dist[v] != kUnreachable && dist[v] <= r; };

  const Components whole = components(g, forest);
  UnionFind pieces(g.vertex_count());
  for (EdgeId e : forest.edges()) {
    const Edge& edge = g.edge(e);
    if (in_ball(edge.u) && in_ball(edge.v)) continue;
    pieces.unite(edge.u, edge.v);
  }
  std::vector<std::uint8_t> counted(g.vertex_count(), 0);
  int count = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!whole.same(v, x) || !g.mark(v).boundary) continue;
    if (dist[v] == kUnreachable || dist[v] <= r) continue;
    const std::size_t root = pieces.find(v);
    if (counted[root]) continue;
    counted[root] = 1;
    ++count;
  }
  return count;
}

GrowthEstimate growth_estimate(const Graph& g, const ForestConfig& forest, VertexId x) {
  check_forest(g, forest);
  require(x < g.vertex_count(), ErrorCode::invalid_argument, "vertex outside graph");
  const auto adj = forest_adjacency(g, forest);
  const std::vector<int> dist = forest_distances(adj, x);
  const int cluster_radius = *std::max_element(dist.begin(), dist.end());

  GrowthEstimate out;
  out.ball_sizes.assign(static_cast<std::size_t>(cluster_radius) + 1, 0);
  for (int d : dist)
    if (d != kUnreachable) ++out.ball_sizes[static_cast<std::size_t>(d)];
  std::partial_sum(out.ball_sizes.begin(), out.ball_sizes.end(), out.ball_sizes.begin());

  out.fit_from = 1;
  out.fit_to = std::min(eccentricity(g, x) - 1, cluster_radius);
  const int points = out.fit_to - out.fit_from + 1;
  if (points < 2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int r = out.fit_from; r <= out.fit_to; ++r) {
    const double y = std::log(static_cast<double>(out.ball_sizes[static_cast<std::size_t>(r)]));
    sx += r;
    sy += y;
    sxx += static_cast<double>(r) * r;
    sxy += r * y;
  }
  const double n = points;
  out.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

std::vector<VertexId> touching_points(const Graph& g, const ForestConfig& forest,
                                      const Components& parts, std::uint32_t from,
                                      std::uint32_t to) {
  check_forest(g, forest);
  require(from < parts.count() && to < parts.count(), ErrorCode::invalid_argument,
          "cluster id out of range");
  require(from != to, ErrorCode::same_cluster, "touching points need distinct clusters");
  std::vector<VertexId> out;
  for (const Edge& e : g.edges()) {
    if (parts.label[e.u] == from && parts.label[e.v] == to) out.push_back(e.u);
    if (parts.label[e.v] == from && parts.label[e.u] == to) out.push_back(e.v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> forest_degrees(const Graph& g, const ForestConfig& forest) {
  check_forest(g, forest);
  std::vector<std::size_t> degree(g.vertex_count(), 0);
  for (EdgeId e : forest.edges()) {
    ++degree[g.edge(e).u];
    ++degree[g.edge(e).v];
  }
  return degree;
}

std::vector<int> boundary_distances(const Graph& g) {
  std::vector<int> dist(g.vertex_count(), kUnreachable);
  std::deque<VertexId> queue;
  const auto z = g.wired_vertex();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.mark(v).boundary && v != z) {
      dist[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const Incidence& inc : g.incident(u)) {
      if (inc.neighbor == z || dist[inc.neighbor] != kUnreachable) continue;
      dist[inc.neighbor] = dist[u] + 1;
      queue.push_back(inc.neighbor);
    }
  }
  return dist;
}

std::vector<ClusterStats> cluster_stats(const Graph& g, const ForestConfig& forest,
                                        int ends_radius) {
  const Components parts = components(g, forest);
  const auto degree = forest_degrees(g, forest);
  const auto to_boundary = boundary_distances(g);
  std::vector<ClusterStats> out(parts.count());
  std::vector<std::size_t> leaves(parts.count(), 0);
  std::vector<std::size_t> degree_sum(parts.count(), 0);
  std::vector<std::uint8_t> seen(parts.count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::uint32_t c = parts.label[v];
    ClusterStats& s = out[c];
    if (!seen[c]) {
      seen[c] = 1;
      s.cluster = c;
      s.representative = v;
    }
    ++s.vertices;
    if (degree[v] == 1) ++leaves[c];
    degree_sum[c] += degree[v];
    if (g.mark(v).boundary) ++s.boundary_contacts;
    if (to_boundary[v] != kUnreachable &&
        (s.boundary_distance == kUnreachable || to_boundary[v] < s.boundary_distance))
      s.boundary_distance = to_boundary[v];
  }
  for (ClusterStats& s : out) {
    const double n = static_cast<double>(s.vertices);
    s.leaf_density = static_cast<double>(leaves[s.cluster]) / n;
    s.mean_degree = static_cast<double>(degree_sum[s.cluster]) / n;
    s.ends_proxy = ends_proxy(g, forest, s.representative, ends_radius);
  }
  return out;
}

namespace {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

}  // namespace

void write_cluster_csv_header(std::ostream& out) {
  out << "# " << kClusterCsvSchema << "\n"
      << "sample,cluster,representative,vertices,ends_proxy,leaf_density,mean_degree,"
         "boundary_contacts,boundary_distance\n";
}

void write_cluster_csv_rows(std::ostream& out, std::size_t sample,
                            const std::vector<ClusterStats>& stats) {
  for (const ClusterStats& s : stats) {
    out << sample << ',' << s.cluster << ',' << s.representative << ',' << s.vertices << ','
        << s.ends_proxy << ',' << format_double(s.leaf_density) << ','
        << format_double(s.mean_degree) << ',' << s.boundary_contacts << ','
        << s.boundary_distance << '\n';
  }
}

// ---------------------------------------------------------------------------

std::string_view to_string(TransportKind kind) {
  switch (kind) {
    case TransportKind::zero: return "zero";
    case TransportKind::shift: return "shift";
    case TransportKind::neighbor_split: return "neighbor_split";
    case TransportKind::cluster_uniform: return "cluster_uniform";
    case TransportKind::nearest_mark: return "nearest_mark";
    case TransportKind::random_neighbor: return "random_neighbor";
  }
  return "unknown";
}

std::optional<TransportKind> parse_transport(std::string_view text) {
  for (auto kind : {TransportKind::zero, TransportKind::shift, TransportKind::neighbor_split,
                    TransportKind::cluster_uniform, TransportKind::nearest_mark,
                    TransportKind::random_neighbor})
    if (to_string(kind) == text) return kind;
  return std::nullopt;
}

bool is_deterministic(TransportKind kind) {
  return kind != TransportKind::nearest_mark && kind != TransportKind::random_neighbor;
}

namespace {

std::vector<int> torus_coordinates(VertexId v, int dimension, int side) {
  std::vector<int> c(static_cast<std::size_t>(dimension));
  for (int d = 0; d < dimension; ++d) {
    c[static_cast<std::size_t>(d)] = static_cast<int>(v % static_cast<VertexId>(side));
    v /= static_cast<VertexId>(side);
  }
  return c;
}

int torus_distance(const std::vector<int>& a, const std::vector<int>& b, int side) {
  int total = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const int diff = std::abs(a[d] - b[d]);
    total += std::min(diff, side - diff);
  }
  return total;
}

}  // namespace

std::vector<Transfer> evaluate_transport(const Graph& torus, int dimension, int side,
                                         const TransportSpec& spec,
                                         const ForestConfig& forest, Rng& rng) {
  const auto n = static_cast<VertexId>(torus.vertex_count());
  std::vector<Transfer> out;
  switch (spec.kind) {
    case TransportKind::zero:
      break;
    case TransportKind::shift:
      for (VertexId v = 0; v < n; ++v) {
        const VertexId coord = v % static_cast<VertexId>(side);
        const VertexId next = coord + 1 == static_cast<VertexId>(side) ? v - coord : v + 1;
        out.push_back({v, next, Rational(1)});
      }
      break;
    case TransportKind::neighbor_split:
      for (VertexId v = 0; v < n; ++v) {
        const Rational share(1, static_cast<long long>(torus.degree(v)));
        for (const Incidence& inc : torus.incident(v)) out.push_back({v, inc.neighbor, share});
      }
      break;
    case TransportKind::cluster_uniform: {
      const Components parts = components(torus, forest);
      std::vector<std::vector<VertexId>> members(parts.count());
      for (VertexId v = 0; v < n; ++v) members[parts.label[v]].push_back(v);
      for (VertexId v = 0; v < n; ++v) {
        const auto& cluster = members[parts.label[v]];
        const Rational share(1, static_cast<long long>(cluster.size()));
        for (VertexId w : cluster) out.push_back({v, w, share});
      }
      break;
    }
    case TransportKind::nearest_mark: {
      std::vector<VertexId> marked;
      for (VertexId v = 0; v < n; ++v)
        if (rng.bernoulli(spec.mark_probability)) marked.push_back(v);
      if (marked.empty()) break;
      std::vector<std::vector<int>> coords(n);
      for (VertexId v = 0; v < n; ++v) coords[v] = torus_coordinates(v, dimension, side);
      std::vector<VertexId> nearest;
      for (VertexId v = 0; v < n; ++v) {
        int best = -1;
        nearest.clear();
        for (VertexId m : marked) {
          const int d = torus_distance(coords[v], coords[m], side);
          if (best < 0 || d < best) {
            best = d;
            nearest.assign(1, m);
          } else if (d == best) {
            nearest.push_back(m);
          }
        }
        const Rational share(1, static_cast<long long>(nearest.size()));
        for (VertexId m : nearest) out.push_back({v, m, share});
      }
      break;
    }
    case TransportKind::random_neighbor:
      for (VertexId v = 0; v < n; ++v) {
        const auto inc = torus.incident(v);
        out.push_back({v, inc[rng.index(inc.size())].neighbor, Rational(1)});
      }
      break;
  }
  return out;
}

namespace {

struct ReplicateMass {
  Rational sent_origin;
  Rational received_origin;
  // Per-vertex tallies, kept only when the run compares vertex by vertex.
  std::vector<Rational> sent;
  std::vector<Rational> received;
};

ReplicateMass tally(const std::vector<Transfer>& transfers, std::size_t n, bool per_vertex) {
  ReplicateMass mass;
  if (per_vertex) {
    mass.sent.assign(n, Rational(0));
    mass.received.assign(n, Rational(0));
  }
  for (const Transfer& t : transfers) {
    require(t.from < n && t.to < n, ErrorCode::invalid_argument,
            "transport references a vertex outside the window");
    if (t.from == 0) mass.sent_origin += t.mass;
    if (t.to == 0) mass.received_origin += t.mass;
    if (per_vertex) {
      mass.sent[t.from] += t.mass;
      mass.received[t.to] += t.mass;
    }
  }
  return mass;
}

MtpReport summarize(const std::vector<ReplicateMass>& masses, std::size_t n, bool per_vertex) {
  MtpReport report;
  report.replicates = masses.size();
  std::vector<Rational> sent(per_vertex ? n : 0), received(per_vertex ? n : 0);
  Rational sent_origin = 0;
  Rational received_origin = 0;
  std::vector<double> sent_samples, received_samples;
  for (const ReplicateMass& m : masses) {
    for (std::size_t v = 0; v < sent.size(); ++v) {
      sent[v] += m.sent[v];
      received[v] += m.received[v];
    }
    sent_origin += m.sent_origin;
    received_origin += m.received_origin;
    sent_samples.push_back(static_cast<double>(m.sent_origin));
    received_samples.push_back(static_cast<double>(m.received_origin));
  }
  report.origin_exact_equal = sent_origin == received_origin;
  if (per_vertex) {
    report.exact_equal = sent == received;
    const Rational scale(static_cast<long long>(n * masses.size()));
    report.sent_total = std::accumulate(sent.begin(), sent.end(), Rational(0)) / scale;
    report.received_total =
        std::accumulate(received.begin(), received.end(), Rational(0)) / scale;
  }
  const auto s = stats::mean_se(sent_samples);
  const auto r = stats::mean_se(received_samples);
  report.sent_mean = s.mean;
  report.received_mean = r.mean;
  report.sent_se = s.se;
  report.received_se = r.se;
  const double combined = std::sqrt(s.se * s.se + r.se * r.se);
  report.z_score = combined > 0.0 ? (s.mean - r.mean) / combined : 0.0;
  return report;
}

}  // namespace

MtpReport mtp_check(const TransportSpec& spec, int dimension, int side,
                    ForestMode forest_mode, std::size_t replicates, std::uint64_t seed,
                    std::size_t jobs) {
  require(replicates > 0, ErrorCode::invalid_argument, "need at least one replicate");
  require(spec.evaluation == TransportEvaluation::monte_carlo || is_deterministic(spec.kind),
          ErrorCode::invalid_argument,
          std::string("transport ") + std::string(to_string(spec.kind)) +
              " is randomized; use monte_carlo evaluation");
  require(spec.mark_probability > 0.0 && spec.mark_probability <= 1.0,
          ErrorCode::invalid_argument, "mark probability must lie in (0,1]");
  const bool needs_forest = spec.kind == TransportKind::cluster_uniform;
  require(!needs_forest || !is_wired(forest_mode), ErrorCode::precondition,
          "wired forests need boundary stubs; the torus has none");
  const Graph torus = build_torus(dimension, side);
  const std::size_t n = torus.vertex_count();
  const bool exact = spec.evaluation == TransportEvaluation::exact_symmetric;
  std::vector<ReplicateMass> masses(replicates);
  parallel_for(replicates, jobs, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    ForestConfig forest(torus.edge_count());
    if (needs_forest) {
      if (is_minimal(forest_mode)) {
        forest = free_msf(torus, sample_labels(torus, rng));
      } else {
        forest = wilson_ust(torus, 0, rng);
      }
    }
    masses[i] = tally(evaluate_transport(torus, dimension, side, spec, forest, rng), n, exact);
  });
  MtpReport report = summarize(masses, n, exact);
  report.spec = spec;
  return report;
}

MtpReport mtp_check_custom(const Graph& g, const TransportFn& transport,
                           std::size_t replicates, std::uint64_t seed) {
  require(replicates > 0, ErrorCode::invalid_argument, "need at least one replicate");
  std::vector<ReplicateMass> masses(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    Rng rng(derive_seed(seed, i));
    masses[i] = tally(transport(rng), g.vertex_count(), true);
  }
  return summarize(masses, g.vertex_count(), true);
}

}  // namespace forestlab
