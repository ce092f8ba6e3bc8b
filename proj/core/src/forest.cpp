#include "forestlab/forest.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "forestlab/error.hpp"

namespace forestlab {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

// ---------------------------------------------------------------------------

ForestConfig::ForestConfig(std::size_t edge_capacity, std::span<const EdgeId> edges,
                           Provenance provenance)
    : ForestConfig(edge_capacity, provenance) {
  for (EdgeId e : edges) insert(e);
}

void ForestConfig::insert(EdgeId e) {
  require(e < member_.size(), ErrorCode::invalid_argument,
          "edge " + std::to_string(e) + " outside host graph");
  if (!member_[e]) {
    member_[e] = 1;
    ++count_;
  }
}

void ForestConfig::erase(EdgeId e) {
  require(e < member_.size(), ErrorCode::invalid_argument,
          "edge " + std::to_string(e) + " outside host graph");
  if (member_[e]) {
    member_[e] = 0;
    --count_;
  }
}

std::vector<EdgeId> ForestConfig::edges() const {
  std::vector<EdgeId> out;
  out.reserve(count_);
  for (EdgeId e = 0; e < member_.size(); ++e)
    if (member_[e]) out.push_back(e);
  return out;
}

ForestConfig ForestConfig::restricted(std::size_t capacity, Provenance provenance) const {
  ForestConfig out(capacity, provenance);
  for (EdgeId e = 0; e < capacity && e < member_.size(); ++e)
    if (member_[e]) out.insert(e);
  return out;
}

bool is_acyclic(const Graph& g, const ForestConfig& forest) {
  UnionFind uf(g.vertex_count());
  for (EdgeId e : forest.edges())
    if (!uf.unite(g.edge(e).u, g.edge(e).v)) return false;
  return true;
}

// ---------------------------------------------------------------------------

EdgeLabels::EdgeLabels(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    require(v > 0.0 && v < 1.0, ErrorCode::invalid_argument,
            "labels must lie in the open interval (0,1)");
  require(is_injective(), ErrorCode::invalid_argument, "labels must be distinct");
}

void EdgeLabels::set(EdgeId e, double value) {
  require(value > 0.0 && value < 1.0, ErrorCode::invalid_argument,
          "labels must lie in the open interval (0,1)");
  values_.at(e) = value;
}

bool EdgeLabels::is_injective() const {
  std::vector<double> sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool EdgeLabels::collides(double value) const {
  return std::find(values_.begin(), values_.end(), value) != values_.end();
}

EdgeLabels sample_labels(const Graph& g, Rng& rng) {
  std::vector<double> values(g.edge_count());
  for (double& v : values) v = rng.uniform01();
  std::vector<EdgeId> order(values.size());
  for (;;) {
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    bool redrawn = false;
    // Within a run of equal labels the lowest edge id keeps its draw.
    for (std::size_t i = 1; i < order.size(); ++i) {
      const double previous = values[order[i - 1]];
      if (values[order[i]] == previous) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == previous) {
          values[order[j]] = rng.uniform01();
          ++j;
        }
        redrawn = true;
        i = j;
      }
    }
    if (!redrawn) break;
  }
  return EdgeLabels(std::move(values));
}

EdgeLabels joint_labels(const EdgeLabels& window, const EdgeLabels& star) {
  std::vector<double> values(window.values().begin(), window.values().end());
  values.insert(values.end(), star.values().begin(), star.values().end());
  return EdgeLabels(std::move(values));
}

// ---------------------------------------------------------------------------

ForestConfig wilson_ust(const Graph& g, VertexId root, Rng& rng) {
  require(root < g.vertex_count(), ErrorCode::invalid_argument, "root outside graph");
  require(is_connected(g), ErrorCode::disconnected,
          "uniform spanning tree needs a connected graph");
  const std::size_t n = g.vertex_count();
  std::vector<std::uint8_t> in_tree(n, 0);
  std::vector<EdgeId> next_edge(n, kNoEdge);
  in_tree[root] = 1;
  ForestConfig tree(g.edge_count(), Provenance::free);
  for (VertexId start = 0; start < n; ++start) {
    VertexId u = start;
    while (!in_tree[u]) {
      const auto inc = g.incident(u);
      const Incidence& step = inc[rng.index(inc.size())];
      next_edge[u] = step.edge;
      u = step.neighbor;
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      tree.insert(next_edge[u]);
      u = g.edge(next_edge[u]).other(u);
    }
  }
  return tree;
}

ForestConfig fusf_window(const Graph& g, Rng& rng) {
  require(!g.is_wired(), ErrorCode::precondition, "free window forest needs an unwired graph");
  return wilson_ust(g, 0, rng);
}

ForestConfig wusf_window(const Graph& g, Rng& rng) {
  require(g.has_boundary(), ErrorCode::precondition,
          "wired window forest needs boundary stubs");
  const Graph completed = wire_boundary(g);
  const ForestConfig tree = wilson_ust(completed, *completed.wired_vertex(), rng);
  return tree.restricted(g.edge_count(), Provenance::wired);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<EdgeId> edges_by_label(const EdgeLabels& labels) {
  std::vector<EdgeId> order(labels.size());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::sort(order.begin(), order.end(),
            [&](EdgeId a, EdgeId b) { return labels[a] < labels[b]; });
  return order;
}

void check_labels(const Graph& g, const EdgeLabels& labels) {
  require(labels.size() == g.edge_count(), ErrorCode::invalid_argument,
          "label count does not match edge count");
}

}  // namespace

ForestConfig minimal_spanning_forest(const Graph& g, const EdgeLabels& labels) {
  check_labels(g, labels);
  UnionFind uf(g.vertex_count());
  ForestConfig forest(g.edge_count(), Provenance::free);
  for (EdgeId e : edges_by_label(labels))
    if (uf.unite(g.edge(e).u, g.edge(e).v)) forest.insert(e);
  return forest;
}

ForestConfig free_msf(const Graph& g, const EdgeLabels& labels) {
  return minimal_spanning_forest(g, labels);
}

ForestConfig wired_msf_window(const Graph& g, const EdgeLabels& labels,
                              const EdgeLabels& star_labels) {
  check_labels(g, labels);
  const Graph completed = wire_boundary(g);
  require(star_labels.size() == completed.edge_count() - g.edge_count(),
          ErrorCode::invalid_argument, "star label count does not match boundary stubs");
  const EdgeLabels joint = joint_labels(labels, star_labels);
  return minimal_spanning_forest(completed, joint)
      .restricted(g.edge_count(), Provenance::wired);
}

ZResult z_value_ignoring(const Graph& g, const EdgeLabels& labels, EdgeId e,
                         std::span<const EdgeId> ignored, CycleClass cycles) {
  check_labels(g, labels);
  require(e < g.edge_count(), ErrorCode::invalid_argument, "edge outside graph");
  const bool skip_wired = cycles == CycleClass::free && g.is_wired();
  auto usable = [&](EdgeId f) { return f != e && !(skip_wired && g.is_wired_edge(f)); };

  const VertexId x = g.edge(e).u;
  const VertexId y = g.edge(e).v;
  UnionFind uf(g.vertex_count());
  std::vector<std::uint8_t> is_ignored(g.edge_count(), 0);
  for (EdgeId f : ignored) {
    is_ignored.at(f) = 1;
    if (usable(f)) uf.unite(g.edge(f).u, g.edge(f).v);
  }
  if (uf.same(x, y)) return {0.0, kNoEdge};
  for (EdgeId f : edges_by_label(labels)) {
    if (!usable(f) || is_ignored[f]) continue;
    uf.unite(g.edge(f).u, g.edge(f).v);
    if (uf.same(x, y)) return {labels[f], f};
  }
  return {};
}

ZResult z_value(const Graph& g, const EdgeLabels& labels, EdgeId e, CycleClass cycles) {
  return z_value_ignoring(g, labels, e, {}, cycles);
}

ForestConfig predict_label_change(const Graph& g, const EdgeLabels& labels, EdgeId e,
                                  double new_label) {
  require(new_label > 0.0 && new_label < 1.0, ErrorCode::invalid_argument,
          "labels must lie in the open interval (0,1)");
  require(!labels.collides(new_label), ErrorCode::invalid_argument,
          "new label collides with an existing label");
  ForestConfig forest = minimal_spanning_forest(g, labels);
  const ZResult z = z_value(g, labels, e, CycleClass::wired);
  const bool below = !z.z || new_label < *z.z;
  if (forest.contains(e)) {
    if (!below) {
      forest.erase(e);
      forest.insert(z.phi);
    }
  } else if (below) {
    forest.insert(e);
    forest.erase(z.phi);
  }
  return forest;
}

std::vector<EdgeId> threshold_subgraph(const Graph& g, const EdgeLabels& labels,
                                       double alpha) {
  check_labels(g, labels);
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::invalid_argument,
          "threshold must lie in [0,1]");
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (labels[e] < alpha) out.push_back(e);
  return out;
}

std::string_view to_string(ForestMode mode) {
  switch (mode) {
    case ForestMode::fusf: return "fusf";
    case ForestMode::wusf: return "wusf";
    case ForestMode::fmsf: return "fmsf";
    case ForestMode::wmsf: return "wmsf";
  }
  return "fusf";
}

std::optional<ForestMode> parse_forest_mode(std::string_view text) {
  if (text == "fusf") return ForestMode::fusf;
  if (text == "wusf") return ForestMode::wusf;
  if (text == "fmsf") return ForestMode::fmsf;
  if (text == "wmsf") return ForestMode::wmsf;
  return std::nullopt;
}

}  // namespace forestlab
