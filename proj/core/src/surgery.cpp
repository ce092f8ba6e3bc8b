#include "forestlab/surgery.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "forestlab/error.hpp"
#include "forestlab/oracles.hpp"

namespace forestlab {

namespace {

void check_host(const Graph& g, const ForestConfig& forest) {
  require(forest.edge_capacity() == g.edge_count(), ErrorCode::invalid_argument,
          "forest does not belong to this graph");
}

VertexId other_endpoint(const Graph& g, EdgeId e, VertexId x) {
  require(e < g.edge_count(), ErrorCode::invalid_argument, "edge outside graph");
  require(g.edge(e).touches(x), ErrorCode::invalid_argument,
          "anchor " + std::to_string(x) + " is not an endpoint of edge " + std::to_string(e));
  return g.edge(e).other(x);
}

bool within(const Graph& g, const std::vector<int>& dist, EdgeId f, int r) {
  const int d = edge_distance(g, dist, f);
  return d != kUnreachable && d <= r;
}

}  // namespace

ForestConfig apply_surgery(const Graph& g, const ForestConfig& omega, EdgeId e, EdgeId f) {
  check_host(g, omega);
  require(e < g.edge_count(), ErrorCode::invalid_argument, "edge outside graph");
  require(!omega.contains(e), ErrorCode::edge_present,
          "edge " + std::to_string(e) + " is already in the forest");
  if (f != kNoEdge)
    require(omega.contains(f), ErrorCode::edge_absent,
            "edge " + std::to_string(f) + " is not in the forest");
  UnionFind uf(g.vertex_count());
  for (EdgeId h : omega.edges())
    if (h != f) uf.unite(g.edge(h).u, g.edge(h).v);
  require(!uf.same(g.edge(e).u, g.edge(e).v), ErrorCode::same_cluster,
          "endpoints of edge " + std::to_string(e) + " lie in one cluster");
  ForestConfig out = omega;
  if (f != kNoEdge) out.erase(f);
  out.insert(e);
  return out;
}

bool condition_d(const Graph& g, const ForestConfig& tree, EdgeId e, VertexId x, int r) {
  check_host(g, tree);
  const VertexId y = other_endpoint(g, e, x);
  const std::vector<int> dist = distances(g, x);
  UnionFind uf(g.vertex_count());
  for (EdgeId h : tree.edges())
    if (within(g, dist, h, r)) uf.unite(g.edge(h).u, g.edge(h).v);
  return !uf.same(x, y);
}

EdgeId usf_pivot_edge(const Graph& g, const ForestConfig& tree, EdgeId e, VertexId x, int r) {
  require(r >= 0, ErrorCode::invalid_argument, "radius must be non-negative");
  const VertexId y = other_endpoint(g, e, x);
  require(condition_d(g, tree, e, x, r), ErrorCode::condition_d_failed,
          "x and y are joined inside the ball of radius " + std::to_string(r + 1));

  // Tree path from x to y via breadth-first parents.
  std::vector<EdgeId> parent(g.vertex_count(), kNoEdge);
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::deque<VertexId> queue{x};
  seen[x] = 1;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const Incidence& inc : g.incident(u)) {
      if (!tree.contains(inc.edge) || seen[inc.neighbor]) continue;
      seen[inc.neighbor] = 1;
      parent[inc.neighbor] = inc.edge;
      queue.push_back(inc.neighbor);
    }
  }
  require(seen[y] != 0, ErrorCode::precondition, "the tree does not join the endpoints of e");
  std::vector<EdgeId> path;
  for (VertexId v = y; v != x; v = g.edge(parent[v]).other(v)) path.push_back(parent[v]);
  std::reverse(path.begin(), path.end());

  // Distances step by at most one along the path except across z, so when D
  // holds some path edge sits exactly at r + 1.
  const std::vector<int> dist = distances(g, x);
  for (EdgeId h : path)
    if (edge_distance(g, dist, h) == r + 1) return h;
  fail(ErrorCode::internal, "no sphere edge on the tree path");
}

ForestConfig msf_of_class(const Graph& g, const EdgeLabels& labels, CycleClass cycles) {
  if (cycles == CycleClass::wired || !g.is_wired()) return minimal_spanning_forest(g, labels);
  require(labels.size() == g.edge_count(), ErrorCode::invalid_argument,
          "label count does not match edge count");
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!g.is_wired_edge(e)) order.push_back(e);
  std::sort(order.begin(), order.end(),
            [&](EdgeId a, EdgeId b) { return labels[a] < labels[b]; });
  UnionFind uf(g.vertex_count());
  ForestConfig forest(g.edge_count(), Provenance::free);
  for (EdgeId e : order)
    if (uf.unite(g.edge(e).u, g.edge(e).v)) forest.insert(e);
  return forest;
}

RelabelResult msf_relabel(const Graph& g, const EdgeLabels& labels, EdgeId e, VertexId x,
                          int r, CycleClass cycles) {
  require(labels.size() == g.edge_count(), ErrorCode::invalid_argument,
          "label count does not match edge count");
  require(r >= 0, ErrorCode::invalid_argument, "radius must be non-negative");
  const VertexId y = other_endpoint(g, e, x);
  require(!g.is_wired_edge(e), ErrorCode::invalid_argument,
          "the inserted edge must be a window edge");

  const ForestConfig forest = msf_of_class(g, labels, cycles);
  UnionFind clusters(g.vertex_count());
  for (EdgeId h : forest.edges())
    if (!g.is_wired_edge(h)) clusters.unite(g.edge(h).u, g.edge(h).v);
  require(!clusters.same(x, y), ErrorCode::same_cluster,
          "endpoints of edge " + std::to_string(e) + " lie in one cluster");

  const std::vector<int> dist = distances(g, x);
  auto in_cluster = [&](EdgeId h, VertexId v) {
    return !g.is_wired_edge(h) && clusters.same(g.edge(h).u, v);
  };
  auto excluded = [&](EdgeId h) {
    return in_cluster(h, y) || (in_cluster(h, x) && within(g, dist, h, r));
  };

  RelabelResult out;
  out.e = e;
  out.x = x;
  out.r = r;
  out.cycles = cycles;
  out.labels = labels;
  std::vector<EdgeId> ignored;
  for (;;) {
    const ZResult z = z_value_ignoring(g, labels, e, ignored, cycles);
    if (z.phi == kNoEdge) {
      require(!z.z && out.pivots.empty(), ErrorCode::internal,
              "relabelling lost the cycle through e");
      break;
    }
    out.pivots.push_back(z.phi);
    out.thresholds.push_back(*z.z);
    if (!excluded(z.phi)) {
      out.terminal = z.phi;
      break;
    }
    ignored.push_back(z.phi);
    require(ignored.size() <= g.edge_count(), ErrorCode::internal, "relabelling did not stop");
  }
  out.k = std::max<std::size_t>(1, out.pivots.size());
  if (out.terminal != kNoEdge && !g.is_wired_edge(out.terminal))
    out.window_terminal = out.terminal;

  if (out.pivots.size() > 1) {
    const double zk = out.thresholds.back();
    for (std::size_t i = 0; i + 1 < out.pivots.size(); ++i)
      out.labels.set(out.pivots[i], labels[out.pivots[i]] * zk);
    require(out.labels.is_injective(), ErrorCode::internal, "rescaled labels collide");
  }
  require(msf_of_class(g, out.labels, cycles) == forest, ErrorCode::internal,
          "relabelling changed the forest");
  return out;
}

InsertResult msf_insert(const Graph& g, const RelabelResult& relabeled) {
  const EdgeLabels& before = relabeled.labels;
  require(before.size() == g.edge_count(), ErrorCode::invalid_argument,
          "relabel result does not belong to this graph");
  const EdgeId e = relabeled.e;
  const ZResult z = z_value(g, before, e, relabeled.cycles);

  InsertResult out;
  if (z.z) {
    out.new_label = *z.z / 2.0;
  } else {
    const auto values = before.values();
    out.new_label = *std::min_element(values.begin(), values.end()) / 2.0;
  }
  // Z/2 can coincide with an existing label (hand-picked examples do this);
  // any value below Z gives the same forest, so keep halving.
  while (before.collides(out.new_label)) out.new_label /= 2.0;
  require(out.new_label > 0.0, ErrorCode::internal, "inserted label underflows");
  out.labels = before;
  out.labels.set(e, out.new_label);
  out.removed = z.phi;

  out.predicted = msf_of_class(g, before, relabeled.cycles);
  out.predicted.insert(e);
  if (z.phi != kNoEdge) out.predicted.erase(z.phi);
  out.recomputed = msf_of_class(g, out.labels, relabeled.cycles);
  out.swap_identity_holds = out.predicted == out.recomputed;
  return out;
}

// ---------------------------------------------------------------------------

RadonNikodymReport radon_nikodym_exact(const Graph& window, EdgeId e, VertexId x, int r,
                                       std::size_t cap) {
  require(!window.is_wired(), ErrorCode::invalid_argument,
          "pass the unwired window; the completion is built here");
  require(window.has_boundary(), ErrorCode::precondition, "window has no boundary stubs");
  require(r >= 0, ErrorCode::invalid_argument, "radius must be non-negative");
  const VertexId y = other_endpoint(window, e, x);
  const Graph hat = wire_boundary(window);
  const auto trees = oracles::enumerate_spanning_trees(hat, cap);

  RadonNikodymReport report;
  report.tree_count = trees.count();
  report.sphere_size = sphere_edges(hat, x, r + 1).edges.size();

  struct AtomTally {
    std::size_t trees = 0;
    std::set<std::vector<EdgeId>> images;
  };
  std::map<std::vector<EdgeId>, AtomTally> atoms;
  std::map<std::vector<EdgeId>, std::size_t> fibres;
  for (const auto& edges : trees.trees) {
    const ForestConfig tree(hat.edge_count(), edges, Provenance::wired);
    UnionFind clusters(hat.vertex_count());
    for (EdgeId h : edges)
      if (!hat.is_wired_edge(h)) clusters.unite(hat.edge(h).u, hat.edge(h).v);
    if (clusters.same(x, y)) {
      ++report.outside_event;
      continue;
    }
    if (!condition_d(hat, tree, e, x, r)) {
      ++report.condition_d_failures;
      continue;
    }
    const EdgeId f = usf_pivot_edge(hat, tree, e, x, r);
    std::vector<EdgeId> image = apply_surgery(hat, tree, e, f).edges();
    std::vector<EdgeId> window_edges;
    for (EdgeId h : edges)
      if (h < window.edge_count()) window_edges.push_back(h);
    AtomTally& atom = atoms[window_edges];
    ++atom.trees;
    atom.images.insert(image);
    ++fibres[std::move(image)];
  }
  for (const auto& [image, count] : fibres)
    report.max_preimages = std::max(report.max_preimages, count);
  for (const auto& [window_edges, tally] : atoms) {
    RadonNikodymAtom atom;
    atom.window = window_edges;
    atom.trees = tally.trees;
    atom.images = tally.images.size();
    atom.ratio = Rational(static_cast<long long>(atom.trees)) /
                 Rational(static_cast<long long>(atom.images));
    report.atoms.push_back(std::move(atom));
  }
  return report;
}

DeltaBoundReport delta_bound_check(const Graph& window, EdgeId e, VertexId x, int r,
                                   std::size_t cap) {
  DeltaBoundReport out;
  out.detail = radon_nikodym_exact(window, e, x, r, cap);
  const std::size_t s = out.detail.sphere_size;
  out.vacuous = out.detail.atoms.empty();
  out.preimage_bound_holds = out.detail.max_preimages <= s;
  out.atom_bound_holds = std::all_of(
      out.detail.atoms.begin(), out.detail.atoms.end(),
      [&](const RadonNikodymAtom& a) { return a.images * s >= a.trees; });
  return out;
}

}  // namespace forestlab
