#include "forestlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>

#include "forestlab/error.hpp"

namespace forestlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::edge_present: return "edge_present";
    case ErrorCode::edge_absent: return "edge_absent";
    case ErrorCode::same_cluster: return "same_cluster";
    case ErrorCode::condition_d_failed: return "condition_d_failed";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

Graph::Graph(std::vector<VertexMark> marks, std::vector<Edge> edges,
             std::optional<VertexId> wired)
    : marks_(std::move(marks)), edges_(std::move(edges)), wired_(wired) {
  const std::size_t n = marks_.size();
  if (wired_) {
    require(*wired_ < n, ErrorCode::invalid_argument, "wired vertex does not exist");
    require(marks_[*wired_].role == GadgetRole::none, ErrorCode::invalid_argument,
            "wired vertex cannot carry a gadget role");
  }
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    require(e.u < n && e.v < n, ErrorCode::invalid_argument,
            "edge " + std::to_string(i) + " references a missing vertex");
    require(e.u != e.v, ErrorCode::invalid_argument,
            "edge " + std::to_string(i) + " is a self-loop");
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  incidence_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    incidence_[fill[e.u]++] = {e.v, i};
    incidence_[fill[e.v]++] = {e.u, i};
  }
}

bool Graph::has_boundary() const {
  return std::any_of(marks_.begin(), marks_.end(),
                     [](const VertexMark& m) { return m.boundary && m.stubs > 0; });
}

bool Graph::has_gadgets() const {
  return std::any_of(marks_.begin(), marks_.end(),
                     [](const VertexMark& m) { return m.role != GadgetRole::none; });
}

// ---------------------------------------------------------------------------

namespace {

std::size_t checked_power(int base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    result *= static_cast<std::size_t>(base);
    require(result <= (1u << 26), ErrorCode::invalid_argument, "graph too large");
  }
  return result;
}

}  // namespace

Graph build_torus(int dimension, int side) {
  require(dimension >= 1, ErrorCode::invalid_argument, "torus dimension must be positive");
  require(side >= 3, ErrorCode::invalid_argument,
          "torus side must be at least 3 (smaller sides create parallel edges)");
  const std::size_t n = checked_power(side, dimension);
  std::vector<Edge> edges;
  edges.reserve(n * static_cast<std::size_t>(dimension));
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t stride = 1;
    for (int d = 0; d < dimension; ++d) {
      const std::size_t coord = (v / stride) % static_cast<std::size_t>(side);
      const std::size_t next = coord + 1 == static_cast<std::size_t>(side)
                                   ? v - coord * stride
                                   : v + stride;
      edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(next)});
      stride *= static_cast<std::size_t>(side);
    }
  }
  return Graph(std::vector<VertexMark>(n), std::move(edges));
}

Graph build_box(int dimension, int side) {
  require(dimension >= 1, ErrorCode::invalid_argument, "box dimension must be positive");
  require(side >= 1, ErrorCode::invalid_argument, "box side must be positive");
  const std::size_t n = checked_power(side, dimension);
  std::vector<VertexMark> marks(n);
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t stride = 1;
    std::uint32_t missing = 0;
    for (int d = 0; d < dimension; ++d) {
      const std::size_t coord = (v / stride) % static_cast<std::size_t>(side);
      if (coord == 0) ++missing;
      if (coord + 1 == static_cast<std::size_t>(side)) {
        ++missing;
      } else {
        edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(v + stride)});
      }
      stride *= static_cast<std::size_t>(side);
    }
    marks[v].boundary = missing > 0;
    marks[v].stubs = missing;
  }
  return Graph(std::move(marks), std::move(edges));
}

Graph build_tree_ball(int degree, int radius) {
  require(degree >= 3, ErrorCode::invalid_argument, "tree degree must be at least 3");
  require(radius >= 1, ErrorCode::invalid_argument, "tree radius must be at least 1");
  std::vector<VertexMark> marks(1);
  std::vector<Edge> edges;
  std::vector<VertexId> frontier{0};
  for (int depth = 1; depth <= radius; ++depth) {
    std::vector<VertexId> next;
    for (VertexId parent : frontier) {
      const int children = parent == 0 ? degree : degree - 1;
      for (int c = 0; c < children; ++c) {
        const auto child = static_cast<VertexId>(marks.size());
        marks.emplace_back();
        edges.push_back({parent, child});
        next.push_back(child);
      }
    }
    require(marks.size() <= (1u << 26), ErrorCode::invalid_argument, "graph too large");
    frontier = std::move(next);
  }
  for (VertexId leaf : frontier) {
    marks[leaf].boundary = true;
    marks[leaf].stubs = static_cast<std::uint32_t>(degree - 1);
  }
  return Graph(std::move(marks), std::move(edges));
}

Graph build_path(int vertices) {
  require(vertices >= 1, ErrorCode::invalid_argument, "path needs a vertex");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < vertices; ++i)
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  return Graph(std::vector<VertexMark>(static_cast<std::size_t>(vertices)), std::move(edges));
}

Graph build_cycle(int vertices) {
  require(vertices >= 3, ErrorCode::invalid_argument, "cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 0; i < vertices; ++i)
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % vertices)});
  return Graph(std::vector<VertexMark>(static_cast<std::size_t>(vertices)), std::move(edges));
}

Graph build_complete(int vertices) {
  require(vertices >= 1, ErrorCode::invalid_argument, "complete graph needs a vertex");
  std::vector<Edge> edges;
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j)
      edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
  return Graph(std::vector<VertexMark>(static_cast<std::size_t>(vertices)), std::move(edges));
}

Graph build_from_edge_list(const EdgeListSpec& spec) {
  std::unordered_map<std::int64_t, VertexId> index;
  std::vector<VertexMark> marks;
  marks.reserve(spec.vertices.size());
  for (const VertexSpec& v : spec.vertices) {
    const auto [it, inserted] = index.emplace(v.id, static_cast<VertexId>(marks.size()));
    require(inserted, ErrorCode::invalid_argument,
            "duplicate vertex id " + std::to_string(v.id));
    marks.push_back(v.mark);
  }
  auto lookup = [&](std::int64_t id) {
    auto it = index.find(id);
    require(it != index.end(), ErrorCode::invalid_argument,
            "edge references undeclared vertex " + std::to_string(id));
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(spec.edges.size());
  for (const auto& [a, b] : spec.edges) {
    require(a != b, ErrorCode::invalid_argument,
            "self-loop at vertex " + std::to_string(a));
    edges.push_back({lookup(a), lookup(b)});
  }
  std::optional<VertexId> wired;
  if (spec.wired) wired = lookup(*spec.wired);
  return Graph(std::move(marks), std::move(edges), wired);
}

Graph wire_boundary(const Graph& g) {
  require(!g.is_wired(), ErrorCode::precondition, "graph is already wired");
  require(g.has_boundary(), ErrorCode::precondition,
          "wiring needs at least one boundary vertex with stubs");
  std::vector<VertexMark> marks(g.marks().begin(), g.marks().end());
  const auto z = static_cast<VertexId>(marks.size());
  marks.emplace_back();
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const VertexMark& m = g.mark(v);
    if (!m.boundary) continue;
    for (std::uint32_t s = 0; s < m.stubs; ++s) edges.push_back({v, z});
  }
  return Graph(std::move(marks), std::move(edges), z);
}

Graph unwire(const Graph& g) {
  require(g.is_wired(), ErrorCode::precondition, "graph is not wired");
  const VertexId z = *g.wired_vertex();
  auto remap = [z](VertexId v) { return v > z ? v - 1 : v; };
  std::vector<VertexMark> marks;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (v != z) marks.push_back(g.mark(v));
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (!e.touches(z)) edges.push_back({remap(e.u), remap(e.v)});
  return Graph(std::move(marks), std::move(edges));
}

Graph build_decorated(const Graph& base) {
  require(!base.has_gadgets(), ErrorCode::precondition,
          "graph is already decorated (gadget roles present)");
  require(!base.is_wired(), ErrorCode::precondition, "cannot decorate a wired graph");
  const std::size_t n = base.vertex_count();
  std::vector<VertexMark> marks(3 * n);
  for (std::size_t v = 0; v < n; ++v) {
    marks[v] = base.mark(static_cast<VertexId>(v));
    marks[v].role = GadgetRole::base;
    marks[n + v].role = GadgetRole::prime;
    marks[2 * n + v].role = GadgetRole::double_prime;
  }
  std::vector<Edge> edges(base.edges().begin(), base.edges().end());
  edges.reserve(base.edge_count() + 3 * n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto b = static_cast<VertexId>(v);
    const auto p = static_cast<VertexId>(n + v);
    const auto pp = static_cast<VertexId>(2 * n + v);
    edges.push_back({b, p});
    edges.push_back({b, pp});
    edges.push_back({p, pp});
  }
  return Graph(std::move(marks), std::move(edges));
}

std::vector<GadgetSite> gadget_sites(const Graph& g) {
  std::vector<GadgetSite> sites;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.mark(v).role != GadgetRole::base) continue;
    GadgetSite site{v, kNoVertex, kNoVertex, kNoEdge, kNoEdge, kNoEdge};
    for (const Incidence& inc : g.incident(v)) {
      const GadgetRole role = g.mark(inc.neighbor).role;
      if (role == GadgetRole::prime) {
        site.prime = inc.neighbor;
        site.to_prime = inc.edge;
      } else if (role == GadgetRole::double_prime) {
        site.double_prime = inc.neighbor;
        site.to_double_prime = inc.edge;
      }
    }
    require(site.prime != kNoVertex && site.double_prime != kNoVertex,
            ErrorCode::invalid_argument,
            "base vertex " + std::to_string(v) + " has an incomplete gadget");
    for (const Incidence& inc : g.incident(site.prime))
      if (inc.neighbor == site.double_prime) site.across = inc.edge;
    require(site.across != kNoEdge, ErrorCode::invalid_argument,
            "gadget of base vertex " + std::to_string(v) + " lacks the {v',v''} edge");
    sites.push_back(site);
  }
  return sites;
}

Subgraph base_subgraph(const Graph& g) {
  require(g.has_gadgets(), ErrorCode::precondition, "graph is not decorated");
  std::vector<VertexId> local(g.vertex_count(), kNoVertex);
  Subgraph sub;
  std::vector<VertexMark> marks;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.mark(v).role != GadgetRole::base) continue;
    local[v] = static_cast<VertexId>(marks.size());
    VertexMark m = g.mark(v);
    m.role = GadgetRole::none;
    marks.push_back(m);
    sub.parent_vertex.push_back(v);
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (local[ed.u] == kNoVertex || local[ed.v] == kNoVertex) continue;
    edges.push_back({local[ed.u], local[ed.v]});
    sub.parent_edge.push_back(e);
  }
  sub.graph = Graph(std::move(marks), std::move(edges));
  return sub;
}

// ---------------------------------------------------------------------------

std::vector<int> distances(const Graph& g, VertexId x) {
  std::vector<int> dist(g.vertex_count(), kUnreachable);
  const auto z = g.wired_vertex();
  if (z && *z == x) return dist;
  std::deque<VertexId> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const Incidence& inc : g.incident(u)) {
      if (dist[inc.neighbor] != kUnreachable || (z && inc.neighbor == *z)) continue;
      dist[inc.neighbor] = dist[u] + 1;
      queue.push_back(inc.neighbor);
    }
  }
  return dist;
}

int edge_distance(const Graph& g, std::span<const int> dist, EdgeId e) {
  const int a = dist[g.edge(e).u];
  const int b = dist[g.edge(e).v];
  if (a == kUnreachable) return b;
  if (b == kUnreachable) return a;
  return std::min(a, b);
}

BallView ball(const Graph& g, VertexId x, int radius) {
  const auto dist = distances(g, x);
  BallView view{x, radius, {}};
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (dist[v] != kUnreachable && dist[v] <= radius) view.vertices.push_back(v);
  return view;
}

SphereEdgeSet sphere_edges(const Graph& g, VertexId x, int k) {
  const auto dist = distances(g, x);
  SphereEdgeSet sphere{x, k, {}};
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (edge_distance(g, dist, e) == k) sphere.edges.push_back(e);
  return sphere;
}

int eccentricity(const Graph& g, VertexId x) {
  const auto dist = distances(g, x);
  return *std::max_element(dist.begin(), dist.end());
}

bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<VertexId> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.incident(u)) {
      if (seen[inc.neighbor]) continue;
      seen[inc.neighbor] = true;
      ++reached;
      stack.push_back(inc.neighbor);
    }
  }
  return reached == g.vertex_count();
}

std::vector<EdgeId> edges_between(const Graph& g, VertexId u, VertexId v) {
  std::vector<EdgeId> found;
  if (u >= g.vertex_count() || v >= g.vertex_count()) return found;
  for (const Incidence& inc : g.incident(u))
    if (inc.neighbor == v) found.push_back(inc.edge);
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace forestlab
