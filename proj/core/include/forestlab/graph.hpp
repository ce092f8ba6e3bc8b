#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace forestlab {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
/// Stands for the empty edge ("f = empty set").
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

enum class GadgetRole : std::uint8_t { none, base, prime, double_prime };

struct VertexMark {
  bool boundary = false;
  /// Number of exterior edges this vertex lost when the window was cut out;
  /// wiring adds one edge to the wired vertex per stub.
  std::uint32_t stubs = 0;
  GadgetRole role = GadgetRole::none;

  friend bool operator==(const VertexMark&, const VertexMark&) = default;
};

struct Edge {
  VertexId u = kNoVertex;
  VertexId v = kNoVertex;

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return u == w || v == w; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// Finite multigraph window. Vertices are 0..n-1 and edges 0..m-1; both ids
/// are stable, so forests and surgery records index straight into them.
/// Immutable once constructed.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<VertexMark> marks, std::vector<Edge> edges,
        std::optional<VertexId> wired = std::nullopt);

  std::size_t vertex_count() const { return marks_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(VertexId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  const VertexMark& mark(VertexId v) const { return marks_[v]; }
  std::span<const VertexMark> marks() const { return marks_; }

  std::optional<VertexId> wired_vertex() const { return wired_; }
  bool is_wired() const { return wired_.has_value(); }
  bool is_wired_edge(EdgeId e) const {
    return wired_ && edges_[e].touches(*wired_);
  }
  /// True when some vertex declares at least one boundary stub.
  bool has_boundary() const;
  bool has_gadgets() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.marks_ == b.marks_ && a.edges_ == b.edges_ && a.wired_ == b.wired_;
  }

 private:
  std::vector<VertexMark> marks_;
  std::vector<Edge> edges_;
  std::optional<VertexId> wired_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidence_;
};

// ---------------------------------------------------------------------------
// Builders

/// Discrete torus (Z/side)^dimension, 2*dimension-regular.
Graph build_torus(int dimension, int side);

/// Box [0,side)^dimension of Z^d. Vertices missing lattice neighbours are
/// boundary-marked with one stub per missing neighbour, so wiring yields the
/// usual wired completion of a lattice window.
Graph build_box(int dimension, int side);

/// Ball of the given radius in the degree-regular tree, rooted at vertex 0
/// and numbered in breadth-first order. Leaves are boundary vertices carrying
/// degree-1 stubs.
Graph build_tree_ball(int degree, int radius);

Graph build_path(int vertices);
Graph build_cycle(int vertices);
Graph build_complete(int vertices);

struct VertexSpec {
  std::int64_t id = 0;
  VertexMark mark;
};

/// Edge list description with caller-chosen vertex ids. Vertex ids are
/// remapped to 0..n-1 in listing order; edge ids follow listing order.
struct EdgeListSpec {
  std::vector<VertexSpec> vertices;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::optional<std::int64_t> wired;
};

Graph build_from_edge_list(const EdgeListSpec& spec);

/// Wired completion: appends vertex z = n and, after all existing edges, one
/// edge {x, z} per boundary stub of x (vertex order, then stub order).
Graph wire_boundary(const Graph& g);

/// Removes the wired vertex and its star. Inverse of wire_boundary.
Graph unwire(const Graph& g);

/// Attaches a triangle gadget {v, v', v''} to every vertex v. Base vertices
/// keep ids 0..n-1; v' = n + v and v'' = 2n + v. Gadget edges are appended
/// after the base edges as {v,v'}, {v,v''}, {v',v''} for v = 0, 1, ...
Graph build_decorated(const Graph& base);

struct GadgetSite {
  VertexId base;
  VertexId prime;
  VertexId double_prime;
  EdgeId to_prime;
  EdgeId to_double_prime;
  EdgeId across;  // {v', v''}
};

/// Gadget sites of a decorated graph, one per base vertex, in base order.
std::vector<GadgetSite> gadget_sites(const Graph& decorated);

/// Induced subgraph together with the maps back into the parent graph.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> parent_vertex;
  std::vector<EdgeId> parent_edge;
};

/// Subgraph induced by the base-role vertices of a decorated graph. Marks
/// are kept apart from the gadget role, which is cleared.
Subgraph base_subgraph(const Graph& decorated);

// ---------------------------------------------------------------------------
// Metric structure

inline constexpr int kUnreachable = -1;

/// Breadth-first distances from x. The wired vertex is never entered: it
/// stands for everything outside the window, so distances are window
/// distances and the wired vertex itself is reported unreachable.
std::vector<int> distances(const Graph& g, VertexId x);

/// dist(x, e) = min over the endpoints of e; kUnreachable if neither is.
int edge_distance(const Graph& g, std::span<const int> dist, EdgeId e);

struct BallView {
  VertexId center;
  int radius;
  std::vector<VertexId> vertices;  // sorted
};

BallView ball(const Graph& g, VertexId x, int radius);

struct SphereEdgeSet {
  VertexId center;
  int index;
  std::vector<EdgeId> edges;  // sorted
};

/// Edges e with dist(x, e) == k.
SphereEdgeSet sphere_edges(const Graph& g, VertexId x, int k);

/// Largest finite distance from x (window radius seen from x).
int eccentricity(const Graph& g, VertexId x);

bool is_connected(const Graph& g);

/// Edge ids with endpoints {u, v}, in id order.
std::vector<EdgeId> edges_between(const Graph& g, VertexId u, VertexId v);

}  // namespace forestlab
