#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "forestlab/graph.hpp"
#include "forestlab/rng.hpp"

namespace forestlab {

/// Disjoint-set forest with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  /// Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b);
  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

enum class Provenance : std::uint8_t { free, wired };

/// Acyclic edge subset of a host graph, stored as a membership mask over the
/// host's edge ids.
class ForestConfig {
 public:
  ForestConfig() = default;
  explicit ForestConfig(std::size_t edge_capacity,
                        Provenance provenance = Provenance::free)
      : member_(edge_capacity, 0), provenance_(provenance) {}
  ForestConfig(std::size_t edge_capacity, std::span<const EdgeId> edges,
               Provenance provenance = Provenance::free);

  bool contains(EdgeId e) const { return e < member_.size() && member_[e] != 0; }
  void insert(EdgeId e);
  void erase(EdgeId e);

  std::size_t size() const { return count_; }
  std::size_t edge_capacity() const { return member_.size(); }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  /// Member edge ids in increasing order.
  std::vector<EdgeId> edges() const;

  /// Same membership restricted to edge ids below `capacity` (used to cut a
  /// completed-graph forest down to its window, whose edges come first).
  ForestConfig restricted(std::size_t capacity, Provenance provenance) const;

  friend bool operator==(const ForestConfig& a, const ForestConfig& b) {
    return a.member_ == b.member_;
  }

 private:
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
  Provenance provenance_ = Provenance::free;
};

/// True when the edge subset has no cycle in g.
bool is_acyclic(const Graph& g, const ForestConfig& forest);

/// Edge labels in (0,1), indexed by edge id. Injectivity is the invariant the
/// minimal-spanning-forest machinery relies on; it is checked on
/// construction and by `is_injective`, not on every `set`.
class EdgeLabels {
 public:
  EdgeLabels() = default;
  explicit EdgeLabels(std::vector<double> values);

  double operator[](EdgeId e) const { return values_[e]; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  /// Replaces one label; the value must lie in (0,1).
  void set(EdgeId e, double value);
  bool is_injective() const;
  bool collides(double value) const;

  friend bool operator==(const EdgeLabels&, const EdgeLabels&) = default;

 private:
  std::vector<double> values_;
};

/// I.i.d. uniform(0,1) labels, one per edge; a draw that repeats an earlier
/// label is redrawn.
EdgeLabels sample_labels(const Graph& g, Rng& rng);

/// Concatenates window labels with labels for the wired star (in the star's
/// edge order within the completion).
EdgeLabels joint_labels(const EdgeLabels& window, const EdgeLabels& star);

// ---------------------------------------------------------------------------
// Uniform spanning trees and forests

/// Wilson's algorithm: loop-erased random walks started from vertices in
/// increasing id order, each run until it hits the current tree. Parallel
/// edges are distinct, so the law is uniform over spanning trees of the
/// multigraph.
ForestConfig wilson_ust(const Graph& g, VertexId root, Rng& rng);

/// Free window forest: uniform spanning tree of the window itself.
ForestConfig fusf_window(const Graph& g, Rng& rng);

/// Wired window forest: uniform spanning tree of the wired completion with
/// the wired vertex's star removed.
ForestConfig wusf_window(const Graph& g, Rng& rng);

// ---------------------------------------------------------------------------
// Minimal spanning forests and label calculus

/// Which cycles count. On a wired completion the free class ignores cycles
/// through the wired vertex; on an unwired graph both classes coincide.
enum class CycleClass : std::uint8_t { free, wired };

/// Kruskal over every edge of g: keeps an edge unless it carries the largest
/// label of some cycle.
ForestConfig minimal_spanning_forest(const Graph& g, const EdgeLabels& labels);

/// Free minimal spanning forest of the window g.
ForestConfig free_msf(const Graph& g, const EdgeLabels& labels);

/// Wired window forest: minimal spanning forest of the wired completion
/// (cycles through the wired vertex stand in for bi-infinite paths) with the
/// star removed. `star_labels` label the completion's star edges in order.
ForestConfig wired_msf_window(const Graph& g, const EdgeLabels& labels,
                              const EdgeLabels& star_labels);

struct ZResult {
  std::optional<double> z;  // empty when no cycle of the class contains e
  EdgeId phi = kNoEdge;     // attaining edge, or kNoEdge
};

/// Z(e): min over cycles C through e of the max label on C - {e}, together
/// with the attaining edge phi(e, labels).
ZResult z_value(const Graph& g, const EdgeLabels& labels, EdgeId e,
                CycleClass cycles = CycleClass::wired);

/// As z_value, but labels of the `ignored` edges do not count towards the
/// maximum (the edges still close cycles).
ZResult z_value_ignoring(const Graph& g, const EdgeLabels& labels, EdgeId e,
                         std::span<const EdgeId> ignored,
                         CycleClass cycles = CycleClass::wired);

/// Forest after changing only the label of e, obtained from the current
/// forest by the four-case exchange rule rather than by recomputation.
ForestConfig predict_label_change(const Graph& g, const EdgeLabels& labels,
                                  EdgeId e, double new_label);

/// Edges whose label is strictly below alpha.
std::vector<EdgeId> threshold_subgraph(const Graph& g, const EdgeLabels& labels,
                                       double alpha);

enum class ForestMode : std::uint8_t { fusf, wusf, fmsf, wmsf };

std::string_view to_string(ForestMode mode);
std::optional<ForestMode> parse_forest_mode(std::string_view text);
inline bool is_wired(ForestMode m) { return m == ForestMode::wusf || m == ForestMode::wmsf; }
inline bool is_minimal(ForestMode m) { return m == ForestMode::fmsf || m == ForestMode::wmsf; }

}  // namespace forestlab
