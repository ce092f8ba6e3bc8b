#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"

namespace forestlab {

/// pi_e^f: omega + e - f. `f` may be kNoEdge. Throws edge_present when e is
/// already in omega, edge_absent when f is not, and same_cluster when the
/// endpoints of e stay joined in omega - f (the result would have a cycle).
ForestConfig apply_surgery(const Graph& g, const ForestConfig& omega, EdgeId e, EdgeId f);

/// Condition D for the pivot construction: x and y lie in different
/// components of the tree edges at distance <= r from x.
bool condition_d(const Graph& g, const ForestConfig& tree, EdgeId e, VertexId x, int r);

/// First edge at distance r+1 from x met on the tree path from x to the
/// other endpoint of e. `tree` is a spanning tree of g (for wired windows,
/// of the completion). Throws condition_d_failed when D does not hold.
EdgeId usf_pivot_edge(const Graph& g, const ForestConfig& tree, EdgeId e, VertexId x, int r);

/// Minimal spanning forest of the cycle class: every edge for the wired
/// class, the edges off the wired vertex for the free class.
ForestConfig msf_of_class(const Graph& g, const EdgeLabels& labels, CycleClass cycles);

struct RelabelResult {
  EdgeId e = kNoEdge;
  VertexId x = kNoVertex;
  int r = 0;
  CycleClass cycles = CycleClass::wired;
  std::vector<EdgeId> pivots;      // f_1..f_k (f_k omitted when it is empty)
  std::vector<double> thresholds;  // Z_1..Z_k (empty when e lies on no cycle)
  std::size_t k = 1;
  EdgeLabels labels;               // lambda'
  EdgeId terminal = kNoEdge;       // f_k on the host graph
  EdgeId window_terminal = kNoEdge;  // f_k unless it touches the wired vertex
};

/// Pushes the labels of f_1..f_{k-1} below Z_k(e) so that f_k becomes the
/// maximum on the x-y cycle; the forest itself is unchanged (checked). g is
/// the host graph: the wired completion for wired windows.
RelabelResult msf_relabel(const Graph& g, const EdgeLabels& labels, EdgeId e, VertexId x,
                          int r, CycleClass cycles = CycleClass::wired);

struct InsertResult {
  double new_label = 0.0;      // lambda''(e)
  EdgeLabels labels;           // lambda''
  EdgeId removed = kNoEdge;    // phi(e, lambda')
  ForestConfig predicted;      // forest(lambda') + e - phi(e, lambda')
  ForestConfig recomputed;     // forest(lambda'') from scratch
  bool swap_identity_holds = false;
};

/// Lowers lambda'(e) to Z_{lambda'}(e)/2 (or half the smallest label when e
/// lies on no cycle) and compares the swap rule with recomputation.
InsertResult msf_insert(const Graph& g, const RelabelResult& relabeled);

// ---------------------------------------------------------------------------
// Exact checks by enumeration

using Rational = boost::multiprecision::cpp_rational;

struct RadonNikodymAtom {
  std::vector<EdgeId> window;  // window configuration omega (sorted edge ids)
  std::size_t trees = 0;       // completion trees with this window inside A_e and D
  std::size_t images = 0;      // distinct trees in the image under pi_e^f
  Rational ratio;              // P(A) / P(pi A) = trees / images
};

struct RadonNikodymReport {
  std::size_t tree_count = 0;
  std::size_t sphere_size = 0;          // |S(x, r+1)| on the completion
  std::size_t outside_event = 0;        // trees with C_x = C_y in the window
  std::size_t condition_d_failures = 0; // trees in A_e excluded by D
  std::size_t max_preimages = 0;        // largest fibre of pi_e^f over A_e and D
  std::vector<RadonNikodymAtom> atoms;  // sorted by window
};

/// Enumerates the spanning trees of the wired completion of `window` (which
/// must carry boundary stubs) and computes the derivative of P with respect
/// to P_e on A_e atom by atom.
RadonNikodymReport radon_nikodym_exact(const Graph& window, EdgeId e, VertexId x, int r,
                                       std::size_t cap = 2000);

struct DeltaBoundReport {
  RadonNikodymReport detail;
  bool vacuous = false;   // A_e and D is empty
  bool preimage_bound_holds = false;
  bool atom_bound_holds = false;  // P(pi A) >= P(A)/|S| on every atom
  bool holds() const { return preimage_bound_holds && atom_bound_holds; }
};

DeltaBoundReport delta_bound_check(const Graph& window, EdgeId e, VertexId x, int r,
                                   std::size_t cap = 2000);

}  // namespace forestlab
