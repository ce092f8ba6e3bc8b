#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"
#include "forestlab/rng.hpp"

// Brute-force references. Everything here favours the literal definition over
// speed and refuses to run past an explicit cap.
namespace forestlab::oracles {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultCap = 100000;

struct TreeEnumeration {
  std::vector<std::vector<EdgeId>> trees;  // each sorted; list sorted
  std::size_t count() const { return trees.size(); }
};

/// Every spanning tree exactly once. Throws cap_exceeded past `cap` trees.
TreeEnumeration enumerate_spanning_trees(const Graph& g, std::size_t cap = kDefaultCap);

/// Kirchhoff's matrix-tree count: determinant of the Laplacian with the
/// last row and column removed, by fraction-free (Bareiss) elimination over
/// exact integers. Zero for disconnected graphs.
BigInt count_spanning_trees(const Graph& g);

/// All simple cycles through e, as sorted edge-id lists. The free class on
/// a wired graph skips cycles through the wired vertex.
std::vector<std::vector<EdgeId>> enumerate_cycles_through(
    const Graph& g, EdgeId e, CycleClass cycles = CycleClass::wired,
    std::size_t cap = kDefaultCap);

/// Deletes exactly the edges whose label is maximal on some enumerated cycle.
ForestConfig msf_by_definition(const Graph& g, const EdgeLabels& labels,
                               CycleClass cycles = CycleClass::wired,
                               std::size_t cap = kDefaultCap);

/// Aldous-Broder: simple random walk from `root` until every vertex has been
/// visited; keeps each vertex's first-entrance edge.
ForestConfig aldous_broder_ust(const Graph& g, Rng& rng, VertexId root = 0);

}  // namespace forestlab::oracles
