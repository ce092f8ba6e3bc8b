#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"
#include "forestlab/rng.hpp"

namespace forestlab {

/// Connected components of a forest, singletons included. The wired vertex
/// of a completed graph is treated like any other vertex.
struct Components {
  std::vector<std::uint32_t> label;  // component id per vertex
  std::vector<std::size_t> sizes;    // vertex count per component id

  std::size_t count() const { return sizes.size(); }
  bool same(VertexId a, VertexId b) const { return label[a] == label[b]; }
  std::vector<VertexId> members(std::uint32_t id) const;
};

/// Component ids are assigned in order of each component's smallest vertex.
Components components(const Graph& g, const ForestConfig& forest);

/// Finite stand-in for the number of ends of C_x seen from outside B(x,r):
/// drop the forest edges with both endpoints in B(x,r) and count the pieces
/// of C_x that still contain a boundary vertex at distance > r.
int ends_proxy(const Graph& g, const ForestConfig& forest, VertexId x, int r);

struct GrowthEstimate {
  std::vector<std::size_t> ball_sizes;  // |B_{C_x}(x,r)| for r = 0, 1, ...
  double rate = 0.0;                    // least-squares slope of log size
  int fit_from = 0;
  int fit_to = -1;                      // fit radii; empty range means no fit
};

/// Intrinsic ball growth of the cluster of x. The fit uses radii
/// 1..min(window radius - 1, cluster radius).
GrowthEstimate growth_estimate(const Graph& g, const ForestConfig& forest, VertexId x);

/// Vertices of cluster `from` joined by a non-forest edge of g to cluster `to`.
std::vector<VertexId> touching_points(const Graph& g, const ForestConfig& forest,
                                      const Components& parts, std::uint32_t from,
                                      std::uint32_t to);

struct ClusterStats {
  std::uint32_t cluster = 0;
  VertexId representative = 0;  // smallest vertex id
  std::size_t vertices = 0;
  int ends_proxy = 0;           // seen from the representative
  double leaf_density = 0.0;    // share of vertices with forest degree 1
  double mean_degree = 0.0;     // mean forest degree
  std::size_t boundary_contacts = 0;
  int boundary_distance = kUnreachable;  // graph distance to nearest boundary vertex
};

std::vector<ClusterStats> cluster_stats(const Graph& g, const ForestConfig& forest,
                                        int ends_radius);

/// Distance from every vertex to the nearest boundary-marked vertex.
std::vector<int> boundary_distances(const Graph& g);

std::vector<std::size_t> forest_degrees(const Graph& g, const ForestConfig& forest);

inline constexpr const char* kClusterCsvSchema = "forestlab-clusters v1";

void write_cluster_csv_header(std::ostream& out);
void write_cluster_csv_rows(std::ostream& out, std::size_t sample,
                            const std::vector<ClusterStats>& stats);

// ---------------------------------------------------------------------------
// Mass transport

using Rational = boost::multiprecision::cpp_rational;

struct Transfer {
  VertexId from;
  VertexId to;
  Rational mass;
};

enum class TransportKind : std::uint8_t {
  zero,             // sends nothing
  shift,            // 1 to x + e_1 on the torus
  neighbor_split,   // 1/deg(x) to each graph neighbour
  cluster_uniform,  // 1/|C_x| to every vertex of the forest cluster of x
  nearest_mark,     // 1 split evenly over the nearest marked vertices
  random_neighbor,  // 1 to a uniformly chosen graph neighbour
};

enum class TransportEvaluation : std::uint8_t { exact_symmetric, monte_carlo };

struct TransportSpec {
  TransportKind kind = TransportKind::shift;
  TransportEvaluation evaluation = TransportEvaluation::exact_symmetric;
  double mark_probability = 0.1;  // nearest_mark only
};

std::string_view to_string(TransportKind kind);
std::optional<TransportKind> parse_transport(std::string_view text);
bool is_deterministic(TransportKind kind);

/// The mass a transport moves in one configuration. `forest` is consulted by
/// cluster_uniform only; `rng` by the randomized transports.
std::vector<Transfer> evaluate_transport(const Graph& torus, int dimension, int side,
                                         const TransportSpec& spec,
                                         const ForestConfig& forest, Rng& rng);

/// Hook for caller-supplied transports (validated like the built-ins).
using TransportFn = std::function<std::vector<Transfer>(Rng&)>;

struct MtpReport {
  TransportSpec spec;
  std::size_t replicates = 0;
  VertexId origin = 0;
  // Exact mode: mass sent and received per vertex per replicate, as rationals.
  Rational sent_total = 0;
  Rational received_total = 0;
  bool exact_equal = false;
  bool origin_exact_equal = false;
  // Sent and received at the origin (vertex 0), in every mode.
  double sent_mean = 0.0;
  double received_mean = 0.0;
  double sent_se = 0.0;
  double received_se = 0.0;
  double z_score = 0.0;  // (sent - received) / combined SE; 0 when SE is 0
};

/// Mass transport check on the torus (Z/side)^dimension with the invariant
/// forest law `forest_mode` (used by cluster_uniform). Exact mode compares
/// mass sent and received vertex by vertex as rationals; Monte Carlo mode
/// compares mean mass sent and received at vertex 0 over replicates.
MtpReport mtp_check(const TransportSpec& spec, int dimension, int side,
                    ForestMode forest_mode, std::size_t replicates,
                    std::uint64_t seed, std::size_t jobs = 1);

/// Same comparison for an arbitrary transport on a vertex-transitive graph.
MtpReport mtp_check_custom(const Graph& g, const TransportFn& transport,
                           std::size_t replicates, std::uint64_t seed);

}  // namespace forestlab
