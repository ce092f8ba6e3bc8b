#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"
#include "forestlab/model.hpp"
#include "forestlab/rng.hpp"

namespace forestlab {

// ---------------------------------------------------------------------------
// Delayed simple random walk

struct WalkStep {
  VertexId from;
  VertexId proposed;
  EdgeId edge;
  bool accepted;
};

/// Two-sided walk W(-m..n) with W(0) = anchor. Each half keeps its own step
/// log; backward[i] is W(-i).
struct WalkTrace {
  VertexId anchor = kNoVertex;
  std::vector<VertexId> forward;   // W(0), W(1), ..., W(n)
  std::vector<VertexId> backward;  // W(0), W(-1), ..., W(-m)
  std::vector<WalkStep> forward_steps;
  std::vector<WalkStep> backward_steps;

  VertexId at(long long i) const {
    return i >= 0 ? forward.at(static_cast<std::size_t>(i))
                  : backward.at(static_cast<std::size_t>(-i));
  }
};

/// Each step proposes a uniform incident edge of g and moves across it iff
/// it belongs to omega. The two halves draw from independent child streams.
WalkTrace delayed_srw(const Graph& g, const ForestConfig& omega, VertexId anchor,
                      std::size_t steps_forward, std::size_t steps_backward, Rng& rng);

enum class Observable : std::uint8_t { omega_degree, is_leaf, constant_one, cluster_ball };

std::string_view to_string(Observable obs);
std::optional<Observable> parse_observable(std::string_view text);

/// Value of a built-in observable at v; cluster_ball is |B_omega(v, 2)|.
double observe(Observable obs, const Graph& g, const ForestConfig& omega, VertexId v);

struct StationarityReport {
  Observable observable = Observable::omega_degree;
  std::size_t replicates = 0;
  double mean0 = 0.0, se0 = 0.0;  // at W(0)
  double mean1 = 0.0, se1 = 0.0;  // at W(1)
  double combined_se = 0.0;       // sqrt(se0^2 + se1^2)
  double paired_se = 0.0;         // SE of the per-replicate difference
  double ks_distance = 0.0;
  bool within(double k) const {
    const double diff = mean0 > mean1 ? mean0 - mean1 : mean1 - mean0;
    return combined_se == 0.0 ? diff == 0.0 : diff < k * combined_se;
  }
};

/// Law of the observable at W(0) versus W(1) for walks from vertex 0 over
/// independent forest samples of the model. Meant for vertex-transitive
/// windows, where the two laws agree.
StationarityReport stationarity_check(Observable obs, const Model& model,
                                      std::size_t replicates, std::uint64_t seed,
                                      std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Types and pivotal pairs

enum class PredicateKind : std::uint8_t {
  always,
  cluster_size_at_least,
  ends_proxy_at_least,
  touches_boundary,
};

struct TypePredicate {
  PredicateKind kind = PredicateKind::always;
  std::size_t threshold = 2;  // size or ends count
  int radius = 1;             // ball radius for ends_proxy_at_least

  std::string id() const;
  /// Every built-in type reads the whole cluster, so the dependence radius
  /// is the window itself (reported as -1).
  int dependence_radius() const { return -1; }
  bool evaluate(const Graph& window, const ForestConfig& omega, VertexId v) const;
};

std::optional<TypePredicate> parse_predicate(std::string_view text);

struct PivotalPair {
  EdgeId e = kNoEdge;
  EdgeId f = kNoEdge;  // window edge removed, or kNoEdge
  int r = 0;
  VertexId anchor = kNoVertex;
  VertexId z = kNoVertex;  // endpoint whose type flips (x preferred)
  std::array<bool, 2> before{};  // types of (x, y) in omega
  std::array<bool, 2> after{};   // types of (x, y) in pi_e^f omega
};

/// Type comparison for a given window surgery e, f. x is the anchor and y
/// the other endpoint of e; they must lie in distinct clusters.
std::optional<PivotalPair> pivotal_scan(const Graph& window, const ForestConfig& omega,
                                        const TypePredicate& pred, EdgeId e, VertexId anchor,
                                        int r, EdgeId f);

struct PivotalScan {
  SurgeryRecord record;
  std::optional<PivotalPair> pair;
};

/// As above with f = f(omega, e, anchor, r) from the surgery for the
/// sample's forest mode.
PivotalScan pivotal_scan(const Model& model, const ForestSample& sample,
                         const TypePredicate& pred, EdgeId e, VertexId anchor, int r);

// ---------------------------------------------------------------------------
// Experiments

enum class ClusterStatistic : std::uint8_t { leaf_density, mean_degree };

std::string_view to_string(ClusterStatistic s);
std::optional<ClusterStatistic> parse_cluster_statistic(std::string_view text);

struct IndistConfig {
  GraphSpec graph;
  ForestMode mode = ForestMode::wusf;
  ClusterStatistic statistic = ClusterStatistic::leaf_density;
  std::size_t min_cluster_size = 10;
  std::size_t replicates = 100;
  std::size_t permutations = 999;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct IndistCluster {
  std::size_t replicate = 0;
  std::uint32_t cluster = 0;
  VertexId representative = 0;
  std::size_t vertices = 0;
  double statistic = 0.0;
  int boundary_distance = kUnreachable;
};

struct IndistReplicate {
  std::size_t replicate = 0;
  std::size_t qualifying = 0;
  bool insufficient = true;
  // Two largest qualifying clusters, compared vertex by vertex.
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  double difference = 0.0;
  double p_value = 1.0;
};

struct IndistReport {
  IndistConfig config;
  std::vector<IndistCluster> clusters;
  std::vector<IndistReplicate> replicates;
  std::size_t insufficient = 0;
  std::array<double, 5> statistic_quantiles{};  // 0.1, 0.25, 0.5, 0.75, 0.9
  std::array<double, 5> p_value_quantiles{};
  double share_p_below_005 = 0.0;
};

IndistReport indist_experiment(const IndistConfig& config);

/// Gadget patterns: which two of the three triangle edges are present.
enum class GadgetPattern : std::uint8_t {
  cherry,       // {v,v'}, {v,v''}
  path_prime,   // {v,v'}, {v',v''}
  path_double,  // {v,v''}, {v',v''}
};

inline constexpr std::array<double, 3> kHeadLaw{1.0 / 3, 1.0 / 3, 1.0 / 3};
inline constexpr std::array<double, 3> kTailLaw{0.5, 0.25, 0.25};

struct DecoratedConfig {
  GraphSpec graph;  // must be decorated
  ForestMode mode = ForestMode::wusf;
  std::size_t min_sites = 200;
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct DecoratedCluster {
  std::size_t replicate = 0;
  std::uint32_t cluster = 0;
  std::size_t sites = 0;
  bool head = false;
  std::array<std::size_t, 3> counts{};
  double cherry_frequency = 0.0;
  std::array<double, 3> z_scores{};  // (count/n - p) / sqrt(p(1-p)/n)
  bool within_3se = false;
};

struct DecoratedReport {
  DecoratedConfig config;
  std::vector<DecoratedCluster> clusters;  // clusters with >= min_sites sites
  std::size_t heads = 0;
  std::size_t tails = 0;
  double auc = 0.5;  // cherry frequency as a score for tails
  bool all_within_3se = false;
  std::array<double, 3> pooled_head{};  // pooled pattern frequencies
  std::array<double, 3> pooled_tail{};
};

/// Forest on the decorated graph: the base forest plus, per base cluster, a
/// fair coin choosing the gadget law and one pattern per site from it.
struct DecoratedForest {
  ForestConfig forest;            // on the decorated graph
  std::vector<std::uint8_t> head;  // per base cluster id
};

DecoratedForest decorate_forest(const Graph& decorated, const Subgraph& base,
                                const ForestConfig& base_forest, Rng& rng);

/// Pattern present at a gadget site, read from the decorated forest.
std::optional<GadgetPattern> read_pattern(const GadgetSite& site, const ForestConfig& forest);

DecoratedReport decorated_experiment(const DecoratedConfig& config);

}  // namespace forestlab
