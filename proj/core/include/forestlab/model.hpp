#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"
#include "forestlab/rng.hpp"
#include "forestlab/surgery.hpp"

namespace forestlab {

enum class GraphKind : std::uint8_t { torus, box, tree_ball, path, cycle, complete, edge_list };

std::string_view to_string(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view text);

struct GraphSpec {
  GraphKind kind = GraphKind::torus;
  int dimension = 2;  // torus, box
  int side = 4;       // torus, box
  int degree = 3;     // tree_ball
  int radius = 2;     // tree_ball
  int vertices = 3;   // path, cycle, complete
  EdgeListSpec edge_list;
  bool decorate = false;
};

Graph build_graph(const GraphSpec& spec);

/// A window together with the graph its forests actually live on: the wired
/// completion for wired modes, the window itself otherwise.
struct Model {
  ForestMode mode = ForestMode::fusf;
  std::shared_ptr<const Graph> window;
  std::shared_ptr<const Graph> host;

  bool wired() const { return is_wired(mode); }
};

/// Checks that the mode makes sense on the window (wired modes need
/// boundary stubs) and builds the completion once.
Model make_model(std::shared_ptr<const Graph> window, ForestMode mode);

struct ForestSample {
  ForestConfig host_forest;          // spanning tree (usf) or MSF (msf) of the host
  std::optional<EdgeLabels> labels;  // host labels, minimal modes only
  ForestConfig window_forest;        // host forest with the wired star removed
};

ForestSample sample_forest(const Model& model, Rng& rng);

/// The minimal forest for given host labels.
ForestSample forest_from_labels(const Model& model, EdgeLabels labels);

enum class SurgeryMode : std::uint8_t { usf, msf };

std::string_view to_string(SurgeryMode mode);
std::optional<SurgeryMode> parse_surgery_mode(std::string_view text);
inline SurgeryMode surgery_mode(ForestMode m) {
  return is_minimal(m) ? SurgeryMode::msf : SurgeryMode::usf;
}

struct SurgeryRecord {
  EdgeId e = kNoEdge;
  VertexId x = kNoVertex;
  int r = 0;
  SurgeryMode mode = SurgeryMode::usf;
  ForestMode forest_mode = ForestMode::fusf;
  EdgeId f = kNoEdge;         // host edge removed by the surgery
  EdgeId window_f = kNoEdge;  // f unless it touches the wired vertex
  ForestConfig before;        // window forest
  ForestConfig result;        // window forest after the surgery
  ForestConfig host_result;
  /// No boundary stub lies within distance r of x, so B(x, r+1) does not
  /// reach the wired vertex.
  bool ball_inside_window = true;
  /// window_f is empty, or lies in C_x at distance > r from x.
  bool wit_ok = false;
  std::optional<RelabelResult> relabel;
  std::optional<InsertResult> insert;
};

/// f(omega, e, x, r) and pi_e^f for the sample: the sphere-edge pivot for
/// uniform forests, the relabelling construction for minimal ones.
SurgeryRecord perform_surgery(const Model& model, const ForestSample& sample, EdgeId e,
                              VertexId x, int r);

}  // namespace forestlab
