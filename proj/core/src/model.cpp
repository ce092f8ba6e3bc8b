#include "forestlab/model.hpp"

#include <string>

#include "forestlab/analytics.hpp"
#include "forestlab/error.hpp"

namespace forestlab {

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::torus: return "torus";
    case GraphKind::box: return "box";
    case GraphKind::tree_ball: return "tree_ball";
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::complete: return "complete";
    case GraphKind::edge_list: return "edge_list";
  }
  return "unknown";
}

std::optional<GraphKind> parse_graph_kind(std::string_view text) {
  for (auto kind : {GraphKind::torus, GraphKind::box, GraphKind::tree_ball, GraphKind::path,
                    GraphKind::cycle, GraphKind::complete, GraphKind::edge_list})
    if (to_string(kind) == text) return kind;
  return std::nullopt;
}

Graph build_graph(const GraphSpec& spec) {
  Graph g;
  switch (spec.kind) {
    case GraphKind::torus: g = build_torus(spec.dimension, spec.side); break;
    case GraphKind::box: g = build_box(spec.dimension, spec.side); break;
    case GraphKind::tree_ball: g = build_tree_ball(spec.degree, spec.radius); break;
    case GraphKind::path: g = build_path(spec.vertices); break;
    case GraphKind::cycle: g = build_cycle(spec.vertices); break;
    case GraphKind::complete: g = build_complete(spec.vertices); break;
    case GraphKind::edge_list: g = build_from_edge_list(spec.edge_list); break;
  }
  return spec.decorate ? build_decorated(g) : g;
}

Model make_model(std::shared_ptr<const Graph> window, ForestMode mode) {
  require(window != nullptr, ErrorCode::invalid_argument, "model needs a graph");
  require(!window->is_wired(), ErrorCode::invalid_argument,
          "pass the unwired window; wired modes build the completion");
  Model model;
  model.mode = mode;
  model.window = window;
  if (is_wired(mode)) {
    require(window->has_boundary(), ErrorCode::precondition,
            std::string(to_string(mode)) + " needs boundary stubs on the window");
    model.host = std::make_shared<const Graph>(wire_boundary(*window));
  } else {
    model.host = window;
  }
  return model;
}

namespace {

Provenance provenance_of(ForestMode mode) {
  return is_wired(mode) ? Provenance::wired : Provenance::free;
}

}  // namespace

ForestSample sample_forest(const Model& model, Rng& rng) {
  if (is_minimal(model.mode)) return forest_from_labels(model, sample_labels(*model.host, rng));
  ForestSample out;
  const VertexId root = model.wired() ? *model.host->wired_vertex() : 0;
  out.host_forest = wilson_ust(*model.host, root, rng);
  out.host_forest.set_provenance(provenance_of(model.mode));
  out.window_forest =
      out.host_forest.restricted(model.window->edge_count(), provenance_of(model.mode));
  return out;
}

ForestSample forest_from_labels(const Model& model, EdgeLabels labels) {
  require(is_minimal(model.mode), ErrorCode::invalid_argument,
          "labels only determine minimal forests");
  require(labels.size() == model.host->edge_count(), ErrorCode::invalid_argument,
          "label count does not match the host edge count");
  require(labels.is_injective(), ErrorCode::invalid_argument, "labels must be distinct");
  ForestSample out;
  out.host_forest = minimal_spanning_forest(*model.host, labels);
  out.host_forest.set_provenance(provenance_of(model.mode));
  out.window_forest =
      out.host_forest.restricted(model.window->edge_count(), provenance_of(model.mode));
  out.labels = std::move(labels);
  return out;
}

std::string_view to_string(SurgeryMode mode) {
  return mode == SurgeryMode::usf ? "usf" : "msf";
}

std::optional<SurgeryMode> parse_surgery_mode(std::string_view text) {
  if (text == "usf") return SurgeryMode::usf;
  if (text == "msf") return SurgeryMode::msf;
  return std::nullopt;
}

SurgeryRecord perform_surgery(const Model& model, const ForestSample& sample, EdgeId e,
                              VertexId x, int r) {
  const Graph& window = *model.window;
  const Graph& host = *model.host;
  require(e < window.edge_count(), ErrorCode::invalid_argument,
          "edge " + std::to_string(e) + " is not a window edge");
  require(window.edge(e).touches(x), ErrorCode::invalid_argument,
          "anchor is not an endpoint of the edge");
  require(r >= 0, ErrorCode::invalid_argument, "radius must be non-negative");

  SurgeryRecord rec;
  rec.e = e;
  rec.x = x;
  rec.r = r;
  rec.forest_mode = model.mode;
  rec.mode = surgery_mode(model.mode);
  rec.before = sample.window_forest;

  if (rec.mode == SurgeryMode::usf) {
    rec.f = usf_pivot_edge(host, sample.host_forest, e, x, r);
    rec.host_result = apply_surgery(host, sample.host_forest, e, rec.f);
    if (!host.is_wired_edge(rec.f)) rec.window_f = rec.f;
  } else {
    require(sample.labels.has_value(), ErrorCode::invalid_argument,
            "minimal forest sample carries no labels");
    const CycleClass cycles = model.wired() ? CycleClass::wired : CycleClass::free;
    rec.relabel = msf_relabel(host, *sample.labels, e, x, r, cycles);
    rec.insert = msf_insert(host, *rec.relabel);
    rec.f = rec.relabel->terminal;
    rec.window_f = rec.relabel->window_terminal;
    rec.host_result = rec.insert->recomputed;
  }
  rec.host_result.set_provenance(sample.host_forest.provenance());
  rec.result = rec.host_result.restricted(window.edge_count(), sample.window_forest.provenance());

  const std::vector<int> dist = distances(window, x);
  if (model.wired()) {
    for (VertexId v = 0; v < window.vertex_count(); ++v) {
      if (window.mark(v).stubs == 0) continue;
      if (dist[v] != kUnreachable && dist[v] <= r) rec.ball_inside_window = false;
    }
  }
  if (rec.window_f == kNoEdge) {
    rec.wit_ok = true;
  } else {
    const Components parts = components(window, rec.before);
    const Edge& f = window.edge(rec.window_f);
    const int d = edge_distance(window, dist, rec.window_f);
    rec.wit_ok = rec.before.contains(rec.window_f) && parts.same(f.u, x) &&
                 d != kUnreachable && d > r;
  }
  return rec;
}

}  // namespace forestlab
