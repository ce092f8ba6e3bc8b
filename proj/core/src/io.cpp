#include "forestlab/io.hpp"

#include <sstream>
#include <string>

#include "forestlab/error.hpp"

namespace forestlab::io {

namespace {

std::string_view role_name(GadgetRole role) {
  switch (role) {
    case GadgetRole::none: return "none";
    case GadgetRole::base: return "base";
    case GadgetRole::prime: return "prime";
    case GadgetRole::double_prime: return "double_prime";
  }
  return "none";
}

GadgetRole parse_role(const std::string& text) {
  if (text == "none") return GadgetRole::none;
  if (text == "base") return GadgetRole::base;
  if (text == "prime") return GadgetRole::prime;
  if (text == "double_prime") return GadgetRole::double_prime;
  fail(ErrorCode::invalid_argument, "unknown gadget role '" + text + "'");
}

json edge_or_null(EdgeId e) { return e == kNoEdge ? json(nullptr) : json(e); }

json edge_list(const ForestConfig& forest) { return forest.edges(); }

// Reads a value with a readable error instead of nlohmann's type_error.
template <typename T>
T field(const json& j, const char* key, const char* where) {
  require(j.is_object() && j.contains(key), ErrorCode::invalid_argument,
          std::string(where) + " needs field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::invalid_argument,
         std::string(where) + " field '" + key + "' has the wrong type");
  }
}

}  // namespace

json graph_to_json(const Graph& g) {
  json vertices = json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const VertexMark& m = g.mark(v);
    vertices.push_back({{"id", v},
                        {"boundary", m.boundary},
                        {"stubs", m.stubs},
                        {"role", role_name(m.role)}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  json out = {{"vertices", vertices}, {"edges", edges}};
  if (g.wired_vertex()) out["wired"] = *g.wired_vertex();
  return out;
}

Graph graph_from_json(const json& j) {
  require(j.is_object(), ErrorCode::invalid_argument, "graph JSON must be an object");
  EdgeListSpec spec;
  const auto vertices = field<json>(j, "vertices", "graph");
  require(vertices.is_array(), ErrorCode::invalid_argument, "graph vertices must be an array");
  for (const json& v : vertices) {
    VertexSpec vs;
    vs.id = field<std::int64_t>(v, "id", "vertex");
    if (v.contains("boundary")) vs.mark.boundary = field<bool>(v, "boundary", "vertex");
    if (v.contains("stubs")) vs.mark.stubs = field<std::uint32_t>(v, "stubs", "vertex");
    if (v.contains("role")) vs.mark.role = parse_role(field<std::string>(v, "role", "vertex"));
    spec.vertices.push_back(vs);
  }
  const auto edges = field<json>(j, "edges", "graph");
  require(edges.is_array(), ErrorCode::invalid_argument, "graph edges must be an array");
  for (const json& e : edges) {
    require(e.is_array() && e.size() == 2 && e[0].is_number_integer() &&
                e[1].is_number_integer(),
            ErrorCode::invalid_argument, "each edge must be a pair of vertex ids");
    spec.edges.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
  }
  if (j.contains("wired") && !j["wired"].is_null())
    spec.wired = field<std::int64_t>(j, "wired", "graph");
  return build_from_edge_list(spec);
}

json labels_to_json(const EdgeLabels& labels) {
  json out = json::array();
  for (EdgeId e = 0; e < labels.size(); ++e) out.push_back({e, labels[e]});
  return out;
}

EdgeLabels labels_from_json(const json& j, std::size_t edge_count) {
  require(j.is_array(), ErrorCode::invalid_argument, "labels must be an array");
  std::vector<double> values(edge_count, -1.0);
  if (!j.empty() && j[0].is_number()) {
    require(j.size() == edge_count, ErrorCode::invalid_argument,
            "label list length does not match the edge count");
    for (std::size_t i = 0; i < edge_count; ++i) values[i] = j[i].get<double>();
  } else {
    for (const json& pair : j) {
      require(pair.is_array() && pair.size() == 2 && pair[0].is_number_integer() &&
                  pair[1].is_number(),
              ErrorCode::invalid_argument, "labels must be [edge, label] pairs");
      const auto e = pair[0].get<std::int64_t>();
      require(e >= 0 && static_cast<std::size_t>(e) < edge_count, ErrorCode::invalid_argument,
              "label names edge " + std::to_string(e) + " outside the graph");
      values[static_cast<std::size_t>(e)] = pair[1].get<double>();
    }
  }
  for (std::size_t e = 0; e < edge_count; ++e)
    require(values[e] > 0.0 && values[e] < 1.0, ErrorCode::invalid_argument,
            "edge " + std::to_string(e) + " needs a label in (0,1)");
  return EdgeLabels(std::move(values));
}

json forest_record(std::size_t sample_id, std::uint64_t seed, ForestMode mode,
                   const ForestConfig& forest, const EdgeLabels* labels) {
  json out = {{"sample_id", sample_id},
              {"seed", seed},
              {"mode", to_string(mode)},
              {"edges", edge_list(forest)}};
  if (labels) out["labels"] = labels_to_json(*labels);
  return out;
}

json relabel_to_json(const RelabelResult& rel, const EdgeLabels& original) {
  json changed = json::array();
  for (EdgeId e = 0; e < rel.labels.size(); ++e)
    if (rel.labels[e] != original[e]) changed.push_back({e, rel.labels[e]});
  return {{"pivots", rel.pivots},
          {"thresholds", rel.thresholds},
          {"k", rel.k},
          {"terminal", edge_or_null(rel.terminal)},
          {"window_terminal", edge_or_null(rel.window_terminal)},
          {"relabelled", changed}};
}

json surgery_to_json(const Graph& window, const SurgeryRecord& rec) {
  const Edge& e = window.edge(rec.e);
  json out = {{"e", rec.e},
              {"endpoints", {e.u, e.v}},
              {"x", rec.x},
              {"r", rec.r},
              {"mode", to_string(rec.mode)},
              {"forest_mode", to_string(rec.forest_mode)},
              {"f", edge_or_null(rec.f)},
              {"window_f", edge_or_null(rec.window_f)},
              {"before", edge_list(rec.before)},
              {"result", edge_list(rec.result)},
              {"ball_inside_window", rec.ball_inside_window},
              {"wit_ok", rec.wit_ok}};
  if (rec.insert) {
    out["insert"] = {{"new_label", rec.insert->new_label},
                     {"removed", edge_or_null(rec.insert->removed)},
                     {"swap_identity_holds", rec.insert->swap_identity_holds}};
  }
  return out;
}

json tree_record(std::size_t index, const std::vector<EdgeId>& tree) {
  return {{"index", index}, {"edges", tree}};
}

json walk_to_json(const WalkTrace& trace) {
  auto steps = [](const std::vector<WalkStep>& log) {
    json out = json::array();
    for (const WalkStep& s : log)
      out.push_back({{"from", s.from},
                     {"proposed", s.proposed},
                     {"edge", edge_or_null(s.edge)},
                     {"accepted", s.accepted}});
    return out;
  };
  return {{"anchor", trace.anchor},
          {"forward", trace.forward},
          {"backward", trace.backward},
          {"forward_steps", steps(trace.forward_steps)},
          {"backward_steps", steps(trace.backward_steps)}};
}

json stationarity_to_json(const StationarityReport& r) {
  return {{"observable", to_string(r.observable)},
          {"replicates", r.replicates},
          {"mean_w0", r.mean0},
          {"se_w0", r.se0},
          {"mean_w1", r.mean1},
          {"se_w1", r.se1},
          {"combined_se", r.combined_se},
          {"paired_se", r.paired_se},
          {"ks_distance", r.ks_distance},
          {"within_3se", r.within(3.0)}};
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

json mtp_to_json(const MtpReport& r) {
  return {{"transport", to_string(r.spec.kind)},
          {"evaluation", r.spec.evaluation == TransportEvaluation::exact_symmetric
                             ? "exact_symmetric"
                             : "monte_carlo"},
          {"replicates", r.replicates},
          {"origin", r.origin},
          {"sent_total", rational_to_string(r.sent_total)},
          {"received_total", rational_to_string(r.received_total)},
          {"exact_equal", r.exact_equal},
          {"origin_exact_equal", r.origin_exact_equal},
          {"sent_mean", r.sent_mean},
          {"received_mean", r.received_mean},
          {"sent_se", r.sent_se},
          {"received_se", r.received_se},
          {"z_score", r.z_score}};
}

json indist_to_json(const IndistReport& r) {
  json clusters = json::array();
  for (const IndistCluster& c : r.clusters)
    clusters.push_back({{"replicate", c.replicate},
                        {"cluster", c.cluster},
                        {"representative", c.representative},
                        {"vertices", c.vertices},
                        {"statistic", c.statistic},
                        {"boundary_distance", c.boundary_distance}});
  json replicates = json::array();
  for (const IndistReplicate& p : r.replicates) {
    json row = {{"replicate", p.replicate},
                {"qualifying", p.qualifying},
                {"insufficient", p.insufficient}};
    if (!p.insufficient) {
      row["first"] = p.first;
      row["second"] = p.second;
      row["difference"] = p.difference;
      row["p_value"] = p.p_value;
    }
    replicates.push_back(row);
  }
  return {{"statistic", to_string(r.config.statistic)},
          {"mode", to_string(r.config.mode)},
          {"min_cluster_size", r.config.min_cluster_size},
          {"permutations", r.config.permutations},
          {"insufficient", r.insufficient},
          {"statistic_quantiles", r.statistic_quantiles},
          {"p_value_quantiles", r.p_value_quantiles},
          {"quantile_levels", {0.1, 0.25, 0.5, 0.75, 0.9}},
          {"share_p_below_0_05", r.share_p_below_005},
          {"clusters", clusters},
          {"replicates", replicates}};
}

json decorated_to_json(const DecoratedReport& r) {
  json clusters = json::array();
  for (const DecoratedCluster& c : r.clusters)
    clusters.push_back({{"replicate", c.replicate},
                        {"cluster", c.cluster},
                        {"sites", c.sites},
                        {"head", c.head},
                        {"counts", c.counts},
                        {"cherry_frequency", c.cherry_frequency},
                        {"z_scores", c.z_scores},
                        {"within_3se", c.within_3se}});
  return {{"mode", to_string(r.config.mode)},
          {"min_sites", r.config.min_sites},
          {"heads", r.heads},
          {"tails", r.tails},
          {"auc", r.auc},
          {"all_within_3se", r.all_within_3se},
          {"pooled_head", r.pooled_head},
          {"pooled_tail", r.pooled_tail},
          {"clusters", clusters}};
}

json pivotal_to_json(const PivotalScan& scan) {
  json out = {{"pivotal", scan.pair.has_value()}, {"f", edge_or_null(scan.record.window_f)}};
  if (scan.pair) {
    out["z"] = scan.pair->z;
    out["before"] = scan.pair->before;
    out["after"] = scan.pair->after;
  }
  return out;
}

json delta_to_json(const DeltaBoundReport& r) {
  json atoms = json::array();
  for (const RadonNikodymAtom& a : r.detail.atoms)
    atoms.push_back({{"window", a.window},
                     {"trees", a.trees},
                     {"images", a.images},
                     {"ratio", rational_to_string(a.ratio)}});
  return {{"tree_count", r.detail.tree_count},
          {"sphere_size", r.detail.sphere_size},
          {"outside_event", r.detail.outside_event},
          {"condition_d_failures", r.detail.condition_d_failures},
          {"max_preimages", r.detail.max_preimages},
          {"vacuous", r.vacuous},
          {"preimage_bound_holds", r.preimage_bound_holds},
          {"atom_bound_holds", r.atom_bound_holds},
          {"atoms", atoms}};
}

}  // namespace forestlab::io
