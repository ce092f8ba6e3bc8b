#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "forestlab/analytics.hpp"
#include "forestlab/forest.hpp"
#include "forestlab/graph.hpp"
#include "forestlab/model.hpp"
#include "forestlab/oracles.hpp"
#include "forestlab/surgery.hpp"
#include "forestlab/walks.hpp"

// JSON forms of the library's objects. Key order is fixed by nlohmann's
// sorted objects, and doubles print in shortest round-trip form, so equal
// inputs always serialize to equal bytes.
namespace forestlab::io {

using nlohmann::json;

json graph_to_json(const Graph& g);
/// Inverse of graph_to_json; vertex ids may be arbitrary integers.
Graph graph_from_json(const json& j);

json labels_to_json(const EdgeLabels& labels);
EdgeLabels labels_from_json(const json& j, std::size_t edge_count);

json forest_record(std::size_t sample_id, std::uint64_t seed, ForestMode mode,
                   const ForestConfig& forest, const EdgeLabels* labels = nullptr);

json surgery_to_json(const Graph& window, const SurgeryRecord& rec);
json relabel_to_json(const RelabelResult& rel, const EdgeLabels& original);
json tree_record(std::size_t index, const std::vector<EdgeId>& tree);
json walk_to_json(const WalkTrace& trace);
json stationarity_to_json(const StationarityReport& report);
json mtp_to_json(const MtpReport& report);
json indist_to_json(const IndistReport& report);
json decorated_to_json(const DecoratedReport& report);
json pivotal_to_json(const PivotalScan& scan);
json delta_to_json(const DeltaBoundReport& report);

std::string rational_to_string(const Rational& r);

}  // namespace forestlab::io
