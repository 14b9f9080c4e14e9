#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ergokit/bounds.hpp"
#include "ergokit/protocol.hpp"
#include "ergokit/weight.hpp"
#include "ergokit/workdist.hpp"

namespace ergokit {

using Json = nlohmann::json;

// {grid: {n, spacing, origin}, form: "pure" | "density", data: [re, im, ...]}.
// Density data is row-major. Mixtures are written in density form.
Json to_json(const WeightState& w);
WeightState weight_state_from_json(const Json& j);

// {kind, atoms: [[w, q], ...]} or {kind, w_grid, values}.
Json to_json(const WorkDistribution& d);
WorkDistribution work_distribution_from_json(const Json& j);

Json to_json(const ProtocolReport& r);
ProtocolReport protocol_report_from_json(const Json& j);
// One compact JSON object per line.
std::string to_json_lines(const std::vector<ProtocolReport>& reports);
std::vector<ProtocolReport> protocol_reports_from_json_lines(const std::string& text);

Json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const Json& j);

}  // namespace ergokit
