#pragma once

#include <json.hpp>

#include "heatgraph/completeness.hpp"

namespace heatgraph {

/// Parses {"kind":"constant","value":2,"root_valence":3} and the affine /
/// polynomial / exponential / explicit variants.
BranchingLaw parse_branching_law(const nlohmann::json& spec);

/// Parses a graph-spec object:
///   {"family":"model_tree","branching":{...}}
///   {"family":"graft_ray","base":{...},"attach_at":"x0"}
///   {"family":"explicit","edges":[[0,1],...],"root":0,
///    "exterior_degree":{"5":2,...}}
LazyGraph parse_graph_spec(const nlohmann::json& spec);

/// Accepts a builtin alias (ray, line, binary, tree3, ternary, grafted),
/// inline JSON (leading '{') or a spec file path.
LazyGraph load_graph(const std::string& text);

nlohmann::json to_json(const DiagnosticTrace& trace);
nlohmann::json to_json(const DiagnosisReport& report);

}  // namespace heatgraph
