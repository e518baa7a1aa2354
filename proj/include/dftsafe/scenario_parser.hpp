#pragma once

#include <string_view>

#include "dftsafe/scenario.hpp"

namespace dftsafe {

/// Parses a JSON scenario document:
/// {
///   "parameters": {"name": value, ...},
///   "blocks": [{"name": "...", "template": "default|voter|switch",
///               "input_vote": k, "intern_rate": "expr", "switching_rate": "expr"}, ...],
///   "channels": [{"from": "...", "to": "..."}, ...],
///   "tasks": [{"name": "...", "mode": "and|spare", "paths": [["block", ...], ...]}, ...],
///   "architecture": {"platforms": [...], "buses": [{"name": "...", "connects": [...]}, ...]},
///   "hardware_templates": {"key": {"rate": "expr"} |
///                                 {"transient_rate": "expr", "permanent_rate": "expr",
///                                  "safety_mechanism_rate": "expr",
///                                  "transient_coverage": c, "permanent_coverage": c,
///                                  "dormancy": d}, ...},
///   "assignment": {"blocks": {"block": "platform", ...},
///                  "platform_templates": {"platform": "key", ...},
///                  "bus_templates": {"bus": "key", ...},
///                  "channels": {"from->to": "bus", ...}},
///   "labels": [{"name": "...", "when": "predicate"}, ...]
/// }
/// Throws ScenarioError on schema violations.
Scenario parseScenario(std::string_view text);

}  // namespace dftsafe
