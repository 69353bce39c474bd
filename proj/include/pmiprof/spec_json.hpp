#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pmiprof/bend.hpp"
#include "pmiprof/distributions.hpp"

namespace pmiprof {

// Distribution spec format, e.g.
//   {"type": "mvn", "mean": [...], "cov": [[...]], "split": [m, n]}
//   {"mixture": {"weights": [...], "components": [<spec>, ...]}}
//   {"bend": {"base": <spec>, "f": {"type": "spiral", "v": 0.5}, "g": null}}
//   {"product": {"x": <marginal>, "y": <marginal>}}
//   {"contaminate": {"base": <spec>, "alpha": 0.2, "noise": <marginal>}}
// See README for the full list of primitives and map types.
DistPtr distribution_from_json(const nlohmann::json& spec);

// One-block spec: {"type": "normal"|"student"|"uniform"|"categorical", ...}
MarginalPtr marginal_from_json(const nlohmann::json& spec);

// Map spec: {"type": "affine"|"asinh"|"spiral"|"waves"|"compose", ...}
MapPtr map_from_json(const nlohmann::json& spec);

// Reads a spec file from disk; "task:NAME" resolves a builtin benchmark task.
DistPtr load_distribution(const std::string& path_or_task);

}  // namespace pmiprof
