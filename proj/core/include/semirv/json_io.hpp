#pragma once

#include <json.hpp>

#include "semirv/dist.hpp"
#include "semirv/risk.hpp"
#include "semirv/tailfn.hpp"

namespace semirv {

// {"family": "...", "params": {...}, "lattice": bool}; class metadata
// (gamma index, integral divergence) is recomputed on load, never read.
nlohmann::json to_json(const TailFunctionSpec& spec);
TailFunctionSpec tailfn_from_json(const nlohmann::json& j);

// {"alpha": r, "f": <spec>, "kind": "continuous"|"lattice"}
nlohmann::json to_json(const SemiRVDistribution& dist);
SemiRVDistribution dist_from_json(const nlohmann::json& j);

// {"n": int, "alpha": r, "insurance": [...], "financial": [...],
//  "negative_part": "none" | {"shifted_exp": {"rate": r}}}
nlohmann::json to_json(const RiskModelConfig& config);
RiskModelConfig risk_config_from_json(const nlohmann::json& j);

}  // namespace semirv
