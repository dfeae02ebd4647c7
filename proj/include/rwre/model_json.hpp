#pragma once

#include <json.hpp>

#include "rwre/model.hpp"

namespace rwre {

/// {"d", "p0": {"+1": ..}, "atoms": [{"weight", "U": {..}}], "kappa0", "gamma_max"}
nlohmann::json model_to_json(const ModelSpec& model);

/// Inverse of model_to_json. Unknown keys, missing keys and missing
/// directions throw std::invalid_argument, as do the ModelSpec checks.
ModelSpec model_from_json(const nlohmann::json& j);

}  // namespace rwre
