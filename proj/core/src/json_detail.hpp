#pragma once

#include <json.hpp>

#include "mgc/scenario.hpp"

namespace mgc::detail {

[[nodiscard]] nlohmann::ordered_json config_json(const ScenarioConfig& config);

}  // namespace mgc::detail
