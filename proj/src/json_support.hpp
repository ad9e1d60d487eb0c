#pragma once

#include <json.hpp>

#include "cmetric/config.hpp"
#include "cmetric/ingest.hpp"

namespace cmetric::detail {

nlohmann::ordered_json config_json(const Config& config);
Config apply_config_json(const nlohmann::json& doc, Config base);

// Canonical non-negative integer ids become JSON numbers, others strings.
nlohmann::ordered_json agent_json(const AgentId& id);
AgentId agent_from(const nlohmann::json& j);

}  // namespace cmetric::detail
