#pragma once

#include <json.hpp>

#include "costshare/equilibria.hpp"

namespace costshare {

// {"schema": 1, "profile": {player: {resource: "p/q"}}}. Zero payments are
// omitted on output and default to zero on input. Input amounts may also be
// plain JSON integers.
nlohmann::json profile_to_json(const GameInstance& g, const StrategyProfile& s);
StrategyProfile profile_from_json(const GameInstance& g, const nlohmann::json& doc);

}  // namespace costshare
