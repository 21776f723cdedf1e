#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "costshare/game.hpp"

namespace costshare {

// Named example instances. `k` only matters for multiwaycut_star_k (number
// of leaves, 2..31). Unknown names throw Error(kUnknownFixture).
std::vector<std::string> fixture_names();
nlohmann::json fixture_json(const std::string& name, int k = 3);
GameInstance fixture(const std::string& name, int k = 3);

}  // namespace costshare
