#include "costshare/profile_io.hpp"

#include "costshare/error.hpp"
#include "costshare/instance_io.hpp"

namespace costshare {

using nlohmann::json;

json profile_to_json(const GameInstance& g, const StrategyProfile& s) {
  json players = json::object();
  for (int k = 0; k < g.num_players(); ++k) {
    json row = json::object();
    for (int r = 0; r < g.num_resources(); ++r) {
      if (sgn(s.pay[k][r]) != 0) row[g.resources[r].label] = to_string(s.pay[k][r]);
    }
    players[g.players[k]] = row;
  }
  return {{"schema", 1}, {"profile", players}};
}

StrategyProfile profile_from_json(const GameInstance& g, const json& doc) {
  if (!doc.is_object() || !doc.contains("profile") || !doc["profile"].is_object()) {
    throw Error(ErrorCode::kParseError, "$.profile: expected an object of players");
  }
  if (doc.contains("schema") && doc["schema"] != 1) {
    throw Error(ErrorCode::kParseError, "$.schema: unsupported version");
  }
  StrategyProfile s = StrategyProfile::zero(g);
  for (const auto& [player, row] : doc["profile"].items()) {
    const std::string where = "$.profile." + player;
    const int k = g.player_index(player);
    if (!row.is_object()) throw Error(ErrorCode::kParseError, where + ": expected an object");
    for (const auto& [resource, amount] : row.items()) {
      const Rational v = rational_from_json(amount, where + "." + resource);
      if (sgn(v) < 0) throw Error(ErrorCode::kValidationError, where + "." + resource + ": negative payment");
      s.pay[k][g.resource_index(resource)] = v;
    }
  }
  return s;
}

}  // namespace costshare
