#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "costshare/game.hpp"

namespace costshare {

// JSON instance format, "schema": 1. See README for the per-family fields.
// Throws Error(kParseError) with the offending field path, or
// Error(kValidationError) from validate().
GameInstance load_instance(std::string_view text);
GameInstance instance_from_json(const nlohmann::json& doc);

nlohmann::json instance_to_json(const GameInstance& g);
std::string serialize_instance(const GameInstance& g, int indent = 2);

// FNV-1a over the compact serialization; stable across runs and platforms.
std::uint64_t instance_digest(const GameInstance& g);

// Rationals are written as JSON integers when they fit, else "p/q" strings.
nlohmann::json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& value, const std::string& where);

}  // namespace costshare
