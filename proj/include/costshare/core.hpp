#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "costshare/game.hpp"
#include "costshare/optima.hpp"

namespace costshare {

// c(C) for every coalition, indexed by bitmask (entry 0 is unused).
class CoalitionCosts {
 public:
  CoalitionCosts() = default;
  CoalitionCosts(int num_players, std::vector<Rational> by_mask)
      : num_players_(num_players), by_mask_(std::move(by_mask)) {}

  int num_players() const { return num_players_; }
  const Rational& operator[](Coalition c) const { return by_mask_[c.mask()]; }
  const Rational& grand() const { return by_mask_.back(); }
  const std::vector<Rational>& by_mask() const { return by_mask_; }

 private:
  int num_players_ = 0;
  std::vector<Rational> by_mask_;
};

// OpenMP-parallel over coalitions; identical output to serial::coalition_costs.
CoalitionCosts coalition_costs(const GameInstance& g, int max_players = kDefaultMaxPlayers);

using Imputation = std::vector<Rational>;

// Either a core member, or EMPTY with a balanced collection: weights
// lambda_C >= 0 with every player covered at least once and
// sum lambda_C c(C) < c(K), which no imputation can satisfy.
struct CoreResult {
  bool empty = false;
  Imputation imputation;
  std::vector<std::pair<Coalition, Rational>> certificate;
};

CoreResult find_core(const GameInstance& g, int max_players = kDefaultMaxPlayers);
// Same search against precomputed costs; `candidate`, when given and in the
// core, is returned as is.
CoreResult find_core(const CoalitionCosts& costs, const std::optional<Imputation>& candidate = {});

bool in_core(const GameInstance& g, const Imputation& imp, int max_players = kDefaultMaxPlayers);
bool in_core(const CoalitionCosts& costs, const Imputation& imp);

// Exact re-check of an EMPTY certificate.
bool check_core_certificate(const CoalitionCosts& costs,
                            const std::vector<std::pair<Coalition, Rational>>& certificate);

namespace serial {
CoalitionCosts coalition_costs(const GameInstance& g, int max_players = kDefaultMaxPlayers);
}  // namespace serial

}  // namespace costshare
