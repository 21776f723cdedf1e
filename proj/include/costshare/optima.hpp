#pragma once

#include <vector>

#include "costshare/game.hpp"

namespace costshare {

constexpr int kDefaultMaxPlayers = 12;

struct Optimum {
  ResourceSet set;
  Rational cost;
};

// Minimum-cost resource set satisfying every member of c. Binary families
// use branch-and-bound over positive-cost resources (zero-cost ones are
// always bought); among minimum-cost sets the lexicographically smallest
// sorted index list is returned. NONBINARY_VC searches unit vectors,
// FRACTIONAL_VC solves the degree LP. Throws kScaleExceeded when the
// instance has more than max_players players.
Optimum optimum(const GameInstance& g, Coalition c, int max_players = kDefaultMaxPlayers);

// Every minimum-cost resource set for c (binary families and NONBINARY_VC;
// FRACTIONAL_VC yields the single LP optimum). Sets are in search order.
std::vector<ResourceSet> all_optimal_sets(const GameInstance& g, Coalition c,
                                          int max_players = kDefaultMaxPlayers);

// Cheapest completion for c when `outside[r]` is already paid towards
// resource r by players outside c. `top_up[r]` is what the coalition itself
// must add to r in the minimizing purchase.
struct ReducedOptimum {
  Rational value;
  std::vector<Rational> top_up;
  ResourceSet set;
};

ReducedOptimum reduced_optimum_detail(const GameInstance& g, Coalition c,
                                      const std::vector<Rational>& outside,
                                      int max_players = kDefaultMaxPlayers);

inline Rational reduced_optimum(const GameInstance& g, Coalition c,
                                const std::vector<Rational>& outside,
                                int max_players = kDefaultMaxPlayers) {
  return reduced_optimum_detail(g, c, outside, max_players).value;
}

// Cost of buying rs: sum of level * c(r) over bounded resources.
Rational purchase_cost(const GameInstance& g, const ResourceSet& rs);

struct IntegralityGap {
  Rational integral;
  Rational relaxation;
  // integral / relaxation; meaningful unless `infinite`.
  Rational value;
  bool infinite = false;
};

IntegralityGap integrality_gap(const GameInstance& g, int max_players = kDefaultMaxPlayers);

// VERTEX_COVER: maximum matching size equals minimum vertex cover size,
// both by exhaustive search.
bool koenig_condition(const GameInstance& g, int max_players = kDefaultMaxPlayers);

}  // namespace costshare
