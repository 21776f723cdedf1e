#pragma once

#include <optional>
#include <string>
#include <vector>

#include "costshare/core.hpp"
#include "costshare/game.hpp"
#include "costshare/optima.hpp"

namespace costshare {

// Per-player, per-resource nonnegative payments.
struct StrategyProfile {
  std::vector<std::vector<Rational>> pay;  // [player][resource]

  static StrategyProfile zero(const GameInstance& g);
  Rational total(int player) const;
  Rational resource_total(int resource) const;
  // Sum of payments on each resource by players outside c.
  std::vector<Rational> outside(Coalition c) const;
  bool operator==(const StrategyProfile& other) const { return pay == other.pay; }
};

// Resources whose total payment reaches their cost: 0/1 levels, units
// floor(total / c) for NONBINARY_VC, degree total / c for FRACTIONAL_VC.
// Zero-cost resources are always included.
ResourceSet bought_set(const GameInstance& g, const StrategyProfile& s);

// A player's cost: the payment total, or INFEASIBLE when the bought set
// leaves its constraint unsatisfied. INFEASIBLE exceeds every finite cost.
struct PlayerCost {
  bool infeasible = false;
  Rational value;

  static PlayerCost of(const Rational& v) { return {false, v}; }
  static PlayerCost unsatisfied() { return {true, Rational(0)}; }
  bool operator==(const PlayerCost& o) const {
    return infeasible == o.infeasible && (infeasible || value == o.value);
  }
  std::string str() const { return infeasible ? "INFEASIBLE" : to_string(value); }
};

std::vector<PlayerCost> player_costs(const GameInstance& g, const StrategyProfile& s);

enum class WitnessKind { kSum, kStrict };

struct ViolationWitness {
  Coalition coalition;
  // New payments of the members (rows of non-members are zero).
  std::vector<std::vector<Rational>> deviation;
  std::vector<PlayerCost> old_cost;  // per player; meaningful for members
  std::vector<PlayerCost> new_cost;
  WitnessKind kind = WitnessKind::kSum;
};

struct Verification {
  bool verified = false;
  std::optional<ViolationWitness> witness;
};

// Sum-violation check over every coalition (OpenMP-parallel, deterministic).
// The returned witness belongs to the first violating coalition in
// (size, member list) order; its deviation charges the whole top-up to the
// coalition's lowest-indexed member.
Verification verify_se(const GameInstance& g, const StrategyProfile& s,
                       int max_players = kDefaultMaxPlayers);
Verification verify_ne(const GameInstance& g, const StrategyProfile& s,
                       int max_players = kDefaultMaxPlayers);

// Whether w is a genuine violation of s: the deviation satisfies every member
// given the outsiders' payments, and costs improve in the sense of w.kind.
bool validate_witness(const GameInstance& g, const StrategyProfile& s, const ViolationWitness& w);

// Turns a SUM witness into a STRICT one by dropping zero-paying members and
// splitting the deviation in proportion to the old payments. A member with
// an unsatisfied constraint yields a singleton witness instead. Throws
// kInvalidWitness when w does not validate.
ViolationWitness strengthen_violation(const GameInstance& g, const StrategyProfile& s,
                                      const ViolationWitness& w);

// Cost of the bought set equals the optimum. Throws kNotSe if s is not an SE.
bool spoa_check(const GameInstance& g, const StrategyProfile& s,
                int max_players = kDefaultMaxPlayers);

// Shares |s_k| as an imputation.
Imputation profile_shares(const StrategyProfile& s);

// ---------------------------------------------------------------------------
// Constructions

struct LpConstruction {
  bool integral = false;  // false: NOT_INTEGRAL
  Rational lp_value;
  Rational integral_value;
  StrategyProfile profile;
};

// SET_COVER, VERTEX_COVER, EDGE_COVER, UFL, CCRFL, CONNECTION, CUTTING.
// Applies the family's payment formula to the minimum-cost integral solution
// and the solver's optimal dual, which is valid whenever both values agree.
LpConstruction construct_se_from_lp(const GameInstance& g, int max_players = kDefaultMaxPlayers);

// Undirected single-source CONNECTION game in which every non-source vertex
// is some player's sink. Throws kNotMstGame otherwise.
bool is_mst_game(const GameInstance& g);
StrategyProfile bird_allocation(const GameInstance& g);

// TERMINAL_BACKUP with d = 2. Throws kCoreRequired unless imp is in the core.
StrategyProfile tb2_allocation(const GameInstance& g, const Imputation& imp,
                               int max_players = kDefaultMaxPlayers);

// CUTTING star whose players each separate their own leaf from the other
// players' leaves. Throws kNotStar otherwise.
bool is_multiway_star(const GameInstance& g);
StrategyProfile multiwaycut_star_se(const GameInstance& g, int uncut);

// ---------------------------------------------------------------------------
// Deciders

enum class Verdict { kExists, kNone, kUnknown };
enum class DecisionMethod { kClassRule, kExactEnum, kCoreEmpty };

struct SeDecision {
  Verdict verdict = Verdict::kUnknown;
  DecisionMethod method = DecisionMethod::kClassRule;
  std::optional<StrategyProfile> witness;
  std::string detail;
  long nodes = 0;  // LP solves spent by decide_se_exact
};

std::string_view verdict_name(Verdict v);
std::string_view method_name(DecisionMethod m);

SeDecision decide_se_class(const GameInstance& g, int max_players = kDefaultMaxPlayers);

constexpr long kDefaultNodeBudget = 20000;
SeDecision decide_se_exact(const GameInstance& g, long node_budget = kDefaultNodeBudget,
                           int max_players = kDefaultMaxPlayers);

namespace serial {
Verification verify_se(const GameInstance& g, const StrategyProfile& s,
                       int max_players = kDefaultMaxPlayers);
}  // namespace serial

}  // namespace costshare
