#include "costshare/equilibria.hpp"

#include <exception>

#include "costshare/error.hpp"

namespace costshare {

namespace {

void check_scale(const GameInstance& g, int max_players) {
  if (g.num_players() > max_players) {
    throw Error(ErrorCode::kScaleExceeded, std::to_string(g.num_players()) +
                                               " players exceed the verification limit of " +
                                               std::to_string(max_players));
  }
}

void check_shape(const GameInstance& g, const StrategyProfile& s) {
  if (static_cast<int>(s.pay.size()) != g.num_players()) {
    throw Error(ErrorCode::kUnknownLabel, "profile does not match the players");
  }
  for (const auto& row : s.pay) {
    if (static_cast<int>(row.size()) != g.num_resources()) {
      throw Error(ErrorCode::kUnknownLabel, "profile does not match the resources");
    }
    for (const auto& v : row) {
      if (sgn(v) < 0) throw Error(ErrorCode::kValidationError, "negative payment in profile");
    }
  }
}

struct Check {
  bool violated = false;
  ViolationWitness witness;
};

// Sum-violation test for one coalition given precomputed player costs.
Check check_coalition(const GameInstance& g, const StrategyProfile& s,
                      const std::vector<PlayerCost>& costs, Coalition c, int max_players) {
  Check out;
  bool any_infeasible = false;
  Rational old_sum(0);
  for (int k : c.members()) {
    any_infeasible = any_infeasible || costs[k].infeasible;
    if (!costs[k].infeasible) old_sum += costs[k].value;
  }
  if (!any_infeasible && sgn(old_sum) == 0) return out;

  const ReducedOptimum red = reduced_optimum_detail(g, c, s.outside(c), max_players);
  if (!any_infeasible && red.value >= old_sum) return out;

  const int n = g.num_players();
  out.violated = true;
  ViolationWitness& w = out.witness;
  w.coalition = c;
  w.kind = WitnessKind::kSum;
  w.deviation.assign(n, std::vector<Rational>(g.num_resources(), Rational(0)));
  const int payer = c.members().front();
  w.deviation[payer] = red.top_up;
  w.old_cost.assign(n, PlayerCost::of(Rational(0)));
  w.new_cost.assign(n, PlayerCost::of(Rational(0)));
  for (int k : c.members()) {
    w.old_cost[k] = costs[k];
    w.new_cost[k] = PlayerCost::of(k == payer ? red.value : Rational(0));
  }
  return out;
}

Verification finish(std::optional<ViolationWitness> w) {
  Verification v;
  v.verified = !w.has_value();
  v.witness = std::move(w);
  return v;
}

Verification verify_over(const GameInstance& g, const StrategyProfile& s, int max_players,
                         int max_size) {
  check_scale(g, max_players);
  check_shape(g, s);
  const auto costs = player_costs(g, s);
  const auto order = coalitions_by_size(g.num_players());

  // One size level at a time so that the first violation in witness order
  // is found without scanning larger coalitions.
  std::size_t begin = 0;
  while (begin < order.size() && order[begin].size() <= max_size) {
    std::size_t end = begin;
    while (end < order.size() && order[end].size() == order[begin].size()) ++end;
    const long count = static_cast<long>(end - begin);
    std::vector<Check> results(count);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      try {
        results[i] = check_coalition(g, s, costs, order[begin + i], max_players);
      } catch (...) {
#pragma omp critical(costshare_verify_se)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& r : results) {
      if (r.violated) return finish(std::move(r.witness));
    }
    begin = end;
  }
  return finish(std::nullopt);
}

}  // namespace

StrategyProfile StrategyProfile::zero(const GameInstance& g) {
  StrategyProfile s;
  s.pay.assign(g.num_players(), std::vector<Rational>(g.num_resources(), Rational(0)));
  return s;
}

Rational StrategyProfile::total(int player) const {
  Rational t(0);
  for (const auto& v : pay[player]) t += v;
  return t;
}

Rational StrategyProfile::resource_total(int resource) const {
  Rational t(0);
  for (const auto& row : pay) t += row[resource];
  return t;
}

std::vector<Rational> StrategyProfile::outside(Coalition c) const {
  const std::size_t m = pay.empty() ? 0 : pay.front().size();
  std::vector<Rational> out(m, Rational(0));
  for (std::size_t k = 0; k < pay.size(); ++k) {
    if (c.contains(static_cast<int>(k))) continue;
    for (std::size_t r = 0; r < m; ++r) out[r] += pay[k][r];
  }
  return out;
}

ResourceSet bought_set(const GameInstance& g, const StrategyProfile& s) {
  check_shape(g, s);
  ResourceSet rs = ResourceSet::empty(g);
  for (int r = 0; r < g.num_resources(); ++r) {
    const Rational& cost = g.resources[r].cost;
    const Rational paid = s.resource_total(r);
    switch (g.family) {
      case Family::kFractionalVc:
        if (sgn(cost) == 0) {
          rs.unbounded[r] = true;
        } else {
          rs.level[r] = paid / cost;
        }
        break;
      case Family::kNonbinaryVc:
        if (sgn(cost) == 0) {
          rs.unbounded[r] = true;
        } else {
          rs.level[r] = Rational(floor_of(paid / cost));
        }
        break;
      default:
        rs.level[r] = paid >= cost ? 1 : 0;
        break;
    }
  }
  return rs;
}

std::vector<PlayerCost> player_costs(const GameInstance& g, const StrategyProfile& s) {
  const ResourceSet bought = bought_set(g, s);
  std::vector<PlayerCost> out;
  for (int k = 0; k < g.num_players(); ++k) {
    if (feasible(g, Coalition::single(k), bought)) {
      out.push_back(PlayerCost::of(s.total(k)));
    } else {
      out.push_back(PlayerCost::unsatisfied());
    }
  }
  return out;
}

namespace serial {

Verification verify_se(const GameInstance& g, const StrategyProfile& s, int max_players) {
  check_scale(g, max_players);
  check_shape(g, s);
  const auto costs = player_costs(g, s);
  for (Coalition c : coalitions_by_size(g.num_players())) {
    Check r = check_coalition(g, s, costs, c, max_players);
    if (r.violated) return finish(std::move(r.witness));
  }
  return finish(std::nullopt);
}

}  // namespace serial

Verification verify_se(const GameInstance& g, const StrategyProfile& s, int max_players) {
  return verify_over(g, s, max_players, g.num_players());
}

Verification verify_ne(const GameInstance& g, const StrategyProfile& s, int max_players) {
  return verify_over(g, s, max_players, 1);
}

bool validate_witness(const GameInstance& g, const StrategyProfile& s, const ViolationWitness& w) {
  const int n = g.num_players();
  const int m = g.num_resources();
  const Coalition c = w.coalition;
  if (c.empty() || (c.mask() & ~g.grand_coalition().mask()) != 0) return false;
  if (static_cast<int>(w.deviation.size()) != n || static_cast<int>(w.old_cost.size()) != n ||
      static_cast<int>(w.new_cost.size()) != n) {
    return false;
  }
  StrategyProfile after = s;
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(w.deviation[k].size()) != m) return false;
    for (const auto& v : w.deviation[k]) {
      if (sgn(v) < 0) return false;
      if (!c.contains(k) && sgn(v) != 0) return false;
    }
    if (c.contains(k)) after.pay[k] = w.deviation[k];
  }
  if (!feasible(g, c, bought_set(g, after))) return false;

  const auto before = player_costs(g, s);
  bool any_infeasible = false;
  Rational old_sum(0), new_sum(0);
  for (int k : c.members()) {
    const PlayerCost now = PlayerCost::of(after.total(k));
    if (!(w.old_cost[k] == before[k]) || !(w.new_cost[k] == now)) return false;
    any_infeasible = any_infeasible || before[k].infeasible;
    if (!before[k].infeasible) old_sum += before[k].value;
    new_sum += now.value;
    if (w.kind == WitnessKind::kStrict && !before[k].infeasible && !(now.value < before[k].value))
      return false;
  }
  if (w.kind == WitnessKind::kSum) return any_infeasible || new_sum < old_sum;
  return true;
}

ViolationWitness strengthen_violation(const GameInstance& g, const StrategyProfile& s,
                                      const ViolationWitness& w) {
  if (w.kind != WitnessKind::kSum || !validate_witness(g, s, w)) {
    throw Error(ErrorCode::kInvalidWitness, "not a valid sum-violation witness");
  }
  const int n = g.num_players();
  const int m = g.num_resources();
  const auto before = player_costs(g, s);

  ViolationWitness out;
  out.kind = WitnessKind::kStrict;
  out.deviation.assign(n, std::vector<Rational>(m, Rational(0)));
  out.old_cost.assign(n, PlayerCost::of(Rational(0)));
  out.new_cost.assign(n, PlayerCost::of(Rational(0)));

  for (int k : w.coalition.members()) {
    if (!before[k].infeasible) continue;
    // An unsatisfied member improves alone by buying its own optimum on top
    // of everyone else's payments.
    const Coalition single = Coalition::single(k);
    const ReducedOptimum red = reduced_optimum_detail(g, single, s.outside(single), n);
    out.coalition = single;
    out.deviation[k] = red.top_up;
    out.old_cost[k] = before[k];
    out.new_cost[k] = PlayerCost::of(red.value);
    return out;
  }

  Rational old_sum(0), new_sum(0);
  std::vector<Rational> dev_total(m, Rational(0));
  std::uint32_t mask = 0;
  for (int k : w.coalition.members()) {
    old_sum += before[k].value;
    for (int r = 0; r < m; ++r) {
      dev_total[r] += w.deviation[k][r];
      new_sum += w.deviation[k][r];
    }
    if (sgn(before[k].value) > 0) mask |= 1u << k;
  }
  out.coalition = Coalition(mask);
  for (int k : out.coalition.members()) {
    const Rational share = before[k].value / old_sum;
    for (int r = 0; r < m; ++r) out.deviation[k][r] = share * dev_total[r];
    out.old_cost[k] = before[k];
    out.new_cost[k] = PlayerCost::of(before[k].value * new_sum / old_sum);
  }
  return out;
}

bool spoa_check(const GameInstance& g, const StrategyProfile& s, int max_players) {
  if (!verify_se(g, s, max_players).verified) {
    throw Error(ErrorCode::kNotSe, "profile is not a strong equilibrium");
  }
  return purchase_cost(g, bought_set(g, s)) == optimum(g, g.grand_coalition(), max_players).cost;
}

Imputation profile_shares(const StrategyProfile& s) {
  Imputation out;
  for (std::size_t k = 0; k < s.pay.size(); ++k) out.push_back(s.total(static_cast<int>(k)));
  return out;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kExists:
      return "EXISTS";
    case Verdict::kNone:
      return "NONE";
    case Verdict::kUnknown:
      return "UNKNOWN";
  }
  return "?";
}

std::string_view method_name(DecisionMethod m) {
  switch (m) {
    case DecisionMethod::kClassRule:
      return "CLASS_RULE";
    case DecisionMethod::kExactEnum:
      return "EXACT_ENUM";
    case DecisionMethod::kCoreEmpty:
      return "CORE_EMPTY";
  }
  return "?";
}

}  // namespace costshare
