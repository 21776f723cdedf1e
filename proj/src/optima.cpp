#include "costshare/optima.hpp"

#include <algorithm>
#include <optional>

#include "costshare/error.hpp"

namespace costshare {

namespace {

void check_scale(const GameInstance& g, int max_players) {
  if (g.num_players() > max_players) {
    throw Error(ErrorCode::kScaleExceeded, std::to_string(g.num_players()) +
                                               " players exceed the limit of " +
                                               std::to_string(max_players));
  }
}

// Depth-first branch-and-bound over binary purchases. Resources with
// nonpositive price are pre-bought; the rest are branched include-first in
// index order, so the first minimum found is the lexicographically smallest.
class BinarySearch {
 public:
  BinarySearch(const GameInstance& g, Coalition c, std::vector<Rational> price, bool collect_all)
      : g_(g), c_(c), price_(std::move(price)), collect_all_(collect_all) {
    chosen_.assign(g.num_resources(), 0);
    for (int r = 0; r < g.num_resources(); ++r) {
      if (sgn(price_[r]) <= 0) {
        chosen_[r] = 1;
      } else {
        branch_.push_back(r);
      }
    }
  }

  void run() {
    if (!feasible_with_rest(0)) {
      throw Error(ErrorCode::kValidationError, "coalition cannot be satisfied");
    }
    dfs(0, Rational(0));
  }

  const std::optional<Rational>& best() const { return best_; }
  const std::vector<std::vector<char>>& solutions() const { return solutions_; }

 private:
  bool feasible_with_rest(std::size_t from) {
    std::vector<char> trial = chosen_;
    for (std::size_t i = from; i < branch_.size(); ++i) trial[branch_[i]] = 1;
    return completable(g_, c_, chosen_, trial);
  }

  void record(const Rational& cost) {
    if (!best_ || cost < *best_) {
      best_ = cost;
      solutions_.clear();
    }
    if (solutions_.empty() || collect_all_) solutions_.push_back(chosen_);
  }

  bool worse(const Rational& cost) const {
    if (!best_) return false;
    return collect_all_ ? cost > *best_ : cost >= *best_;
  }

  void dfs(std::size_t i, const Rational& cost) {
    if (worse(cost)) return;
    if (feasible_binary(g_, c_, chosen_)) {
      record(cost);
      return;
    }
    if (i == branch_.size()) return;
    const int r = branch_[i];
    chosen_[r] = 1;
    dfs(i + 1, cost + price_[r]);
    chosen_[r] = 0;
    if (feasible_with_rest(i + 1)) dfs(i + 1, cost);
  }

  const GameInstance& g_;
  Coalition c_;
  std::vector<Rational> price_;
  bool collect_all_;
  std::vector<char> chosen_;
  std::vector<int> branch_;
  std::optional<Rational> best_;
  std::vector<std::vector<char>> solutions_;
};

// NONBINARY_VC: branch over unit counts per vertex, highest count first.
// A vertex's price for u units is max(0, u*c(v) - outside(v)).
class UnitSearch {
 public:
  UnitSearch(const GameInstance& g, Coalition c, const std::vector<Rational>& outside,
             bool collect_all)
      : g_(g), c_(c), outside_(outside), collect_all_(collect_all) {
    const auto& vc = g.vertex_cover();
    const int m = g.num_resources();
    cap_.assign(m, 0);
    unbounded_.assign(m, false);
    for (int k : c.members()) {
      cap_[vc.endpoints[k].first] = std::max<long>(cap_[vc.endpoints[k].first], vc.requirement[k]);
      cap_[vc.endpoints[k].second] =
          std::max<long>(cap_[vc.endpoints[k].second], vc.requirement[k]);
    }
    units_.assign(m, 0);
    for (int r = 0; r < m; ++r) {
      if (sgn(g.resources[r].cost) == 0) {
        unbounded_[r] = true;
      } else if (cap_[r] > 0) {
        branch_.push_back(r);
      }
    }
  }

  Rational price(int r, long units) const {
    Rational p = g_.resources[r].cost * units - outside_[r];
    return sgn(p) > 0 ? p : Rational(0);
  }

  void run() { dfs(0, Rational(0)); }

  const std::optional<Rational>& best() const { return best_; }
  const std::vector<std::vector<long>>& solutions() const { return solutions_; }
  const std::vector<bool>& unbounded() const { return unbounded_; }

 private:
  bool feasible_with_rest(std::size_t from) {
    std::vector<long> trial = units_;
    for (std::size_t i = from; i < branch_.size(); ++i) trial[branch_[i]] = cap_[branch_[i]];
    return feasible_units(g_, c_, trial, unbounded_);
  }

  void dfs(std::size_t i, const Rational& cost) {
    if (best_ && (collect_all_ ? cost > *best_ : cost >= *best_)) return;
    if (feasible_units(g_, c_, units_, unbounded_)) {
      if (!best_ || cost < *best_) {
        best_ = cost;
        solutions_.clear();
      }
      if (solutions_.empty() || collect_all_) solutions_.push_back(units_);
      return;
    }
    if (i == branch_.size()) return;
    const int r = branch_[i];
    for (long u = cap_[r]; u >= 0; --u) {
      units_[r] = u;
      if (u == cap_[r] || feasible_with_rest(i + 1)) dfs(i + 1, cost + price(r, u));
    }
    units_[r] = 0;
  }

  const GameInstance& g_;
  Coalition c_;
  const std::vector<Rational>& outside_;
  bool collect_all_;
  std::vector<long> cap_;
  std::vector<bool> unbounded_;
  std::vector<long> units_;
  std::vector<int> branch_;
  std::optional<Rational> best_;
  std::vector<std::vector<long>> solutions_;
};

// FRACTIONAL_VC: minimize total top-up z subject to
// (outside_u + z_u)/c_u + (outside_v + z_v)/c_v >= 1 on every member edge.
ReducedOptimum fractional_reduced(const GameInstance& g, Coalition c,
                                  const std::vector<Rational>& outside) {
  const auto& vc = g.vertex_cover();
  const int m = g.num_resources();
  LinearProgram lp;
  for (int r = 0; r < m; ++r) lp.add_variable(g.resources[r].label, Rational(1));
  for (int k : c.members()) {
    const auto [a, b] = vc.endpoints[k];
    const Rational& ca = g.resources[a].cost;
    const Rational& cb = g.resources[b].cost;
    if (sgn(ca) == 0 || sgn(cb) == 0) continue;
    Rational rhs = 1 - outside[a] / ca - outside[b] / cb;
    if (sgn(rhs) <= 0) continue;
    lp.add_row(g.players[k], {{a, 1 / ca}, {b, 1 / cb}}, Relation::kGreaterEqual, rhs, k);
  }
  const LpOutcome out = solve_lp(lp);
  ReducedOptimum res;
  res.value = out.objective;
  res.top_up = out.primal;
  res.set = ResourceSet::empty(g);
  for (int r = 0; r < m; ++r) {
    if (sgn(g.resources[r].cost) == 0) {
      res.set.unbounded[r] = true;
    } else {
      res.set.level[r] = (outside[r] + out.primal[r]) / g.resources[r].cost;
    }
  }
  return res;
}

ResourceSet binary_set(const GameInstance& g, const std::vector<char>& chosen) {
  ResourceSet rs = ResourceSet::empty(g);
  for (int r = 0; r < g.num_resources(); ++r) rs.level[r] = chosen[r] ? 1 : 0;
  return rs;
}

ResourceSet unit_set(const GameInstance& g, const std::vector<long>& units,
                     const std::vector<bool>& unbounded) {
  ResourceSet rs = ResourceSet::empty(g);
  for (int r = 0; r < g.num_resources(); ++r) {
    rs.level[r] = units[r];
    rs.unbounded[r] = unbounded[r];
  }
  return rs;
}

std::vector<Rational> costs_of(const GameInstance& g) {
  std::vector<Rational> out;
  for (const auto& r : g.resources) out.push_back(r.cost);
  return out;
}

void check_coalition(const GameInstance& g, Coalition c) {
  if (c.empty()) throw Error(ErrorCode::kUnknownLabel, "empty coalition");
  if ((c.mask() & ~g.grand_coalition().mask()) != 0) {
    throw Error(ErrorCode::kUnknownLabel, "coalition references unknown players");
  }
}

}  // namespace

Rational purchase_cost(const GameInstance& g, const ResourceSet& rs) {
  Rational total(0);
  for (int r = 0; r < g.num_resources(); ++r) {
    if (!rs.unbounded[r]) total += rs.level[r] * g.resources[r].cost;
  }
  return total;
}

ReducedOptimum reduced_optimum_detail(const GameInstance& g, Coalition c,
                                      const std::vector<Rational>& outside, int max_players) {
  check_scale(g, max_players);
  check_coalition(g, c);
  const int m = g.num_resources();
  if (static_cast<int>(outside.size()) != m) {
    throw Error(ErrorCode::kUnknownLabel, "outside payments do not match the resources");
  }
  if (g.family == Family::kFractionalVc) return fractional_reduced(g, c, outside);

  ReducedOptimum res;
  res.top_up.assign(m, Rational(0));
  if (g.family == Family::kNonbinaryVc) {
    UnitSearch search(g, c, outside, false);
    search.run();
    const auto& units = search.solutions().front();
    res.value = *search.best();
    for (int r = 0; r < m; ++r) {
      if (!search.unbounded()[r]) res.top_up[r] = search.price(r, units[r]);
    }
    res.set = unit_set(g, units, search.unbounded());
    return res;
  }

  std::vector<Rational> price(m);
  for (int r = 0; r < m; ++r) {
    price[r] = g.resources[r].cost - outside[r];
    if (sgn(price[r]) < 0) price[r] = 0;
  }
  BinarySearch search(g, c, price, false);
  search.run();
  const auto& chosen = search.solutions().front();
  res.value = *search.best();
  for (int r = 0; r < m; ++r) {
    if (chosen[r]) res.top_up[r] = price[r];
  }
  res.set = binary_set(g, chosen);
  return res;
}

Optimum optimum(const GameInstance& g, Coalition c, int max_players) {
  const std::vector<Rational> none(g.num_resources(), Rational(0));
  ReducedOptimum red = reduced_optimum_detail(g, c, none, max_players);
  return {std::move(red.set), std::move(red.value)};
}

std::vector<ResourceSet> all_optimal_sets(const GameInstance& g, Coalition c, int max_players) {
  check_scale(g, max_players);
  check_coalition(g, c);
  std::vector<ResourceSet> out;
  if (g.family == Family::kFractionalVc) {
    out.push_back(optimum(g, c, max_players).set);
    return out;
  }
  if (g.family == Family::kNonbinaryVc) {
    const std::vector<Rational> none(g.num_resources(), Rational(0));
    UnitSearch search(g, c, none, true);
    search.run();
    for (const auto& units : search.solutions()) out.push_back(unit_set(g, units, search.unbounded()));
    return out;
  }
  BinarySearch search(g, c, costs_of(g), true);
  search.run();
  for (const auto& chosen : search.solutions()) out.push_back(binary_set(g, chosen));
  return out;
}

IntegralityGap integrality_gap(const GameInstance& g, int max_players) {
  IntegralityGap gap;
  gap.integral = optimum(g, g.grand_coalition(), max_players).cost;
  if (g.family == Family::kFractionalVc) {
    // The game's purchases are already fractional.
    gap.relaxation = gap.integral;
  } else {
    const LpOutcome out = solve_lp(build_lp(g));
    gap.relaxation = out.objective;
  }
  if (sgn(gap.relaxation) == 0) {
    gap.infinite = sgn(gap.integral) > 0;
    gap.value = 1;
  } else {
    gap.value = gap.integral / gap.relaxation;
  }
  return gap;
}

bool koenig_condition(const GameInstance& g, int max_players) {
  if (g.family != Family::kVertexCover) {
    throw Error(ErrorCode::kUnsupportedFamily, "koenig_condition needs a VERTEX_COVER instance");
  }
  check_scale(g, max_players);
  const auto& ends = g.vertex_cover().endpoints;
  const int n = g.num_players();
  int matching = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (size <= matching) continue;
    std::vector<char> used(g.num_resources(), 0);
    bool ok = true;
    for (int k : Coalition(mask).members()) {
      auto [a, b] = ends[k];
      if (used[a] || used[b]) {
        ok = false;
        break;
      }
      used[a] = used[b] = 1;
    }
    if (ok) matching = size;
  }
  BinarySearch cover(g, g.grand_coalition(), std::vector<Rational>(g.num_resources(), Rational(1)),
                     false);
  cover.run();
  return Rational(matching) == *cover.best();
}

}  // namespace costshare
