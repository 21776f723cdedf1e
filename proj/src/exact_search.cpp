// Exact SE decision by disjunctive branching over payment polytopes.
//
// A profile is an SE iff every coalition C pays at most its reduced optimum
// given the outsiders' payments. For a fixed minimal purchase R' of C that
// bound is sum over r in R' of max(0, c(r) - out_C(r)), so the SE set is an
// intersection of unions of half-spaces, one union per (C, R'). The search
// keeps a polytope (payments of one optimal purchase plus chosen half-spaces),
// finds a point by LP, and branches on a union the point violates.

#include <algorithm>
#include <functional>
#include <map>

#include "costshare/equilibria.hpp"
#include "costshare/error.hpp"

namespace costshare {

namespace {

// Linear constraint sum(coef * var) <= rhs over payment variables.
struct HalfSpace {
  std::vector<LpTerm> terms;
  Rational rhs;
};

struct Disjunction {
  Coalition coalition;
  std::vector<HalfSpace> options;
};

class PaymentSpace {
 public:
  PaymentSpace(const GameInstance& g, std::vector<int> paid) : g_(g), paid_(std::move(paid)) {
    index_.assign(static_cast<std::size_t>(g.num_players()) * g.num_resources(), -1);
    for (int k = 0; k < g.num_players(); ++k) {
      for (int r : paid_) {
        index_[k * g.num_resources() + r] = count_++;
      }
    }
  }

  int var(int player, int resource) const { return index_[player * g_.num_resources() + resource]; }
  int count() const { return count_; }
  const std::vector<int>& paid() const { return paid_; }
  bool is_paid(int r) const { return var(0, r) >= 0; }

  StrategyProfile profile(const std::vector<Rational>& x) const {
    StrategyProfile s = StrategyProfile::zero(g_);
    for (int k = 0; k < g_.num_players(); ++k) {
      for (int r : paid_) s.pay[k][r] = x[var(k, r)];
    }
    return s;
  }

 private:
  const GameInstance& g_;
  std::vector<int> paid_;
  std::vector<int> index_;
  int count_ = 0;
};

std::vector<LpTerm> merged(std::map<int, Rational> acc) {
  std::vector<LpTerm> out;
  for (auto& [v, c] : acc) {
    if (sgn(c) != 0) out.push_back({v, c});
  }
  return out;
}

Rational evaluate(const HalfSpace& h, const std::vector<Rational>& x) {
  Rational lhs(0);
  for (const auto& t : h.terms) lhs += t.coefficient * x[t.variable];
  return lhs;
}

// Minimal feasible 0/1 purchases for c among positive-cost resources.
std::vector<std::vector<int>> minimal_binary_sets(const GameInstance& g, Coalition c) {
  const int m = g.num_resources();
  std::vector<char> chosen(m, 0);
  std::vector<int> branch;
  for (int r = 0; r < m; ++r) {
    if (sgn(g.resources[r].cost) == 0) {
      chosen[r] = 1;
    } else {
      branch.push_back(r);
    }
  }
  std::vector<std::vector<int>> out;
  auto rest_feasible = [&](std::size_t from) {
    std::vector<char> trial = chosen;
    for (std::size_t i = from; i < branch.size(); ++i) trial[branch[i]] = 1;
    return completable(g, c, chosen, trial);
  };
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (feasible_binary(g, c, chosen)) {
      std::vector<int> set;
      for (int r : branch) {
        if (!chosen[r]) continue;
        chosen[r] = 0;
        const bool redundant = feasible_binary(g, c, chosen);
        chosen[r] = 1;
        if (redundant) return;
        set.push_back(r);
      }
      out.push_back(std::move(set));
      return;
    }
    if (i == branch.size()) return;
    chosen[branch[i]] = 1;
    dfs(i + 1);
    chosen[branch[i]] = 0;
    if (rest_feasible(i + 1)) dfs(i + 1);
  };
  dfs(0);
  return out;
}

// Minimal feasible unit vectors for c (NONBINARY_VC).
std::vector<std::vector<long>> minimal_unit_vectors(const GameInstance& g, Coalition c) {
  const auto& vc = g.vertex_cover();
  const int m = g.num_resources();
  std::vector<long> cap(m, 0), units(m, 0);
  std::vector<bool> unbounded(m, false);
  for (int k : c.members()) {
    cap[vc.endpoints[k].first] = std::max<long>(cap[vc.endpoints[k].first], vc.requirement[k]);
    cap[vc.endpoints[k].second] = std::max<long>(cap[vc.endpoints[k].second], vc.requirement[k]);
  }
  std::vector<int> branch;
  for (int r = 0; r < m; ++r) {
    if (sgn(g.resources[r].cost) == 0) {
      unbounded[r] = true;
    } else if (cap[r] > 0) {
      branch.push_back(r);
    }
  }
  std::vector<std::vector<long>> out;
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (feasible_units(g, c, units, unbounded)) {
      for (int r : branch) {
        if (units[r] == 0) continue;
        --units[r];
        const bool redundant = feasible_units(g, c, units, unbounded);
        ++units[r];
        if (redundant) return;
      }
      out.push_back(units);
      return;
    }
    if (i == branch.size()) return;
    const int r = branch[i];
    for (long u = cap[r]; u >= 0; --u) {
      units[r] = u;
      std::vector<long> trial = units;
      for (std::size_t j = i + 1; j < branch.size(); ++j) trial[branch[j]] = cap[branch[j]];
      if (feasible_units(g, c, trial, unbounded)) dfs(i + 1);
    }
    units[r] = 0;
  };
  dfs(0);
  return out;
}

// Solves the square system A y = b exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || sgn(a[row][col]) == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Vertices of {y >= 0 : sum over edges e at v of y_e <= c(v)} for the given
// edges (players) of a FRACTIONAL_VC game.
std::vector<std::vector<Rational>> edge_polytope_vertices(const GameInstance& g,
                                                          const std::vector<int>& edges) {
  const auto& vc = g.vertex_cover();
  const std::size_t d = edges.size();
  std::vector<int> verts;
  for (int k : edges) {
    verts.push_back(vc.endpoints[k].first);
    verts.push_back(vc.endpoints[k].second);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  // Constraint rows: first d are y_e >= 0 (as -y_e <= 0), then vertex caps.
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Rational> row(d, Rational(0));
    row[i] = -1;
    rows.push_back(row);
    rhs.push_back(0);
  }
  for (int v : verts) {
    std::vector<Rational> row(d, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (vc.endpoints[edges[i]].first == v || vc.endpoints[edges[i]].second == v) row[i] = 1;
    }
    rows.push_back(row);
    rhs.push_back(g.resources[v].cost);
  }

  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> pick(d);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth, std::size_t from) {
    if (depth == d) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (std::size_t i : pick) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
      auto y = solve_square(a, b);
      if (!y) return;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Rational lhs(0);
        for (std::size_t j = 0; j < d; ++j) lhs += rows[i][j] * (*y)[j];
        if (lhs > rhs[i]) return;
      }
      if (std::find(out.begin(), out.end(), *y) == out.end()) out.push_back(std::move(*y));
      return;
    }
    for (std::size_t i = from; i < rows.size(); ++i) {
      pick[depth] = i;
      choose(depth + 1, i + 1);
    }
  };
  choose(0, 0);
  return out;
}

// Left side shared by every option: the coalition's own payments.
std::map<int, Rational> coalition_spend(const PaymentSpace& space, Coalition c) {
  std::map<int, Rational> acc;
  for (int k : c.members()) {
    for (int r : space.paid()) acc[space.var(k, r)] += 1;
  }
  return acc;
}

std::vector<Disjunction> binary_disjunctions(const GameInstance& g, const PaymentSpace& space,
                                             const ResourceSet* units_template) {
  std::vector<Disjunction> out;
  const bool units = units_template != nullptr;
  for (Coalition c : coalitions_by_size(g.num_players())) {
    std::vector<std::vector<Rational>> purchases;  // per minimal purchase, level per resource
    if (units) {
      for (const auto& u : minimal_unit_vectors(g, c)) {
        std::vector<Rational> lv(g.num_resources(), Rational(0));
        for (int r = 0; r < g.num_resources(); ++r) lv[r] = u[r];
        purchases.push_back(std::move(lv));
      }
    } else {
      for (const auto& set : minimal_binary_sets(g, c)) {
        std::vector<Rational> lv(g.num_resources(), Rational(0));
        for (int r : set) lv[r] = 1;
        purchases.push_back(std::move(lv));
      }
    }
    for (const auto& level : purchases) {
      Disjunction d;
      d.coalition = c;
      // A paid resource carries exactly its target amount, so outsiders pay at
      // most that much. When the purchase needs at least the target level,
      // level * c(r) - out(r) is never negative and the resource always enters
      // the bound linearly; only the others need a case split.
      Rational base(0);
      std::map<int, Rational> shared = coalition_spend(space, c);
      std::vector<int> flexible;
      for (int r = 0; r < g.num_resources(); ++r) {
        if (sgn(level[r]) == 0 || sgn(g.resources[r].cost) == 0) continue;
        if (!space.is_paid(r)) {
          base += level[r] * g.resources[r].cost;
        } else if (units && level[r] < units_template->level[r]) {
          flexible.push_back(r);
        } else {
          base += level[r] * g.resources[r].cost;
          for (int k = 0; k < g.num_players(); ++k) {
            if (!c.contains(k)) shared[space.var(k, r)] += 1;
          }
        }
      }
      const std::size_t f = flexible.size();
      for (std::uint32_t pmask = 0; pmask < (1u << f); ++pmask) {
        std::map<int, Rational> acc = shared;
        Rational rhs = base;
        for (std::size_t i = 0; i < f; ++i) {
          if (!((pmask >> i) & 1u)) continue;
          const int r = flexible[i];
          rhs += level[r] * g.resources[r].cost;
          for (int k = 0; k < g.num_players(); ++k) {
            if (!c.contains(k)) acc[space.var(k, r)] += 1;
          }
        }
        d.options.push_back({merged(std::move(acc)), rhs});
      }
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<Disjunction> fractional_disjunctions(const GameInstance& g, const PaymentSpace& space) {
  const auto& vc = g.vertex_cover();
  std::vector<Disjunction> out;
  for (Coalition c : coalitions_by_size(g.num_players())) {
    std::vector<int> edges;
    for (int k : c.members()) {
      const auto [a, b] = vc.endpoints[k];
      if (sgn(g.resources[a].cost) > 0 && sgn(g.resources[b].cost) > 0) edges.push_back(k);
    }
    Disjunction d;
    d.coalition = c;
    for (const auto& y : edge_polytope_vertices(g, edges)) {
      std::map<int, Rational> acc = coalition_spend(space, c);
      Rational rhs(0);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (sgn(y[i]) == 0) continue;
        rhs += y[i];
        for (int v : {vc.endpoints[edges[i]].first, vc.endpoints[edges[i]].second}) {
          for (int k = 0; k < g.num_players(); ++k) {
            if (!c.contains(k)) acc[space.var(k, v)] += y[i] / g.resources[v].cost;
          }
        }
      }
      d.options.push_back({merged(std::move(acc)), rhs});
    }
    out.push_back(std::move(d));
  }
  return out;
}

struct SearchOutcome {
  bool found = false;
  bool exhausted = true;  // false when the budget ran out
  std::vector<Rational> point;
};

SearchOutcome branch(const LinearProgram& base, const std::vector<Disjunction>& disjunctions, long& nodes, long budget) {
  SearchOutcome res;
  // Each stack entry lists the (disjunction, option) pairs imposed.
  std::vector<std::vector<std::pair<int, int>>> stack{{}};
  while (!stack.empty()) {
    if (nodes >= budget) {
      res.exhausted = false;
      return res;
    }
    const auto imposed = std::move(stack.back());
    stack.pop_back();
    LinearProgram lp = base;
    for (const auto& [di, oi] : imposed) {
      const HalfSpace& h = disjunctions[di].options[oi];
      lp.add_row("d" + std::to_string(di) + "o" + std::to_string(oi), h.terms, Relation::kLessEqual,
                 h.rhs);
    }
    ++nodes;
    const LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::kOptimal) continue;

    int pick = -1;
    for (int di = 0; di < static_cast<int>(disjunctions.size()); ++di) {
      const auto& d = disjunctions[di];
      const bool satisfied = std::any_of(d.options.begin(), d.options.end(), [&](const HalfSpace& h) {
        return evaluate(h, out.primal) <= h.rhs;
      });
      if (satisfied) continue;
      if (pick < 0 || d.options.size() < disjunctions[pick].options.size()) pick = di;
    }
    if (pick < 0) {
      res.found = true;
      res.point = out.primal;
      return res;
    }
    // Push in reverse so option 0 is explored first.
    for (int oi = static_cast<int>(disjunctions[pick].options.size()) - 1; oi >= 0; --oi) {
      auto next = imposed;
      next.emplace_back(pick, oi);
      stack.push_back(std::move(next));
    }
  }
  return res;
}

}  // namespace

SeDecision decide_se_exact(const GameInstance& g, long node_budget, int max_players) {
  if (g.num_players() > max_players) {
    throw Error(ErrorCode::kScaleExceeded, std::to_string(g.num_players()) +
                                               " players exceed the limit of " +
                                               std::to_string(max_players));
  }
  if (g.family == Family::kCcrfl) {
    // The half-space encoding assumes free disposal, which CCRFL lacks.
    SeDecision d = decide_se_class(g, max_players);
    d.detail += "; CCRFL is decided by its class rule";
    return d;
  }
  SeDecision d;
  d.method = DecisionMethod::kExactEnum;
  const int n = g.num_players();
  const int m = g.num_resources();
  const Rational grand = optimum(g, g.grand_coalition(), max_players).cost;
  bool budget_hit = false;

  std::vector<ResourceSet> targets;
  if (g.family == Family::kFractionalVc) {
    targets.push_back(ResourceSet::empty(g));  // the LP face is encoded directly
  } else {
    targets = all_optimal_sets(g, g.grand_coalition(), max_players);
  }

  for (const ResourceSet& target : targets) {
    std::vector<int> paid;
    for (int r = 0; r < m; ++r) {
      if (sgn(g.resources[r].cost) == 0) continue;
      if (g.family == Family::kFractionalVc || sgn(target.level[r]) > 0) paid.push_back(r);
    }
    PaymentSpace space(g, paid);
    LinearProgram base;
    for (int k = 0; k < n; ++k) {
      for (int r : paid) base.add_variable(g.players[k] + "@" + g.resources[r].label, Rational(0));
    }
    if (g.family == Family::kFractionalVc) {
      // Degrees x_v = paid(v)/c(v) cover every edge at total cost c(K).
      const auto& vc = g.vertex_cover();
      for (int k = 0; k < n; ++k) {
        const auto [a, b] = vc.endpoints[k];
        if (sgn(g.resources[a].cost) == 0 || sgn(g.resources[b].cost) == 0) continue;
        std::vector<LpTerm> terms;
        for (int v : {a, b}) {
          for (int j = 0; j < n; ++j) terms.push_back({space.var(j, v), 1 / g.resources[v].cost});
        }
        base.add_row("cover:" + g.players[k], std::move(terms), Relation::kGreaterEqual, 1);
      }
      std::vector<LpTerm> all;
      for (int v : paid) {
        for (int j = 0; j < n; ++j) all.push_back({space.var(j, v), Rational(1)});
      }
      base.add_row("optimal", std::move(all), Relation::kEqual, grand);
    } else {
      for (int r : paid) {
        std::vector<LpTerm> terms;
        for (int k = 0; k < n; ++k) terms.push_back({space.var(k, r), Rational(1)});
        base.add_row("buy:" + g.resources[r].label, std::move(terms), Relation::kEqual,
                     target.level[r] * g.resources[r].cost);
      }
    }

    std::vector<Disjunction> disjunctions;
    if (g.family == Family::kFractionalVc) {
      disjunctions = fractional_disjunctions(g, space);
    } else {
      disjunctions =
          binary_disjunctions(g, space, g.family == Family::kNonbinaryVc ? &target : nullptr);
    }

    const SearchOutcome found = branch(base, disjunctions, d.nodes, node_budget);
    if (found.found) {
      StrategyProfile s = space.profile(found.point);
      if (!verify_se(g, s, max_players).verified) {
        throw Error(ErrorCode::kNotSe, "exact search produced a profile that fails verification");
      }
      d.verdict = Verdict::kExists;
      d.witness = std::move(s);
      d.detail = "payment point satisfying every coalition constraint";
      return d;
    }
    budget_hit = budget_hit || !found.exhausted;
    if (budget_hit) break;
  }
  if (budget_hit) {
    d.verdict = Verdict::kUnknown;
    d.detail = "node budget of " + std::to_string(node_budget) + " LP solves exhausted";
  } else {
    d.verdict = Verdict::kNone;
    d.detail = "every optimal purchase's payment polytope misses some coalition constraint";
  }
  return d;
}

}  // namespace costshare
