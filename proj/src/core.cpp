#include "costshare/core.hpp"

#include <exception>
#include <functional>

#include "costshare/error.hpp"

namespace costshare {

namespace {

void check_scale(const GameInstance& g, int max_players) {
  if (g.num_players() > max_players) {
    throw Error(ErrorCode::kScaleExceeded, std::to_string(g.num_players()) +
                                               " players exceed the coalition-table limit of " +
                                               std::to_string(max_players));
  }
}

Rational share_of(const Imputation& imp, Coalition c) {
  Rational s(0);
  for (int k : c.members()) s += imp[k];
  return s;
}

// Column form of the core LP: one variable per coalition, one covering row
// per player. Its optimum equals c(K) exactly when the core is nonempty; the
// row duals are then a core member.
LinearProgram balanced_lp(int n, const std::vector<Coalition>& coalitions,
                          const std::vector<Rational>& by_mask) {
  LinearProgram lp;
  std::vector<std::vector<LpTerm>> rows(n);
  for (Coalition c : coalitions) {
    const int var = lp.add_variable("C" + std::to_string(c.mask()), by_mask[c.mask()]);
    for (int k : c.members()) rows[k].push_back({var, Rational(1)});
  }
  for (int k = 0; k < n; ++k) {
    lp.add_row("player" + std::to_string(k), std::move(rows[k]), Relation::kGreaterEqual,
               Rational(1), k);
  }
  return lp;
}

// Largest feasible gamma_j with gamma_0..gamma_{j-1} fixed, via the dual of
//   max gamma_j  s.t.  gamma(C) <= c(C), gamma(K) >= c(K), gamma_i = v_i (i < j).
Rational lex_step(int n, int j, const std::vector<Coalition>& coalitions,
                  const std::vector<Rational>& by_mask, const Rational& grand,
                  const std::vector<Rational>& fixed) {
  LinearProgram lp;
  std::vector<std::vector<LpTerm>> rows(n);
  for (Coalition c : coalitions) {
    const int var = lp.add_variable("C" + std::to_string(c.mask()), by_mask[c.mask()]);
    for (int k : c.members()) rows[k].push_back({var, Rational(1)});
  }
  const int mu = lp.add_variable("grand", -grand);
  for (int k = 0; k < n; ++k) rows[k].push_back({mu, Rational(-1)});
  for (int i = 0; i < j; ++i) {
    const int nu = lp.add_variable("fix" + std::to_string(i), fixed[i], true);
    rows[i].push_back({nu, Rational(1)});
  }
  for (int k = 0; k < n; ++k) {
    lp.add_row("player" + std::to_string(k), std::move(rows[k]), Relation::kGreaterEqual,
               Rational(k == j ? 1 : 0), k);
  }
  const LpOutcome out = solve_lp(lp);
  if (out.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNotOptimal, "lexicographic core step did not reach an optimum");
  }
  return out.objective;
}

CoreResult core_over(int n, const std::vector<Coalition>& coalitions,
                     const std::vector<Rational>& by_mask, const Rational& grand,
                     const std::optional<Imputation>& candidate,
                     const std::function<bool(const Imputation&)>& accept) {
  CoreResult res;
  const LinearProgram lp = balanced_lp(n, coalitions, by_mask);
  const LpOutcome out = solve_lp(lp);
  if (out.objective < grand) {
    res.empty = true;
    for (std::size_t i = 0; i < coalitions.size(); ++i) {
      if (sgn(out.primal[i]) != 0) res.certificate.emplace_back(coalitions[i], out.primal[i]);
    }
    return res;
  }
  if (candidate && accept(*candidate)) {
    res.imputation = *candidate;
    return res;
  }
  std::vector<Rational> fixed;
  Rational used(0);
  for (int j = 0; j + 1 < n; ++j) {
    fixed.push_back(lex_step(n, j, coalitions, by_mask, grand, fixed));
    used += fixed.back();
  }
  fixed.push_back(grand - used);
  res.imputation = std::move(fixed);
  return res;
}

std::vector<Coalition> every_coalition(int n) { return coalitions_by_size(n); }

}  // namespace

namespace serial {

CoalitionCosts coalition_costs(const GameInstance& g, int max_players) {
  check_scale(g, max_players);
  const int n = g.num_players();
  std::vector<Rational> by_mask(std::size_t{1} << n);
  for (std::uint32_t mask = 1; mask < by_mask.size(); ++mask) {
    by_mask[mask] = optimum(g, Coalition(mask), max_players).cost;
  }
  return CoalitionCosts(n, std::move(by_mask));
}

}  // namespace serial

CoalitionCosts coalition_costs(const GameInstance& g, int max_players) {
  check_scale(g, max_players);
  const int n = g.num_players();
  const long total = 1L << n;
  std::vector<Rational> by_mask(total);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long mask = 1; mask < total; ++mask) {
    try {
      by_mask[mask] = optimum(g, Coalition(static_cast<std::uint32_t>(mask)), max_players).cost;
    } catch (...) {
#pragma omp critical(costshare_coalition_costs)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return CoalitionCosts(n, std::move(by_mask));
}

bool in_core(const CoalitionCosts& costs, const Imputation& imp) {
  const int n = costs.num_players();
  if (static_cast<int>(imp.size()) != n) {
    throw Error(ErrorCode::kUnknownLabel, "imputation size does not match the players");
  }
  for (const auto& v : imp) {
    if (sgn(v) < 0) return false;
  }
  if (share_of(imp, Coalition::all(n)) != costs.grand()) return false;
  for (std::uint32_t mask = 1; mask < costs.by_mask().size(); ++mask) {
    if (share_of(imp, Coalition(mask)) > costs[Coalition(mask)]) return false;
  }
  return true;
}

bool in_core(const GameInstance& g, const Imputation& imp, int max_players) {
  return in_core(coalition_costs(g, max_players), imp);
}

CoreResult find_core(const CoalitionCosts& costs, const std::optional<Imputation>& candidate) {
  const int n = costs.num_players();
  return core_over(n, every_coalition(n), costs.by_mask(), costs.grand(), candidate,
                   [&](const Imputation& imp) { return in_core(costs, imp); });
}

CoreResult find_core(const GameInstance& g, int max_players) {
  check_scale(g, max_players);
  const int n = g.num_players();

  // LP dual shares are the first candidate when the relaxation is tight.
  std::optional<Imputation> candidate;
  if (g.family != Family::kFractionalVc) {
    try {
      const LinearProgram lp = build_lp(g);
      const LpOutcome out = solve_lp(lp);
      if (out.status == LpStatus::kOptimal) candidate = dual_shares(lp, out, n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPathLimitExceeded) throw;
    }
  } else {
    const LinearProgram lp = build_lp(g);
    const LpOutcome out = solve_lp(lp);
    candidate = dual_shares(lp, out, n);
  }

  const bool small_components =
      g.family == Family::kTerminalBackup && g.network().requirement == 2;
  if (!small_components) return find_core(coalition_costs(g, max_players), candidate);

  // d = 2 terminal backup: optimal solutions decompose into components with
  // two or three players, so coalitions of size <= 3 carry every binding
  // constraint.
  std::vector<Coalition> coalitions;
  std::vector<Rational> by_mask(std::size_t{1} << n);
  for (Coalition c : every_coalition(n)) {
    if (c.size() <= 3 || c.size() == n) coalitions.push_back(c);
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < static_cast<long>(coalitions.size()); ++i) {
    try {
      by_mask[coalitions[i].mask()] = optimum(g, coalitions[i], max_players).cost;
    } catch (...) {
#pragma omp critical(costshare_find_core)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  const Rational grand = by_mask[Coalition::all(n).mask()];
  auto accept = [&](const Imputation& imp) {
    if (static_cast<int>(imp.size()) != n) return false;
    for (const auto& v : imp) {
      if (sgn(v) < 0) return false;
    }
    if (share_of(imp, Coalition::all(n)) != grand) return false;
    for (Coalition c : coalitions) {
      if (share_of(imp, c) > by_mask[c.mask()]) return false;
    }
    return true;
  };
  return core_over(n, coalitions, by_mask, grand, candidate, accept);
}

bool check_core_certificate(const CoalitionCosts& costs,
                            const std::vector<std::pair<Coalition, Rational>>& certificate) {
  const int n = costs.num_players();
  std::vector<Rational> cover(n, Rational(0));
  Rational weighted(0);
  for (const auto& [c, weight] : certificate) {
    if (sgn(weight) < 0 || c.empty()) return false;
    for (int k : c.members()) {
      if (k >= n) return false;
      cover[k] += weight;
    }
    weighted += weight * costs[c];
  }
  for (const auto& v : cover) {
    if (v < 1) return false;
  }
  return weighted < costs.grand();
}

}  // namespace costshare
