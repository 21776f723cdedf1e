#include "costshare/approx.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <optional>

#include "costshare/error.hpp"

namespace costshare {

namespace {

std::vector<int> players_by_label(const GameInstance& g) {
  std::vector<int> order(g.num_players());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.players[a] < g.players[b]; });
  return order;
}

// Covering primal-dual: each uncovered player, in label order, raises its
// payment equally on every resource that can serve it until one of them is
// fully paid. Afterwards payments on unpaid resources are withdrawn and
// bought resources that became redundant are dropped, latest first.
StrategyProfile covering_primal_dual(const GameInstance& g,
                                     const std::vector<std::vector<int>>& options) {
  const int m = g.num_resources();
  StrategyProfile s = StrategyProfile::zero(g);
  std::vector<Rational> residual(m);
  std::vector<int> tight_order;
  std::vector<char> tight(m, 0);
  for (int r = 0; r < m; ++r) {
    residual[r] = g.resources[r].cost;
    if (sgn(residual[r]) == 0) {
      tight[r] = 1;
      tight_order.push_back(r);
    }
  }
  for (int k : players_by_label(g)) {
    const auto& opts = options[k];
    if (std::any_of(opts.begin(), opts.end(), [&](int r) { return tight[r] != 0; })) continue;
    Rational delta = residual[opts.front()];
    for (int r : opts) delta = std::min(delta, residual[r]);
    for (int r : opts) {
      s.pay[k][r] += delta;
      residual[r] -= delta;
    }
    for (int r : opts) {
      if (sgn(residual[r]) == 0 && !tight[r]) {
        tight[r] = 1;
        tight_order.push_back(r);
      }
    }
  }

  auto withdraw = [&](int r) {
    for (auto& row : s.pay) row[r] = 0;
  };
  for (int r = 0; r < m; ++r) {
    if (!tight[r]) withdraw(r);
  }
  std::vector<char> chosen = tight;
  for (auto it = tight_order.rbegin(); it != tight_order.rend(); ++it) {
    const int r = *it;
    if (sgn(g.resources[r].cost) == 0) continue;
    chosen[r] = 0;
    if (feasible_binary(g, g.grand_coalition(), chosen)) {
      withdraw(r);
    } else {
      chosen[r] = 1;
    }
  }
  return s;
}

void check_scale(const GameInstance& g, int max_players) {
  if (g.num_players() > max_players) {
    throw Error(ErrorCode::kScaleExceeded, std::to_string(g.num_players()) +
                                               " players exceed the verification limit of " +
                                               std::to_string(max_players));
  }
}

struct Prepared {
  std::vector<PlayerCost> costs;
  bool ok = true;
};

// Everything except the coalition loop: satisfaction and the beta bound.
Prepared prepare(const GameInstance& g, const StrategyProfile& s, const ApproxParams& p,
                 int max_players) {
  check_scale(g, max_players);
  if (p.alpha < 1 || p.beta < 1) throw Error(ErrorCode::kValidationError, "alpha and beta must be at least 1");
  Prepared out;
  out.costs = player_costs(g, s);
  for (const auto& c : out.costs) out.ok = out.ok && !c.infeasible;
  if (!out.ok) return out;
  const Rational bought = purchase_cost(g, bought_set(g, s));
  const Rational best = optimum(g, g.grand_coalition(), max_players).cost;
  out.ok = bought <= p.beta * best;
  return out;
}

bool coalition_ok(const GameInstance& g, const StrategyProfile& s, const Prepared& prep,
                  const ApproxParams& p, Coalition c, int max_players) {
  Rational spend(0);
  for (int k : c.members()) spend += prep.costs[k].value;
  if (sgn(spend) == 0) return true;
  return reduced_optimum(g, c, s.outside(c), max_players) * p.alpha >= spend;
}

}  // namespace

StrategyProfile approx_se_vc(const GameInstance& g) {
  if (g.family != Family::kVertexCover) {
    throw Error(ErrorCode::kUnsupportedFamily, "approx_se_vc needs a VERTEX_COVER instance");
  }
  std::vector<std::vector<int>> options;
  for (const auto& [a, b] : g.vertex_cover().endpoints) options.push_back({a, b});
  return covering_primal_dual(g, options);
}

int max_frequency(const GameInstance& g) {
  std::vector<int> freq(g.num_players(), 0);
  for (const auto& members : g.set_cover().members) {
    for (int k : members) ++freq[k];
  }
  return freq.empty() ? 0 : *std::max_element(freq.begin(), freq.end());
}

StrategyProfile approx_se_sc(const GameInstance& g) {
  if (g.family != Family::kSetCover) {
    throw Error(ErrorCode::kUnsupportedFamily, "approx_se_sc needs a SET_COVER instance");
  }
  std::vector<std::vector<int>> options(g.num_players());
  const auto& members = g.set_cover().members;
  for (int r = 0; r < g.num_resources(); ++r) {
    for (int k : members[r]) options[k].push_back(r);
  }
  return covering_primal_dual(g, options);
}

StrategyProfile approx_se_ufl(const GameInstance& g) {
  if (g.family != Family::kUfl) {
    throw Error(ErrorCode::kUnsupportedFamily, "approx_se_ufl needs a UFL instance");
  }
  const auto& fac = g.facility();
  if (!fac.metric) throw Error(ErrorCode::kNotMetric, "instance is not flagged metric");
  const int n = g.num_players();
  const int nf = static_cast<int>(fac.facilities.size());
  auto conn_cost = [&](int t, int f) -> const Rational& {
    return g.resources[fac.connection[t][f]].cost;
  };
  auto open_cost = [&](int f) -> const Rational& { return g.resources[fac.opening[f]].cost; };

  // Phase 1: dual ascent. alpha_t grows with time until t reaches an open
  // facility; beta_tf = max(0, alpha_t - c(t,f)) pays towards f.
  std::vector<char> active(n, 1), open(nf, 0);
  std::vector<Rational> alpha(n, Rational(0));
  std::vector<int> open_order;
  Rational now(0);
  auto contribution = [&](int t, int f) {
    const Rational a = active[t] ? now : alpha[t];
    const Rational b = a - conn_cost(t, f);
    return sgn(b) > 0 ? b : Rational(0);
  };
  int remaining = n;
  while (remaining > 0) {
    // Settle every event at the current time, repeating until stable.
    for (bool changed = true; changed;) {
      changed = false;
      for (int f = 0; f < nf; ++f) {
        if (open[f]) continue;
        Rational sum(0);
        for (int t = 0; t < n; ++t) sum += contribution(t, f);
        if (sum >= open_cost(f)) {
          open[f] = 1;
          open_order.push_back(f);
          changed = true;
        }
      }
      for (int t = 0; t < n; ++t) {
        if (!active[t]) continue;
        for (int f = 0; f < nf; ++f) {
          if (open[f] && conn_cost(t, f) <= now) {
            active[t] = 0;
            alpha[t] = now;
            --remaining;
            changed = true;
            break;
          }
        }
      }
    }
    if (remaining == 0) break;

    std::optional<Rational> next;
    auto consider = [&](const Rational& when) {
      if (when > now && (!next || when < *next)) next = when;
    };
    for (int t = 0; t < n; ++t) {
      if (!active[t]) continue;
      for (int f = 0; f < nf; ++f) consider(conn_cost(t, f));
    }
    for (int f = 0; f < nf; ++f) {
      if (open[f]) continue;
      Rational sum(0);
      int rate = 0;
      for (int t = 0; t < n; ++t) {
        sum += contribution(t, f);
        if (active[t] && conn_cost(t, f) <= now) ++rate;
      }
      if (rate > 0) consider(now + (open_cost(f) - sum) / rate);
    }
    now = *next;
  }

  // Phase 2: keep a maximal set of open facilities, in opening order, no two
  // of which share a positively contributing terminal.
  std::vector<std::vector<Rational>> beta(n, std::vector<Rational>(nf));
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < nf; ++f) {
      const Rational b = alpha[t] - conn_cost(t, f);
      beta[t][f] = sgn(b) > 0 ? b : Rational(0);
    }
  }
  std::vector<int> chosen;
  for (int f : open_order) {
    bool conflict = false;
    for (int h : chosen) {
      for (int t = 0; t < n && !conflict; ++t) {
        conflict = sgn(beta[t][f]) > 0 && sgn(beta[t][h]) > 0;
      }
    }
    if (!conflict) {
      chosen.push_back(f);
    }
  }

  // Payments: a terminal contributing to a kept facility pays its connection
  // plus its contribution there; any other terminal pays the connection to
  // its nearest kept facility.
  StrategyProfile s = StrategyProfile::zero(g);
  for (int t = 0; t < n; ++t) {
    int direct = -1;
    for (int f : chosen) {
      if (sgn(beta[t][f]) > 0) direct = f;
    }
    if (direct >= 0) {
      s.pay[t][fac.connection[t][direct]] = conn_cost(t, direct);
      s.pay[t][fac.opening[direct]] = beta[t][direct];
      continue;
    }
    int nearest = -1;
    for (int f : chosen) {
      if (nearest < 0 || conn_cost(t, f) < conn_cost(t, nearest) ||
          (conn_cost(t, f) == conn_cost(t, nearest) && f < nearest)) {
        nearest = f;
      }
    }
    s.pay[t][fac.connection[t][nearest]] = conn_cost(t, nearest);
  }
  // Kept facilities are paid in full by their contributors; one that opened
  // for free needs nothing.
  return s;
}

namespace serial {

bool verify_alpha_beta(const GameInstance& g, const StrategyProfile& s, const ApproxParams& p,
                       int max_players) {
  const Prepared prep = prepare(g, s, p, max_players);
  if (!prep.ok) return false;
  for (Coalition c : coalitions_by_size(g.num_players())) {
    if (!coalition_ok(g, s, prep, p, c, max_players)) return false;
  }
  return true;
}

}  // namespace serial

bool verify_alpha_beta(const GameInstance& g, const StrategyProfile& s, const ApproxParams& p,
                       int max_players) {
  const Prepared prep = prepare(g, s, p, max_players);
  if (!prep.ok) return false;
  const auto order = coalitions_by_size(g.num_players());
  const long count = static_cast<long>(order.size());
  std::vector<char> good(count, 1);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      good[i] = coalition_ok(g, s, prep, p, order[i], max_players);
    } catch (...) {
#pragma omp critical(costshare_verify_ab)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return std::all_of(good.begin(), good.end(), [](char v) { return v != 0; });
}

}  // namespace costshare
