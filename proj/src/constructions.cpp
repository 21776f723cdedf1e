#include <algorithm>
#include <functional>
#include <numeric>

#include "costshare/equilibria.hpp"
#include "costshare/error.hpp"

namespace costshare {

namespace {

std::vector<char> chosen_of(const ResourceSet& rs) {
  std::vector<char> chosen(rs.level.size());
  for (std::size_t r = 0; r < rs.level.size(); ++r) chosen[r] = rs.level[r] >= 1;
  return chosen;
}

// Assignment of terminals to open facilities through bought connections with
// every facility's group allowed; -1 entries never occur on success.
std::optional<std::vector<int>> ccrfl_assignment(const GameInstance& g,
                                                 const std::vector<char>& chosen) {
  const auto& fac = g.facility();
  const int n = g.num_players();
  const int nf = static_cast<int>(fac.facilities.size());
  std::vector<std::uint32_t> group(nf, 0);
  std::vector<int> assign(n, -1);
  std::function<bool(int)> go = [&](int t) {
    if (t == n) return true;
    for (int f = 0; f < nf; ++f) {
      const int conn = fac.connection[t][f];
      if (conn < 0 || !chosen[conn] || !chosen[fac.opening[f]]) continue;
      const std::uint32_t next = group[f] | (1u << t);
      if (!std::binary_search(fac.allowed[f].begin(), fac.allowed[f].end(), next)) continue;
      const std::uint32_t saved = group[f];
      group[f] = next;
      assign[t] = f;
      if (go(t + 1)) return true;
      group[f] = saved;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return assign;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Lays `amount` along `edges` in order, topping each edge up to its cost.
// Returns what could not be placed.
Rational lay_payment(const GameInstance& g, StrategyProfile& s, std::vector<Rational>& paid,
                     int player, const std::vector<int>& edges, Rational amount) {
  for (int e : edges) {
    if (sgn(amount) <= 0) break;
    Rational room = g.resources[e].cost - paid[e];
    if (sgn(room) <= 0) continue;
    const Rational take = amount < room ? amount : room;
    s.pay[player][e] += take;
    paid[e] += take;
    amount -= take;
  }
  return amount;
}

}  // namespace

LpConstruction construct_se_from_lp(const GameInstance& g, int max_players) {
  switch (g.family) {
    case Family::kFractionalVc:
    case Family::kNonbinaryVc:
    case Family::kTerminalBackup:
      throw Error(ErrorCode::kUnsupportedFamily,
                  std::string(family_name(g.family)) + " has no LP construction");
    default:
      break;
  }
  const int n = g.num_players();
  const int m = g.num_resources();
  const LinearProgram lp = build_lp(g);
  const LpOutcome out = solve_lp(lp);
  const Optimum opt = optimum(g, g.grand_coalition(), max_players);

  LpConstruction res;
  res.lp_value = out.objective;
  res.integral_value = opt.cost;
  res.profile = StrategyProfile::zero(g);
  if (out.status != LpStatus::kOptimal || out.objective != opt.cost) return res;
  res.integral = true;

  const std::vector<char> chosen = chosen_of(opt.set);
  StrategyProfile& s = res.profile;

  if (g.family == Family::kCcrfl) {
    // The integral solution picks one (facility, group) column per open
    // facility; member t pays its connection and gamma_t - c(t,f) towards f.
    const auto shares = dual_shares(lp, out, n);
    const auto assign = ccrfl_assignment(g, chosen);
    if (!assign) throw Error(ErrorCode::kNotOptimal, "optimum admits no allowed assignment");
    const auto& fac = g.facility();
    for (int t = 0; t < n; ++t) {
      const int f = (*assign)[t];
      const Rational& conn_cost = g.resources[fac.connection[t][f]].cost;
      const Rational& open_cost = g.resources[fac.opening[f]].cost;
      s.pay[t][fac.connection[t][f]] = shares[t] < conn_cost ? shares[t] : conn_cost;
      Rational rest = shares[t] - conn_cost;
      if (rest > open_cost) rest = open_cost;
      if (sgn(rest) < 0) rest = 0;
      s.pay[t][fac.opening[f]] = rest;
    }
  } else {
    // Every other family: player k pays sum over its rows i of
    // dual_i * a_ir * x_r on each resource variable r. This is
    // gamma_e x_S for covering rows, (gamma_t - delta_tf) x_tf and
    // delta_tf y_f for facility rows, and y_e * sum of arc duals for flows.
    for (int i = 0; i < lp.num_rows(); ++i) {
      const LpRow& row = lp.rows()[i];
      if (row.owner < 0 || sgn(out.dual[i]) == 0) continue;
      for (const LpTerm& term : row.terms) {
        if (term.variable < m && chosen[term.variable]) {
          s.pay[row.owner][term.variable] += out.dual[i] * term.coefficient;
        }
      }
    }
  }

  // Complementary slackness makes every bought resource exactly paid.
  for (int r = 0; r < m; ++r) {
    const Rational expect = chosen[r] ? g.resources[r].cost : Rational(0);
    if (s.resource_total(r) != expect) {
      throw Error(ErrorCode::kNotOptimal,
                  "payments on '" + g.resources[r].label + "' do not match its cost");
    }
    for (int k = 0; k < n; ++k) {
      if (sgn(s.pay[k][r]) < 0) throw Error(ErrorCode::kNotOptimal, "negative payment");
    }
  }
  return res;
}

bool is_mst_game(const GameInstance& g) {
  if (g.family != Family::kConnection) return false;
  const auto& net = g.network();
  if (net.directed || net.source.empty()) return false;
  const int root = net.source.front();
  std::vector<char> is_sink(net.vertices.size(), 0);
  for (int k = 0; k < g.num_players(); ++k) {
    if (net.source[k] != root) return false;
    is_sink[net.sink[k]] = 1;
  }
  for (int v = 0; v < static_cast<int>(net.vertices.size()); ++v) {
    if (v != root && !is_sink[v]) return false;
  }
  return true;
}

StrategyProfile bird_allocation(const GameInstance& g) {
  if (!is_mst_game(g)) {
    throw Error(ErrorCode::kNotMstGame,
                "need an undirected single-source game where every other vertex is a sink");
  }
  const auto& net = g.network();
  const int nv = static_cast<int>(net.vertices.size());
  std::vector<int> order(g.num_resources());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.resources[a].cost != g.resources[b].cost) return g.resources[a].cost < g.resources[b].cost;
    return g.resources[a].label < g.resources[b].label;
  });
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<std::pair<int, int>>> tree(nv);
  for (int e : order) {
    const auto [a, b] = net.edges[e];
    const int ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra == rb) continue;
    parent[ra] = rb;
    tree[a].emplace_back(b, e);
    tree[b].emplace_back(a, e);
  }

  // Orient the tree from the source; each vertex's edge towards the source.
  std::vector<int> up_edge(nv, -1);
  std::vector<char> seen(nv, 0);
  std::vector<int> stack{net.source.front()};
  seen[net.source.front()] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& [v, e] : tree[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      up_edge[v] = e;
      stack.push_back(v);
    }
  }

  StrategyProfile s = StrategyProfile::zero(g);
  std::vector<char> covered(nv, 0);
  for (int k = 0; k < g.num_players(); ++k) {
    const int v = net.sink[k];
    if (covered[v]) continue;
    covered[v] = 1;
    s.pay[k][up_edge[v]] = g.resources[up_edge[v]].cost;
  }
  return s;
}

StrategyProfile tb2_allocation(const GameInstance& g, const Imputation& imp, int max_players) {
  if (g.family != Family::kTerminalBackup || g.network().requirement != 2) {
    throw Error(ErrorCode::kUnsupportedFamily, "tb2_allocation needs TERMINAL_BACKUP with d = 2");
  }
  if (!in_core(g, imp, max_players)) {
    throw Error(ErrorCode::kCoreRequired, "imputation is not in the core");
  }
  const auto& net = g.network();
  const int nv = static_cast<int>(net.vertices.size());
  const int m = g.num_resources();
  const std::vector<char> chosen = chosen_of(optimum(g, g.grand_coalition(), max_players).set);

  std::vector<int> player_at(nv, -1);
  for (int k = 0; k < g.num_players(); ++k) player_at[net.terminal[k]] = k;

  // Spanning forest of the optimum, positive-cost edges first.
  std::vector<char> in_forest(m, 0);
  {
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int e = 0; e < m; ++e) {
        if (!chosen[e] || (sgn(g.resources[e].cost) > 0) != (pass == 0)) continue;
        const int a = find_root(parent, net.edges[e].first);
        const int b = find_root(parent, net.edges[e].second);
        if (a == b) continue;
        parent[a] = b;
        in_forest[e] = 1;
      }
    }
  }

  auto neighbours = [&](int u) {
    std::vector<std::pair<int, int>> out;
    for (int e = 0; e < m; ++e) {
      if (!in_forest[e]) continue;
      if (net.edges[e].first == u) out.emplace_back(net.edges[e].second, e);
      if (net.edges[e].second == u) out.emplace_back(net.edges[e].first, e);
    }
    return out;
  };
  // Players reachable from `start` without crossing `blocked`.
  auto side_players = [&](int start, int blocked) {
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{start}, found;
    seen[start] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (player_at[u] >= 0) found.push_back(u);
      for (const auto& [v, e] : neighbours(u)) {
        if (e == blocked || seen[v]) continue;
        seen[v] = 1;
        stack.push_back(v);
      }
    }
    return found;
  };

  // Prune non-player leaves and split at free edges with two or more players
  // on both sides, until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < nv; ++v) {
      if (player_at[v] < 0) {
        auto nb = neighbours(v);
        if (nb.size() == 1) {
          in_forest[nb.front().second] = 0;
          changed = true;
        }
      }
    }
    for (int e = 0; e < m && !changed; ++e) {
      if (!in_forest[e] || sgn(g.resources[e].cost) != 0) continue;
      if (side_players(net.edges[e].first, e).size() >= 2 &&
          side_players(net.edges[e].second, e).size() >= 2) {
        in_forest[e] = 0;
        changed = true;
      }
    }
  }

  StrategyProfile s = StrategyProfile::zero(g);
  std::vector<Rational> paid(m, Rational(0));
  std::vector<char> done(nv, 0);
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kCoreRequired, "cannot lay the core shares: " + what);
  };

  for (int k = 0; k < g.num_players(); ++k) {
    if (done[net.terminal[k]]) continue;
    // Vertices of k's component.
    std::vector<int> comp;
    {
      std::vector<int> stack{net.terminal[k]};
      done[net.terminal[k]] = 1;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        comp.push_back(u);
        for (const auto& [v, e] : neighbours(u)) {
          if (!done[v]) {
            done[v] = 1;
            stack.push_back(v);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());

    // Center: every branch around it holds at most one player.
    int center = -1;
    for (int v : comp) {
      bool ok = true;
      for (const auto& [w, e] : neighbours(v)) ok = ok && side_players(w, e).size() <= 1;
      if (ok) {
        center = v;
        break;
      }
    }
    if (center < 0) fail("component is not a spider");

    // Legs as edge lists from the player towards the center.
    struct Leg {
      int player;
      std::vector<int> edges;
    };
    std::vector<Leg> legs;
    if (player_at[center] >= 0) legs.push_back({player_at[center], {}});
    for (const auto& [w, e] : neighbours(center)) {
      std::vector<int> path{e};
      int prev = center, cur = w;
      while (player_at[cur] < 0) {
        auto nb = neighbours(cur);
        int next = -1, via = -1;
        for (const auto& [x, f] : nb) {
          if (x != prev) {
            next = x;
            via = f;
          }
        }
        if (next < 0 || nb.size() != 2) fail("leg does not end at a player");
        path.push_back(via);
        prev = cur;
        cur = next;
      }
      std::reverse(path.begin(), path.end());
      legs.push_back({player_at[cur], std::move(path)});
    }
    std::sort(legs.begin(), legs.end(),
              [](const Leg& a, const Leg& b) { return a.player < b.player; });
    if (legs.size() < 2) fail("component with a single player");

    std::size_t i = 0;
    const std::size_t pairs_end = legs.size() % 2 == 0 ? legs.size() : legs.size() - 3;
    for (; i < pairs_end; i += 2) {
      const Leg& a = legs[i];
      const Leg& b = legs[i + 1];
      std::vector<int> from_a = a.edges;
      from_a.insert(from_a.end(), b.edges.rbegin(), b.edges.rend());
      std::vector<int> from_b(from_a.rbegin(), from_a.rend());
      Rational left = lay_payment(g, s, paid, a.player, from_a, imp[a.player]);
      left += lay_payment(g, s, paid, b.player, from_b, imp[b.player]);
      if (sgn(left) != 0) fail("pair shares exceed their path");
    }
    for (; i < legs.size(); ++i) {
      const Leg& a = legs[i];
      if (sgn(lay_payment(g, s, paid, a.player, a.edges, imp[a.player])) != 0) {
        fail("star share exceeds its leg");
      }
    }
  }
  for (int e = 0; e < m; ++e) {
    if (in_forest[e] && paid[e] != g.resources[e].cost) fail("edge left partly unpaid");
  }
  return s;
}

bool is_multiway_star(const GameInstance& g) {
  if (g.family != Family::kCutting) return false;
  const auto& net = g.network();
  if (net.directed || g.num_resources() == 0) return false;
  const int nv = static_cast<int>(net.vertices.size());
  std::vector<int> degree(nv, 0);
  for (const auto& [a, b] : net.edges) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<int> leaf(g.num_players());
  for (int k = 0; k < g.num_players(); ++k) {
    if (net.cut_sources[k].size() != 1) return false;
    leaf[k] = net.cut_sources[k].front();
    if (degree[leaf[k]] != 1) return false;
  }
  for (int k = 0; k < g.num_players(); ++k) {
    std::vector<int> others;
    for (int j = 0; j < g.num_players(); ++j) {
      if (j != k) others.push_back(leaf[j]);
    }
    std::sort(others.begin(), others.end());
    if (others != net.cut_targets[k]) return false;
  }
  // Every edge hangs off one common center that is not a player leaf.
  for (int c : {net.edges.front().first, net.edges.front().second}) {
    if (degree[c] == 1 && g.num_resources() > 1) continue;
    bool star = true;
    for (const auto& [a, b] : net.edges) {
      const int other = a == c ? b : (b == c ? a : -1);
      star = star && other >= 0 && other != c && degree[other] == 1;
    }
    if (star && std::find(leaf.begin(), leaf.end(), c) == leaf.end()) return true;
  }
  return false;
}

StrategyProfile multiwaycut_star_se(const GameInstance& g, int uncut) {
  if (!is_multiway_star(g)) throw Error(ErrorCode::kNotStar, "instance is not a multiway-cut star");
  if (uncut < 0 || uncut >= g.num_players()) {
    throw Error(ErrorCode::kUnknownLabel, "uncut player out of range");
  }
  const auto& net = g.network();
  StrategyProfile s = StrategyProfile::zero(g);
  for (int k = 0; k < g.num_players(); ++k) {
    if (k == uncut) continue;
    const int leaf = net.cut_sources[k].front();
    for (int e = 0; e < g.num_resources(); ++e) {
      if (net.edges[e].first == leaf || net.edges[e].second == leaf) {
        s.pay[k][e] = g.resources[e].cost;
      }
    }
  }
  return s;
}

SeDecision decide_se_class(const GameInstance& g, int max_players) {
  SeDecision d;
  d.method = DecisionMethod::kClassRule;
  auto from_lp = [&](const char* fail_detail, Verdict on_fail) {
    const LpConstruction c = construct_se_from_lp(g, max_players);
    if (c.integral) {
      d.verdict = Verdict::kExists;
      d.witness = c.profile;
      d.detail = "integrality gap 1; profile from optimal primal/dual pair";
    } else {
      d.verdict = on_fail;
      d.detail = std::string(fail_detail) + " (integral " + to_string(c.integral_value) +
                 ", relaxation " + to_string(c.lp_value) + ")";
    }
  };
  auto core_empty = [&]() {
    const CoreResult core = find_core(g, max_players);
    if (!core.empty) return false;
    d.verdict = Verdict::kNone;
    d.method = DecisionMethod::kCoreEmpty;
    d.detail = "core is empty";
    return true;
  };

  switch (g.family) {
    case Family::kVertexCover: {
      const auto& res = g.resources;
      const bool uniform = std::all_of(res.begin(), res.end(),
                                       [&](const Resource& r) { return r.cost == res.front().cost; });
      if (uniform && !koenig_condition(g, max_players)) {
        d.verdict = Verdict::kNone;
        d.detail = "maximum matching is smaller than the minimum vertex cover";
        return d;
      }
      from_lp("integrality gap above 1", Verdict::kNone);
      return d;
    }
    case Family::kEdgeCover:
    case Family::kSetCover:
    case Family::kUfl:
    case Family::kCcrfl:
      from_lp("integrality gap above 1", Verdict::kNone);
      return d;
    case Family::kConnection:
      if (is_mst_game(g)) {
        d.verdict = Verdict::kExists;
        d.witness = bird_allocation(g);
        d.detail = "MST game; Bird allocation";
        return d;
      }
      from_lp("no class rule applies", Verdict::kUnknown);
      if (d.verdict == Verdict::kUnknown) core_empty();
      return d;
    case Family::kCutting:
      if (is_multiway_star(g)) {
        d.verdict = Verdict::kExists;
        d.witness = multiwaycut_star_se(g, 0);
        d.detail = "multiway-cut star; first player uncut";
        return d;
      }
      from_lp("no class rule applies", Verdict::kUnknown);
      if (d.verdict == Verdict::kUnknown) core_empty();
      return d;
    case Family::kTerminalBackup: {
      if (g.network().requirement != 2) {
        if (!core_empty()) {
          d.verdict = Verdict::kUnknown;
          d.detail = "no class rule for d > 2";
        }
        return d;
      }
      const CoreResult core = find_core(g, max_players);
      if (core.empty) {
        d.verdict = Verdict::kNone;
        d.method = DecisionMethod::kCoreEmpty;
        d.detail = "core is empty";
        return d;
      }
      d.verdict = Verdict::kExists;
      d.witness = tb2_allocation(g, core.imputation, max_players);
      d.detail = "d = 2; core shares laid along optimal components";
      return d;
    }
    case Family::kFractionalVc:
    case Family::kNonbinaryVc:
      if (!core_empty()) {
        d.verdict = Verdict::kUnknown;
        d.detail = "no class rule; use the exact search";
      }
      return d;
  }
  return d;
}

}  // namespace costshare
