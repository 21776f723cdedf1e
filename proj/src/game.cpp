#include "costshare/game.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_set>

#include "costshare/error.hpp"

namespace costshare {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 10> kFamilyNames = {{
    {Family::kSetCover, "SET_COVER"},
    {Family::kVertexCover, "VERTEX_COVER"},
    {Family::kEdgeCover, "EDGE_COVER"},
    {Family::kUfl, "UFL"},
    {Family::kCcrfl, "CCRFL"},
    {Family::kConnection, "CONNECTION"},
    {Family::kCutting, "CUTTING"},
    {Family::kTerminalBackup, "TERMINAL_BACKUP"},
    {Family::kFractionalVc, "FRACTIONAL_VC"},
    {Family::kNonbinaryVc, "NONBINARY_VC"},
}};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kValidationError, what); }

// Adjacency of a network restricted to a resource mask. `use_edge` decides
// whether edge r is traversable.
template <class UseEdge>
std::vector<char> reachable(const NetworkPayload& net, const std::vector<int>& starts,
                            UseEdge use_edge) {
  const int nv = static_cast<int>(net.vertices.size());
  std::vector<char> seen(nv, 0);
  std::vector<int> stack;
  for (int s : starts) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int r = 0; r < static_cast<int>(net.edges.size()); ++r) {
      if (!use_edge(r)) continue;
      const auto [a, b] = net.edges[r];
      int next = -1;
      if (a == u) {
        next = b;
      } else if (!net.directed && b == u) {
        next = a;
      }
      if (next >= 0 && !seen[next]) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Members pick a facility among `available` purchases; a facility's group is
// everyone with a connection in `fixed` plus the members assigned to it.
bool ccrfl_assignable(const GameInstance& g, const std::vector<int>& members,
                      const std::vector<char>& fixed, const std::vector<char>& chosen) {
  const auto& fac = g.facility();
  const int nf = static_cast<int>(fac.facilities.size());
  std::vector<std::uint32_t> group(nf, 0);
  for (int t = 0; t < g.num_players(); ++t) {
    for (int f = 0; f < nf; ++f) {
      const int conn = fac.connection[t][f];
      if (conn >= 0 && fixed[conn]) group[f] |= 1u << t;
    }
  }
  auto allowed = [&](int f, std::uint32_t mask) {
    return std::binary_search(fac.allowed[f].begin(), fac.allowed[f].end(), mask);
  };
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == members.size()) return true;
    const int t = members[i];
    for (int f = 0; f < nf; ++f) {
      const int conn = fac.connection[t][f];
      if (conn < 0 || !chosen[conn] || !chosen[fac.opening[f]]) continue;
      const std::uint32_t next = group[f] | (1u << t);
      if (!allowed(f, next)) continue;
      const std::uint32_t saved = group[f];
      group[f] = next;
      if (assign(i + 1)) return true;
      group[f] = saved;
    }
    return false;
  };
  return assign(0);
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [family, name] : kFamilyNames) {
    if (family == f) return name;
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, n] : kFamilyNames) {
    if (n == name) return family;
  }
  return std::nullopt;
}

int GameInstance::player_index(const std::string& label) const {
  for (int k = 0; k < num_players(); ++k) {
    if (players[k] == label) return k;
  }
  throw Error(ErrorCode::kUnknownLabel, "unknown player '" + label + "'");
}

int GameInstance::resource_index(const std::string& label) const {
  for (int r = 0; r < num_resources(); ++r) {
    if (resources[r].label == label) return r;
  }
  throw Error(ErrorCode::kUnknownLabel, "unknown resource '" + label + "'");
}

std::vector<Coalition> coalitions_by_size(int num_players) {
  std::vector<Coalition> out;
  out.reserve((std::size_t{1} << num_players) - 1);
  std::vector<int> comb;
  for (int size = 1; size <= num_players; ++size) {
    comb.resize(size);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      std::uint32_t mask = 0;
      for (int k : comb) mask |= 1u << k;
      out.emplace_back(mask);
      int i = size - 1;
      while (i >= 0 && comb[i] == num_players - size + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

ResourceSet ResourceSet::empty(const GameInstance& g) {
  ResourceSet rs;
  rs.level.assign(g.num_resources(), Rational(0));
  rs.unbounded.assign(g.num_resources(), false);
  return rs;
}

ResourceSet ResourceSet::full(const GameInstance& g) {
  ResourceSet rs = empty(g);
  int units = 1;
  if (g.family == Family::kNonbinaryVc) {
    const auto& req = g.vertex_cover().requirement;
    units = *std::max_element(req.begin(), req.end());
  }
  for (auto& l : rs.level) l = units;
  return rs;
}

ResourceSet ResourceSet::of(const GameInstance& g, const std::vector<int>& resources) {
  ResourceSet rs = empty(g);
  for (int r : resources) rs.level[r] = 1;
  return rs;
}

bool feasible_binary(const GameInstance& g, Coalition c, const std::vector<char>& chosen) {
  switch (g.family) {
    case Family::kSetCover: {
      std::uint32_t covered = 0;
      const auto& members = g.set_cover().members;
      for (int r = 0; r < g.num_resources(); ++r) {
        if (!chosen[r]) continue;
        for (int k : members[r]) covered |= 1u << k;
      }
      return (c.mask() & ~covered) == 0;
    }
    case Family::kVertexCover: {
      const auto& ends = g.vertex_cover().endpoints;
      for (int k : c.members()) {
        if (!chosen[ends[k].first] && !chosen[ends[k].second]) return false;
      }
      return true;
    }
    case Family::kEdgeCover: {
      std::uint32_t covered = 0;
      const auto& ends = g.edge_cover().endpoints;
      for (int r = 0; r < g.num_resources(); ++r) {
        if (chosen[r]) covered |= (1u << ends[r].first) | (1u << ends[r].second);
      }
      return (c.mask() & ~covered) == 0;
    }
    case Family::kUfl: {
      const auto& fac = g.facility();
      for (int t : c.members()) {
        bool ok = false;
        for (std::size_t f = 0; f < fac.facilities.size() && !ok; ++f) {
          const int conn = fac.connection[t][f];
          ok = conn >= 0 && chosen[conn] && chosen[fac.opening[f]];
        }
        if (!ok) return false;
      }
      return true;
    }
    case Family::kCcrfl:
      return ccrfl_assignable(g, c.members(), chosen, chosen);
    case Family::kConnection: {
      const auto& net = g.network();
      for (int k : c.members()) {
        const auto seen = reachable(net, {net.source[k]}, [&](int r) { return chosen[r] != 0; });
        if (!seen[net.sink[k]]) return false;
      }
      return true;
    }
    case Family::kCutting: {
      const auto& net = g.network();
      for (int k : c.members()) {
        const auto seen =
            reachable(net, net.cut_sources[k], [&](int r) { return chosen[r] == 0; });
        for (int t : net.cut_targets[k]) {
          if (seen[t]) return false;
        }
      }
      return true;
    }
    case Family::kTerminalBackup: {
      const auto& net = g.network();
      const int nv = static_cast<int>(net.vertices.size());
      std::vector<int> parent(nv);
      std::iota(parent.begin(), parent.end(), 0);
      for (int r = 0; r < g.num_resources(); ++r) {
        if (!chosen[r]) continue;
        const int a = find_root(parent, net.edges[r].first);
        const int b = find_root(parent, net.edges[r].second);
        if (a != b) parent[a] = b;
      }
      std::vector<int> players_in(nv, 0);
      for (int v : net.terminal) ++players_in[find_root(parent, v)];
      for (int k : c.members()) {
        if (players_in[find_root(parent, net.terminal[k])] - 1 < net.requirement - 1) return false;
      }
      return true;
    }
    case Family::kFractionalVc:
    case Family::kNonbinaryVc:
      break;
  }
  throw Error(ErrorCode::kUnsupportedFamily, "feasible_binary on a non-binary family");
}

bool completable(const GameInstance& g, Coalition c, const std::vector<char>& fixed,
                 const std::vector<char>& available) {
  if (g.family == Family::kCcrfl) return ccrfl_assignable(g, c.members(), fixed, available);
  return feasible_binary(g, c, available);
}

bool feasible_units(const GameInstance& g, Coalition c, const std::vector<long>& units,
                    const std::vector<bool>& unbounded) {
  const auto& vc = g.vertex_cover();
  for (int k : c.members()) {
    const auto [a, b] = vc.endpoints[k];
    if (unbounded[a] || unbounded[b]) continue;
    if (units[a] + units[b] < vc.requirement[k]) return false;
  }
  return true;
}

bool feasible(const GameInstance& g, Coalition c, const ResourceSet& rs) {
  if (static_cast<int>(rs.level.size()) != g.num_resources() ||
      static_cast<int>(rs.unbounded.size()) != g.num_resources()) {
    throw Error(ErrorCode::kUnknownLabel, "resource set does not match the instance");
  }
  if ((c.mask() & ~g.grand_coalition().mask()) != 0) {
    throw Error(ErrorCode::kUnknownLabel, "coalition references unknown players");
  }
  if (g.family == Family::kFractionalVc) {
    const auto& vc = g.vertex_cover();
    for (int k : c.members()) {
      const auto [a, b] = vc.endpoints[k];
      if (rs.unbounded[a] || rs.unbounded[b]) continue;
      if (rs.level[a] + rs.level[b] < 1) return false;
    }
    return true;
  }
  if (g.family == Family::kNonbinaryVc) {
    std::vector<long> units(g.num_resources());
    for (int r = 0; r < g.num_resources(); ++r) units[r] = floor_of(rs.level[r]).get_si();
    return feasible_units(g, c, units, rs.unbounded);
  }
  std::vector<char> chosen(g.num_resources());
  for (int r = 0; r < g.num_resources(); ++r) {
    chosen[r] = rs.unbounded[r] || rs.level[r] >= 1 || sgn(g.resources[r].cost) == 0;
  }
  return feasible_binary(g, c, chosen);
}

void validate(const GameInstance& g) {
  if (g.players.empty()) invalid("instance has no players");
  if (g.num_players() > 31) invalid("at most 31 players are supported");
  {
    std::unordered_set<std::string> seen;
    for (const auto& p : g.players) {
      if (!seen.insert(p).second) invalid("duplicate player label '" + p + "'");
    }
    seen.clear();
    for (const auto& r : g.resources) {
      if (!seen.insert(r.label).second) invalid("duplicate resource label '" + r.label + "'");
      if (sgn(r.cost) < 0) invalid("negative cost on resource '" + r.label + "'");
    }
  }
  const int n = g.num_players();
  const int m = g.num_resources();
  auto check_player = [&](int k) {
    if (k < 0 || k >= n) invalid("player index out of range");
  };
  auto check_resource = [&](int r) {
    if (r < 0 || r >= m) invalid("resource index out of range");
  };

  switch (g.family) {
    case Family::kSetCover: {
      const auto& sc = g.set_cover();
      if (static_cast<int>(sc.members.size()) != m) invalid("set membership size mismatch");
      for (const auto& mem : sc.members) {
        for (int k : mem) check_player(k);
      }
      break;
    }
    case Family::kVertexCover:
    case Family::kFractionalVc:
    case Family::kNonbinaryVc: {
      const auto& vc = g.vertex_cover();
      if (static_cast<int>(vc.endpoints.size()) != n || static_cast<int>(vc.requirement.size()) != n)
        invalid("edge list size mismatch");
      std::set<std::pair<int, int>> seen;
      for (int k = 0; k < n; ++k) {
        auto [a, b] = vc.endpoints[k];
        check_resource(a);
        check_resource(b);
        if (a == b) invalid("graph not simple: self loop on edge '" + g.players[k] + "'");
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
          invalid("graph not simple: parallel edge '" + g.players[k] + "'");
        if (vc.requirement[k] < 1) invalid("requirement b_k must be >= 1");
      }
      break;
    }
    case Family::kEdgeCover: {
      const auto& ec = g.edge_cover();
      if (static_cast<int>(ec.endpoints.size()) != m) invalid("edge list size mismatch");
      for (const auto& [a, b] : ec.endpoints) {
        check_player(a);
        check_player(b);
        if (a == b) invalid("self loop in edge cover graph");
      }
      break;
    }
    case Family::kUfl:
    case Family::kCcrfl: {
      const auto& fac = g.facility();
      const int nf = static_cast<int>(fac.facilities.size());
      if (static_cast<int>(fac.opening.size()) != nf) invalid("facility size mismatch");
      if (static_cast<int>(fac.connection.size()) != n) invalid("connection table size mismatch");
      for (int f : fac.opening) check_resource(f);
      for (const auto& row : fac.connection) {
        if (static_cast<int>(row.size()) != nf) invalid("connection table size mismatch");
        for (int r : row) {
          if (r >= 0) check_resource(r);
        }
      }
      if (fac.metric) {
        for (int t = 0; t < n; ++t) {
          for (int f = 0; f < nf; ++f) {
            if (fac.connection[t][f] < 0) invalid("metric instance must have all connections");
          }
        }
        auto cost = [&](int t, int f) { return g.resources[fac.connection[t][f]].cost; };
        for (int t = 0; t < n; ++t)
          for (int f = 0; f < nf; ++f)
            for (int t2 = 0; t2 < n; ++t2)
              for (int f2 = 0; f2 < nf; ++f2)
                if (cost(t, f) > cost(t, f2) + cost(t2, f2) + cost(t2, f))
                  invalid("metric flag set but triangle inequality fails at (" + g.players[t] +
                          "," + fac.facilities[f] + ")");
      }
      if (g.family == Family::kCcrfl) {
        if (static_cast<int>(fac.allowed.size()) != nf) invalid("allowed family size mismatch");
        for (int f = 0; f < nf; ++f) {
          const auto& fam = fac.allowed[f];
          if (!std::is_sorted(fam.begin(), fam.end())) invalid("allowed family not sorted");
          if (fam.empty() || fam.front() != 0)
            invalid("allowed family of '" + fac.facilities[f] + "' lacks the empty set");
          for (std::uint32_t a : fam) {
            if ((a & ~g.grand_coalition().mask()) != 0) invalid("allowed set names unknown terminal");
            for (std::uint32_t bits = a; bits != 0; bits &= bits - 1) {
              const std::uint32_t sub = a & ~(bits & -bits);
              if (!std::binary_search(fam.begin(), fam.end(), sub))
                invalid("allowed family of '" + fac.facilities[f] + "' is not downward closed");
            }
          }
        }
      }
      break;
    }
    case Family::kConnection:
    case Family::kCutting:
    case Family::kTerminalBackup: {
      const auto& net = g.network();
      const int nv = static_cast<int>(net.vertices.size());
      std::unordered_set<std::string> seen(net.vertices.begin(), net.vertices.end());
      if (static_cast<int>(seen.size()) != nv) invalid("duplicate vertex label");
      if (static_cast<int>(net.edges.size()) != m) invalid("edge list size mismatch");
      auto check_vertex = [&](int v) {
        if (v < 0 || v >= nv) invalid("edge endpoint does not exist");
      };
      for (const auto& [a, b] : net.edges) {
        check_vertex(a);
        check_vertex(b);
      }
      if (g.family == Family::kConnection) {
        if (static_cast<int>(net.source.size()) != n || static_cast<int>(net.sink.size()) != n)
          invalid("connection pairs size mismatch");
        for (int k = 0; k < n; ++k) {
          check_vertex(net.source[k]);
          check_vertex(net.sink[k]);
          if (net.source[k] == net.sink[k]) invalid("player '" + g.players[k] + "' has s_k == t_k");
        }
      } else if (g.family == Family::kCutting) {
        if (static_cast<int>(net.cut_sources.size()) != n ||
            static_cast<int>(net.cut_targets.size()) != n)
          invalid("cut sets size mismatch");
        for (int k = 0; k < n; ++k) {
          if (net.cut_sources[k].empty() || net.cut_targets[k].empty())
            invalid("player '" + g.players[k] + "' needs nonempty S_k and T_k");
          for (int v : net.cut_sources[k]) check_vertex(v);
          for (int v : net.cut_targets[k]) {
            check_vertex(v);
            if (std::binary_search(net.cut_sources[k].begin(), net.cut_sources[k].end(), v))
              invalid("S_k and T_k intersect for player '" + g.players[k] + "'");
          }
        }
      } else {
        if (static_cast<int>(net.terminal.size()) != n) invalid("terminal list size mismatch");
        if (net.directed) invalid("terminal backup games are undirected");
        if (net.requirement < 2) invalid("terminal backup requirement d must be >= 2");
        std::unordered_set<int> used;
        for (int v : net.terminal) {
          check_vertex(v);
          if (!used.insert(v).second) invalid("terminal backup players must be distinct vertices");
        }
      }
      break;
    }
  }

  if (g.family == Family::kCcrfl) {
    // Capacities can make players individually servable but not all at once.
    std::vector<char> free(m, 0), all(m, 1);
    for (int r = 0; r < m; ++r) free[r] = sgn(g.resources[r].cost) == 0;
    if (!completable(g, g.grand_coalition(), free, all))
      invalid("players cannot be served simultaneously (instance unsolvable)");
    return;
  }
  const ResourceSet all = ResourceSet::full(g);
  for (int k = 0; k < n; ++k) {
    if (!feasible(g, Coalition::single(k), all))
      invalid("player '" + g.players[k] + "' cannot be satisfied (instance unsolvable)");
  }
}

std::vector<std::vector<int>> enumerate_paths(const GameInstance& g, int player, std::size_t cap) {
  if (g.family != Family::kCutting) {
    throw Error(ErrorCode::kUnsupportedFamily, "enumerate_paths needs a CUTTING instance");
  }
  const auto& net = g.network();
  const int nv = static_cast<int>(net.vertices.size());
  // (neighbour, edge) lists ordered by neighbour label, then edge index.
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (int r = 0; r < g.num_resources(); ++r) {
    const auto [a, b] = net.edges[r];
    adj[a].emplace_back(b, r);
    if (!net.directed) adj[b].emplace_back(a, r);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(), [&](const auto& x, const auto& y) {
      if (net.vertices[x.first] != net.vertices[y.first])
        return net.vertices[x.first] < net.vertices[y.first];
      return x.second < y.second;
    });
  }
  std::vector<char> is_source(nv, 0), is_target(nv, 0);
  for (int v : net.cut_sources[player]) is_source[v] = 1;
  for (int v : net.cut_targets[player]) is_target[v] = 1;

  std::vector<int> starts = net.cut_sources[player];
  std::sort(starts.begin(), starts.end(),
            [&](int a, int b) { return net.vertices[a] < net.vertices[b]; });

  std::vector<std::vector<int>> paths;
  std::vector<int> edge_stack;
  std::vector<char> on_path(nv, 0);
  std::function<void(int)> dfs = [&](int u) {
    for (const auto& [v, r] : adj[u]) {
      if (on_path[v] || is_source[v]) continue;
      edge_stack.push_back(r);
      if (is_target[v]) {
        if (paths.size() >= cap) {
          throw Error(ErrorCode::kPathLimitExceeded,
                      "more than " + std::to_string(cap) + " paths for player '" +
                          g.players[player] + "'");
        }
        paths.push_back(edge_stack);
      } else {
        on_path[v] = 1;
        dfs(v);
        on_path[v] = 0;
      }
      edge_stack.pop_back();
    }
  };
  for (int s : starts) {
    on_path[s] = 1;
    dfs(s);
    on_path[s] = 0;
  }
  return paths;
}

std::vector<Rational> dual_shares(const LinearProgram& lp, const LpOutcome& out, int num_players) {
  std::vector<Rational> shares(num_players, Rational(0));
  for (int i = 0; i < lp.num_rows(); ++i) {
    const int owner = lp.rows()[i].owner;
    if (owner >= 0) shares[owner] += lp.rows()[i].rhs * out.dual[i];
  }
  return shares;
}

}  // namespace costshare
