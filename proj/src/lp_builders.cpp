#include <string>

#include "costshare/error.hpp"
#include "costshare/game.hpp"

namespace costshare {

namespace {

void add_covering_rows(const GameInstance& g, LinearProgram& lp) {
  for (const auto& r : g.resources) lp.add_variable(r.label, r.cost);
  const int n = g.num_players();
  std::vector<std::vector<LpTerm>> terms(n);
  Rational one(1);
  std::vector<Rational> rhs(n, one);
  switch (g.family) {
    case Family::kSetCover: {
      const auto& members = g.set_cover().members;
      for (int r = 0; r < g.num_resources(); ++r) {
        for (int k : members[r]) terms[k].push_back({r, one});
      }
      break;
    }
    case Family::kEdgeCover: {
      const auto& ends = g.edge_cover().endpoints;
      for (int r = 0; r < g.num_resources(); ++r) {
        terms[ends[r].first].push_back({r, one});
        terms[ends[r].second].push_back({r, one});
      }
      break;
    }
    default: {
      const auto& vc = g.vertex_cover();
      for (int k = 0; k < n; ++k) {
        terms[k].push_back({vc.endpoints[k].first, one});
        terms[k].push_back({vc.endpoints[k].second, one});
        rhs[k] = vc.requirement[k];
      }
      break;
    }
  }
  for (int k = 0; k < n; ++k) {
    lp.add_row("cover:" + g.players[k], std::move(terms[k]), Relation::kGreaterEqual, rhs[k], k);
  }
}

void build_cutting(const GameInstance& g, std::size_t cap, LinearProgram& lp) {
  for (const auto& r : g.resources) lp.add_variable(r.label, r.cost);
  for (int k = 0; k < g.num_players(); ++k) {
    const auto paths = enumerate_paths(g, k, cap);
    for (std::size_t p = 0; p < paths.size(); ++p) {
      std::vector<LpTerm> terms;
      for (int r : paths[p]) terms.push_back({r, Rational(1)});
      lp.add_row("cut:" + g.players[k] + ":" + std::to_string(p), std::move(terms),
                 Relation::kGreaterEqual, Rational(1), k);
    }
  }
}

void build_ufl(const GameInstance& g, LinearProgram& lp) {
  for (const auto& r : g.resources) lp.add_variable(r.label, r.cost);
  const auto& fac = g.facility();
  const int nf = static_cast<int>(fac.facilities.size());
  for (int t = 0; t < g.num_players(); ++t) {
    std::vector<LpTerm> assign;
    for (int f = 0; f < nf; ++f) {
      if (fac.connection[t][f] >= 0) assign.push_back({fac.connection[t][f], Rational(1)});
    }
    lp.add_row("assign:" + g.players[t], std::move(assign), Relation::kGreaterEqual, Rational(1),
               t);
  }
  for (int t = 0; t < g.num_players(); ++t) {
    for (int f = 0; f < nf; ++f) {
      const int conn = fac.connection[t][f];
      if (conn < 0) continue;
      lp.add_row("open:" + g.players[t] + ":" + fac.facilities[f],
                 {{fac.opening[f], Rational(1)}, {conn, Rational(-1)}}, Relation::kGreaterEqual,
                 Rational(0), t);
    }
  }
}

void build_ccrfl(const GameInstance& g, LinearProgram& lp) {
  const auto& fac = g.facility();
  const int n = g.num_players();
  std::vector<std::vector<LpTerm>> assign(n);
  for (std::size_t f = 0; f < fac.facilities.size(); ++f) {
    for (std::uint32_t a : fac.allowed[f]) {
      if (a == 0) continue;
      const Coalition members(a);
      Rational cost = g.resources[fac.opening[f]].cost;
      std::string label = fac.facilities[f] + "{";
      bool usable = true;
      for (int t : members.members()) {
        const int conn = fac.connection[t][f];
        if (conn < 0) {
          usable = false;
          break;
        }
        cost += g.resources[conn].cost;
        if (label.back() != '{') label += ",";
        label += g.players[t];
      }
      if (!usable) continue;
      label += "}";
      const int var = lp.add_variable(std::move(label), cost);
      for (int t : members.members()) assign[t].push_back({var, Rational(1)});
    }
  }
  for (int t = 0; t < n; ++t) {
    lp.add_row("assign:" + g.players[t], std::move(assign[t]), Relation::kGreaterEqual,
               Rational(1), t);
  }
}

// Per-player flow on every arc; each undirected edge yields two arcs.
struct Arc {
  int edge, tail, head;
};

std::vector<Arc> arcs_of(const NetworkPayload& net) {
  std::vector<Arc> arcs;
  for (int r = 0; r < static_cast<int>(net.edges.size()); ++r) {
    const auto [a, b] = net.edges[r];
    arcs.push_back({r, a, b});
    if (!net.directed) arcs.push_back({r, b, a});
  }
  return arcs;
}

void build_flow(const GameInstance& g, LinearProgram& lp) {
  const auto& net = g.network();
  for (const auto& r : g.resources) lp.add_variable(r.label, r.cost);
  const auto arcs = arcs_of(net);
  const int nv = static_cast<int>(net.vertices.size());
  const bool backup = g.family == Family::kTerminalBackup;
  const Rational capacity = backup ? Rational(net.requirement - 1) : Rational(1);

  std::vector<char> is_player_vertex(nv, 0);
  if (backup) {
    for (int v : net.terminal) is_player_vertex[v] = 1;
  }

  for (int k = 0; k < g.num_players(); ++k) {
    const std::string& pk = g.players[k];
    std::vector<int> flow(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      flow[a] = lp.add_variable("flow:" + pk + ":" + g.resources[arcs[a].edge].label + ":" +
                                    net.vertices[arcs[a].tail] + ">" + net.vertices[arcs[a].head],
                                Rational(0));
    }
    for (int v = 0; v < nv; ++v) {
      Rational rhs(0);
      if (backup) {
        if (v == net.terminal[k]) {
          rhs = net.requirement - 1;
        } else if (is_player_vertex[v]) {
          rhs = -1;
        }
      } else {
        if (v == net.sink[k]) continue;
        if (v == net.source[k]) rhs = 1;
      }
      std::vector<LpTerm> terms;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (arcs[a].tail == v) terms.push_back({flow[a], Rational(1)});
        if (arcs[a].head == v) terms.push_back({flow[a], Rational(-1)});
      }
      if (terms.empty() && sgn(rhs) <= 0) continue;
      lp.add_row("node:" + pk + ":" + net.vertices[v], std::move(terms), Relation::kGreaterEqual,
                 rhs, k);
    }
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      lp.add_row("cap:" + pk + ":" + g.resources[arcs[a].edge].label + ":" +
                     net.vertices[arcs[a].tail] + ">" + net.vertices[arcs[a].head],
                 {{arcs[a].edge, capacity}, {flow[a], Rational(-1)}}, Relation::kGreaterEqual,
                 Rational(0), k);
    }
  }
}

}  // namespace

LinearProgram build_lp(const GameInstance& g, std::size_t path_cap) {
  LinearProgram lp(Sense::kMinimize);
  switch (g.family) {
    case Family::kSetCover:
    case Family::kVertexCover:
    case Family::kEdgeCover:
    case Family::kFractionalVc:
    case Family::kNonbinaryVc:
      add_covering_rows(g, lp);
      break;
    case Family::kCutting:
      build_cutting(g, path_cap, lp);
      break;
    case Family::kUfl:
      build_ufl(g, lp);
      break;
    case Family::kCcrfl:
      build_ccrfl(g, lp);
      break;
    case Family::kConnection:
    case Family::kTerminalBackup:
      build_flow(g, lp);
      break;
  }
  return lp;
}

}  // namespace costshare
