#include "costshare/fixtures.hpp"

#include <functional>
#include <map>

#include "costshare/error.hpp"
#include "costshare/instance_io.hpp"

namespace costshare {

namespace {

using nlohmann::json;

json edge(const std::string& u, const std::string& v, long cost) {
  return {{"u", u}, {"v", v}, {"cost", cost}};
}

// Three terminals, three middle vertices, a hub g and the old source s'.
json granot_edges() {
  json e = json::array();
  for (int i = 1; i <= 3; ++i) {
    e.push_back(edge("t" + std::to_string(i), "u" + std::to_string(i), 20));
  }
  e.push_back(edge("t1", "u3", 45));
  e.push_back(edge("t2", "u1", 45));
  e.push_back(edge("t3", "u2", 45));
  for (int i = 1; i <= 3; ++i) e.push_back(edge("u" + std::to_string(i), "g", 20));
  for (int i = 1; i <= 3; ++i) e.push_back(edge("u" + std::to_string(i), "s'", 28));
  e.push_back(edge("g", "s'", 20));
  return e;
}

json single_source_connection(const std::string& name, const std::string& source, json vertices,
                              json edges) {
  json players = json::array();
  for (int i = 1; i <= 3; ++i) {
    const std::string t = "t" + std::to_string(i);
    players.push_back({{"label", t}, {"sink", t}});
  }
  return {{"schema", 1},        {"family", "CONNECTION"}, {"name", name},
          {"directed", false},  {"source", source},       {"vertices", vertices},
          {"edges", edges},     {"players", players}};
}

json granot98_subgame() {
  return single_source_connection("granot98_subgame", "s'",
                                  {"t1", "t2", "t3", "u1", "u2", "u3", "g", "s'"},
                                  granot_edges());
}

json fig1_connection() {
  json e = granot_edges();
  e.push_back(edge("s'", "s", 20));
  return single_source_connection("fig1_connection", "s",
                                  {"t1", "t2", "t3", "u1", "u2", "u3", "g", "s'", "s"}, e);
}

json tb_d4_clique() {
  json e = granot_edges();
  const std::vector<std::string> clique = {"c1", "c2", "c3", "c4"};
  e.push_back(edge("s'", "c1", 20));
  for (std::size_t i = 0; i < clique.size(); ++i) {
    for (std::size_t j = i + 1; j < clique.size(); ++j) e.push_back(edge(clique[i], clique[j], 0));
  }
  return {{"schema", 1},
          {"family", "TERMINAL_BACKUP"},
          {"name", "tb_d4_clique"},
          {"directed", false},
          {"vertices", {"t1", "t2", "t3", "u1", "u2", "u3", "g", "s'", "c1", "c2", "c3", "c4"}},
          {"edges", e},
          {"terminals", {"t1", "t2", "t3", "c1", "c2", "c3", "c4"}},
          {"d", 4}};
}

json fig1_multicut_directed() {
  return {{"schema", 1},
          {"family", "CUTTING"},
          {"name", "fig1_multicut_directed"},
          {"directed", true},
          {"vertices", {"s2", "a", "s1", "b", "c", "t1", "t2"}},
          {"edges",
           {edge("s2", "a", 3), edge("s1", "c", 2), edge("b", "t1", 2), edge("a", "s1", 100),
            edge("a", "b", 100), edge("c", "b", 100), edge("c", "t2", 100),
            edge("t1", "t2", 100)}},
          {"players",
           {{{"label", "1"}, {"S", {"s1"}}, {"T", {"t1"}}},
            {{"label", "2"}, {"S", {"s2"}}, {"T", {"t2"}}}}}};
}

json cutting_star_2p() {
  return {{"schema", 1},
          {"family", "CUTTING"},
          {"name", "cutting_star_2p"},
          {"directed", false},
          {"vertices", {"s1", "t1", "s2", "u"}},
          {"edges", {edge("s1", "u", 2), edge("t1", "u", 2), edge("s2", "u", 3)}},
          {"players",
           {{{"label", "1"}, {"S", {"s1"}}, {"T", {"t1"}}},
            {{"label", "2"}, {"S", {"s2"}}, {"T", {"s1", "t1"}}}}}};
}

json multiwaycut_star(int k) {
  if (k < 2 || k > 31) {
    throw Error(ErrorCode::kUnknownFixture, "multiwaycut_star_k needs 2 <= k <= 31");
  }
  json vertices = {"c"};
  json edges = json::array();
  json players = json::array();
  for (int i = 1; i <= k; ++i) {
    const std::string leaf = "s" + std::to_string(i);
    vertices.push_back(leaf);
    edges.push_back(edge(leaf, "c", 1));
  }
  for (int i = 1; i <= k; ++i) {
    json targets = json::array();
    for (int j = 1; j <= k; ++j) {
      if (j != i) targets.push_back("s" + std::to_string(j));
    }
    players.push_back({{"label", std::to_string(i)}, {"S", {"s" + std::to_string(i)}}, {"T", targets}});
  }
  return {{"schema", 1},          {"family", "CUTTING"}, {"name", "multiwaycut_star_" + std::to_string(k)},
          {"directed", false},    {"vertices", vertices}, {"edges", edges},
          {"players", players}};
}

json triangle(const std::string& family, const std::string& name, int b) {
  json edges = json::array();
  const std::vector<std::pair<std::string, std::string>> ends = {{"u", "w"}, {"u", "v"}, {"v", "w"}};
  for (std::size_t i = 0; i < ends.size(); ++i) {
    json e = {{"label", std::to_string(i + 1)}, {"u", ends[i].first}, {"v", ends[i].second}};
    if (b > 0) e["b"] = b;
    edges.push_back(e);
  }
  return {{"schema", 1},
          {"family", family},
          {"name", name},
          {"vertices",
           {{{"label", "u"}, {"cost", 3}}, {{"label", "v"}, {"cost", 5}}, {{"label", "w"}, {"cost", 7}}}},
          {"edges", edges}};
}

json sc_two_singletons() {
  return {{"schema", 1},
          {"family", "SET_COVER"},
          {"name", "sc_two_singletons"},
          {"elements", {"e1", "e2"}},
          {"sets",
           {{{"label", "S1"}, {"cost", 1}, {"members", {"e1"}}},
            {{"label", "S2"}, {"cost", 1}, {"members", {"e2"}}},
            {{"label", "S3"}, {"cost", 3}, {"members", {"e1", "e2"}}}}}};
}

json ccrfl_capacity2() {
  return {{"schema", 1},
          {"family", "CCRFL"},
          {"name", "ccrfl_capacity2"},
          {"terminals", {"t1", "t2"}},
          {"facilities", {{{"label", "f"}, {"cost", 2}, {"capacity", 2}}}},
          {"connections",
           {{{"terminal", "t1"}, {"facility", "f"}, {"cost", 1}},
            {{"terminal", "t2"}, {"facility", "f"}, {"cost", 1}}}}};
}

const std::map<std::string, std::function<json(int)>>& registry() {
  static const std::map<std::string, std::function<json(int)>> table = {
      {"fig1_connection", [](int) { return fig1_connection(); }},
      {"granot98_subgame", [](int) { return granot98_subgame(); }},
      {"fig1_multicut_directed", [](int) { return fig1_multicut_directed(); }},
      {"cutting_star_2p", [](int) { return cutting_star_2p(); }},
      {"multiwaycut_star_k", [](int k) { return multiwaycut_star(k); }},
      {"triangle_fractional_vc",
       [](int) { return triangle("FRACTIONAL_VC", "triangle_fractional_vc", 0); }},
      {"triangle_nonbinary_vc_b4",
       [](int) { return triangle("NONBINARY_VC", "triangle_nonbinary_vc_b4", 4); }},
      {"tb_d4_clique", [](int) { return tb_d4_clique(); }},
      {"sc_two_singletons", [](int) { return sc_two_singletons(); }},
      {"ccrfl_capacity2", [](int) { return ccrfl_capacity2(); }},
  };
  return table;
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

nlohmann::json fixture_json(const std::string& name, int k) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::kUnknownFixture, "no fixture named " + name);
  return it->second(k);
}

GameInstance fixture(const std::string& name, int k) {
  return instance_from_json(fixture_json(name, k));
}

}  // namespace costshare
