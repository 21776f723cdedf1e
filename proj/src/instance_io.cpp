#include "costshare/instance_io.hpp"

#include <algorithm>
#include <map>

#include "costshare/error.hpp"

namespace costshare {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where + "." + key, "missing field");
  return *it;
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) parse_fail(where, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where, "expected an array");
  return v;
}

bool boolean(const json& obj, const char* key, const std::string& where, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) parse_fail(where + "." + key, "expected a boolean");
  return it->get<bool>();
}

long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer");
  return v.get<long>();
}

// Label -> index lookup that reports the field path on a miss.
class Names {
 public:
  void add(const std::string& label) { index_.emplace(label, static_cast<int>(index_.size())); }
  int at(const std::string& label, const std::string& where) const {
    auto it = index_.find(label);
    if (it == index_.end()) parse_fail(where, "unknown label '" + label + "'");
    return it->second;
  }

 private:
  std::map<std::string, int> index_;
};

std::vector<std::string> label_list(const json& v, const std::string& where) {
  std::vector<std::string> out;
  const json& arr = array(v, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(text(arr[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Names names_of(const std::vector<std::string>& labels) {
  Names names;
  for (const auto& l : labels) names.add(l);
  return names;
}

void load_set_cover(const json& doc, GameInstance& g) {
  g.players = label_list(field(doc, "elements", "$"), "$.elements");
  const Names elems = names_of(g.players);
  SetCoverPayload sc;
  const json& sets = array(field(doc, "sets", "$"), "$.sets");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string w = "$.sets[" + std::to_string(i) + "]";
    g.resources.push_back({text(field(sets[i], "label", w), w + ".label"),
                           rational_from_json(field(sets[i], "cost", w), w + ".cost")});
    std::vector<int> members;
    for (const auto& m : label_list(field(sets[i], "members", w), w + ".members")) {
      members.push_back(elems.at(m, w + ".members"));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    sc.members.push_back(std::move(members));
  }
  g.payload = std::move(sc);
}

void load_vertex_resources(const json& doc, GameInstance& g) {
  const json& verts = array(field(doc, "vertices", "$"), "$.vertices");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string w = "$.vertices[" + std::to_string(i) + "]";
    g.resources.push_back({text(field(verts[i], "label", w), w + ".label"),
                           rational_from_json(field(verts[i], "cost", w), w + ".cost")});
  }
}

void load_vertex_cover(const json& doc, GameInstance& g) {
  load_vertex_resources(doc, g);
  Names verts;
  for (const auto& r : g.resources) verts.add(r.label);
  VertexCoverPayload vc;
  const json& edges = array(field(doc, "edges", "$"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string w = "$.edges[" + std::to_string(i) + "]";
    g.players.push_back(text(field(edges[i], "label", w), w + ".label"));
    const int u = verts.at(text(field(edges[i], "u", w), w + ".u"), w + ".u");
    const int v = verts.at(text(field(edges[i], "v", w), w + ".v"), w + ".v");
    vc.endpoints.emplace_back(u, v);
    int b = 1;
    if (edges[i].contains("b")) {
      if (g.family != Family::kNonbinaryVc) parse_fail(w + ".b", "only NONBINARY_VC takes b");
      b = static_cast<int>(integer(edges[i]["b"], w + ".b"));
    }
    vc.requirement.push_back(b);
  }
  g.payload = std::move(vc);
}

void load_edge_cover(const json& doc, GameInstance& g) {
  g.players = label_list(field(doc, "vertices", "$"), "$.vertices");
  const Names verts = names_of(g.players);
  EdgeCoverPayload ec;
  const json& edges = array(field(doc, "edges", "$"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string w = "$.edges[" + std::to_string(i) + "]";
    g.resources.push_back({text(field(edges[i], "label", w), w + ".label"),
                           rational_from_json(field(edges[i], "cost", w), w + ".cost")});
    ec.endpoints.emplace_back(verts.at(text(field(edges[i], "u", w), w + ".u"), w + ".u"),
                              verts.at(text(field(edges[i], "v", w), w + ".v"), w + ".v"));
  }
  g.payload = std::move(ec);
}

void load_facility(const json& doc, GameInstance& g) {
  g.players = label_list(field(doc, "terminals", "$"), "$.terminals");
  const Names terms = names_of(g.players);
  const int n = g.num_players();
  FacilityPayload fac;
  fac.metric = boolean(doc, "metric", "$", false);
  const json& facs = array(field(doc, "facilities", "$"), "$.facilities");
  Names fnames;
  for (std::size_t i = 0; i < facs.size(); ++i) {
    const std::string w = "$.facilities[" + std::to_string(i) + "]";
    const std::string label = text(field(facs[i], "label", w), w + ".label");
    fac.facilities.push_back(label);
    fnames.add(label);
    fac.opening.push_back(g.num_resources());
    g.resources.push_back({label, rational_from_json(field(facs[i], "cost", w), w + ".cost")});

    if (g.family != Family::kCcrfl) {
      if (facs[i].contains("allowed") || facs[i].contains("capacity"))
        parse_fail(w, "allowed/capacity only apply to CCRFL");
      continue;
    }
    std::vector<std::uint32_t> family{0};
    if (facs[i].contains("capacity")) {
      if (facs[i].contains("allowed")) parse_fail(w, "give either allowed or capacity, not both");
      const long cap = integer(facs[i]["capacity"], w + ".capacity");
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) <= cap) family.push_back(mask);
      }
    } else {
      const json& allowed = array(field(facs[i], "allowed", w), w + ".allowed");
      for (std::size_t a = 0; a < allowed.size(); ++a) {
        const std::string wa = w + ".allowed[" + std::to_string(a) + "]";
        std::uint32_t mask = 0;
        for (const auto& t : label_list(allowed[a], wa)) mask |= 1u << terms.at(t, wa);
        family.push_back(mask);
      }
    }
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    fac.allowed.push_back(std::move(family));
  }
  const int nf = static_cast<int>(fac.facilities.size());
  fac.connection.assign(n, std::vector<int>(nf, -1));
  const json& conns = array(field(doc, "connections", "$"), "$.connections");
  for (std::size_t i = 0; i < conns.size(); ++i) {
    const std::string w = "$.connections[" + std::to_string(i) + "]";
    const std::string t = text(field(conns[i], "terminal", w), w + ".terminal");
    const std::string f = text(field(conns[i], "facility", w), w + ".facility");
    const int ti = terms.at(t, w + ".terminal");
    const int fi = fnames.at(f, w + ".facility");
    if (fac.connection[ti][fi] >= 0) parse_fail(w, "duplicate connection " + t + "-" + f);
    std::string label = t + "-" + f;
    if (conns[i].contains("label")) label = text(conns[i]["label"], w + ".label");
    fac.connection[ti][fi] = g.num_resources();
    g.resources.push_back({label, rational_from_json(field(conns[i], "cost", w), w + ".cost")});
  }
  g.payload = std::move(fac);
}

void load_network(const json& doc, GameInstance& g) {
  NetworkPayload net;
  net.directed = boolean(doc, "directed", "$", false);
  net.vertices = label_list(field(doc, "vertices", "$"), "$.vertices");
  const Names verts = names_of(net.vertices);
  const json& edges = array(field(doc, "edges", "$"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string w = "$.edges[" + std::to_string(i) + "]";
    const std::string u = text(field(edges[i], "u", w), w + ".u");
    const std::string v = text(field(edges[i], "v", w), w + ".v");
    std::string label = net.directed ? u + ">" + v : u + "-" + v;
    if (edges[i].contains("label")) label = text(edges[i]["label"], w + ".label");
    g.resources.push_back({label, rational_from_json(field(edges[i], "cost", w), w + ".cost")});
    net.edges.emplace_back(verts.at(u, w + ".u"), verts.at(v, w + ".v"));
  }

  if (g.family == Family::kTerminalBackup) {
    const auto terms = label_list(field(doc, "terminals", "$"), "$.terminals");
    for (const auto& t : terms) {
      g.players.push_back(t);
      net.terminal.push_back(verts.at(t, "$.terminals"));
    }
    net.requirement = static_cast<int>(integer(field(doc, "d", "$"), "$.d"));
    g.payload = std::move(net);
    return;
  }

  const json& players = array(field(doc, "players", "$"), "$.players");
  std::string shared_source;
  if (doc.contains("source")) shared_source = text(doc["source"], "$.source");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string w = "$.players[" + std::to_string(i) + "]";
    g.players.push_back(text(field(players[i], "label", w), w + ".label"));
    if (g.family == Family::kConnection) {
      std::string s = shared_source;
      if (players[i].contains("source")) s = text(players[i]["source"], w + ".source");
      if (s.empty()) parse_fail(w + ".source", "missing field");
      net.source.push_back(verts.at(s, w + ".source"));
      net.sink.push_back(verts.at(text(field(players[i], "sink", w), w + ".sink"), w + ".sink"));
    } else {
      auto read_set = [&](const char* key) {
        std::vector<int> out;
        for (const auto& l : label_list(field(players[i], key, w), w + "." + key)) {
          out.push_back(verts.at(l, w + "." + key));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      };
      net.cut_sources.push_back(read_set("S"));
      net.cut_targets.push_back(read_set("T"));
    }
  }
  g.payload = std::move(net);
}

json labels_json(const std::vector<std::string>& labels) { return json(labels); }

}  // namespace

json rational_to_json(const Rational& value) {
  if (is_integral(value) && value.get_num().fits_slong_p()) return json(value.get_num().get_si());
  return json(to_string(value));
}

Rational rational_from_json(const json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(std::to_string(value.get<long long>()));
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      parse_fail(where, e.what());
    }
  }
  parse_fail(where, "expected an integer or a \"p/q\" string");
}

GameInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("$", "expected an object");
  const json& schema = field(doc, "schema", "$");
  if (!schema.is_number_integer() || schema.get<int>() != 1) {
    parse_fail("$.schema", "unsupported schema version (expected 1)");
  }
  GameInstance g;
  const std::string fam = text(field(doc, "family", "$"), "$.family");
  const auto family = parse_family(fam);
  if (!family) parse_fail("$.family", "unknown family '" + fam + "'");
  g.family = *family;
  if (doc.contains("name")) g.name = text(doc["name"], "$.name");

  switch (g.family) {
    case Family::kSetCover:
      load_set_cover(doc, g);
      break;
    case Family::kVertexCover:
    case Family::kFractionalVc:
    case Family::kNonbinaryVc:
      load_vertex_cover(doc, g);
      break;
    case Family::kEdgeCover:
      load_edge_cover(doc, g);
      break;
    case Family::kUfl:
    case Family::kCcrfl:
      load_facility(doc, g);
      break;
    case Family::kConnection:
    case Family::kCutting:
    case Family::kTerminalBackup:
      load_network(doc, g);
      break;
  }
  validate(g);
  return g;
}

GameInstance load_instance(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

json instance_to_json(const GameInstance& g) {
  json doc;
  doc["schema"] = 1;
  doc["family"] = std::string(family_name(g.family));
  doc["name"] = g.name;
  switch (g.family) {
    case Family::kSetCover: {
      doc["elements"] = labels_json(g.players);
      json sets = json::array();
      for (int r = 0; r < g.num_resources(); ++r) {
        json members = json::array();
        for (int k : g.set_cover().members[r]) members.push_back(g.players[k]);
        sets.push_back({{"label", g.resources[r].label},
                        {"cost", rational_to_json(g.resources[r].cost)},
                        {"members", members}});
      }
      doc["sets"] = sets;
      break;
    }
    case Family::kVertexCover:
    case Family::kFractionalVc:
    case Family::kNonbinaryVc: {
      json verts = json::array();
      for (const auto& r : g.resources) {
        verts.push_back({{"label", r.label}, {"cost", rational_to_json(r.cost)}});
      }
      json edges = json::array();
      const auto& vc = g.vertex_cover();
      for (int k = 0; k < g.num_players(); ++k) {
        json e = {{"label", g.players[k]},
                  {"u", g.resources[vc.endpoints[k].first].label},
                  {"v", g.resources[vc.endpoints[k].second].label}};
        if (g.family == Family::kNonbinaryVc) e["b"] = vc.requirement[k];
        edges.push_back(e);
      }
      doc["vertices"] = verts;
      doc["edges"] = edges;
      break;
    }
    case Family::kEdgeCover: {
      doc["vertices"] = labels_json(g.players);
      json edges = json::array();
      for (int r = 0; r < g.num_resources(); ++r) {
        const auto [a, b] = g.edge_cover().endpoints[r];
        edges.push_back({{"label", g.resources[r].label},
                         {"u", g.players[a]},
                         {"v", g.players[b]},
                         {"cost", rational_to_json(g.resources[r].cost)}});
      }
      doc["edges"] = edges;
      break;
    }
    case Family::kUfl:
    case Family::kCcrfl: {
      const auto& fac = g.facility();
      doc["terminals"] = labels_json(g.players);
      doc["metric"] = fac.metric;
      json facs = json::array();
      for (std::size_t f = 0; f < fac.facilities.size(); ++f) {
        json entry = {{"label", fac.facilities[f]},
                      {"cost", rational_to_json(g.resources[fac.opening[f]].cost)}};
        if (g.family == Family::kCcrfl) {
          json allowed = json::array();
          for (std::uint32_t mask : fac.allowed[f]) {
            if (mask == 0) continue;
            json set = json::array();
            for (int t : Coalition(mask).members()) set.push_back(g.players[t]);
            allowed.push_back(set);
          }
          entry["allowed"] = allowed;
        }
        facs.push_back(entry);
      }
      doc["facilities"] = facs;
      // Connections in resource order so a reload assigns identical indices.
      std::vector<std::pair<int, std::pair<int, int>>> order;
      for (int t = 0; t < g.num_players(); ++t) {
        for (std::size_t f = 0; f < fac.facilities.size(); ++f) {
          if (fac.connection[t][f] >= 0) order.push_back({fac.connection[t][f], {t, static_cast<int>(f)}});
        }
      }
      std::sort(order.begin(), order.end());
      json conns = json::array();
      for (const auto& [r, tf] : order) {
        conns.push_back({{"terminal", g.players[tf.first]},
                         {"facility", fac.facilities[tf.second]},
                         {"cost", rational_to_json(g.resources[r].cost)},
                         {"label", g.resources[r].label}});
      }
      doc["connections"] = conns;
      break;
    }
    case Family::kConnection:
    case Family::kCutting:
    case Family::kTerminalBackup: {
      const auto& net = g.network();
      doc["directed"] = net.directed;
      doc["vertices"] = labels_json(net.vertices);
      json edges = json::array();
      for (int r = 0; r < g.num_resources(); ++r) {
        edges.push_back({{"label", g.resources[r].label},
                         {"u", net.vertices[net.edges[r].first]},
                         {"v", net.vertices[net.edges[r].second]},
                         {"cost", rational_to_json(g.resources[r].cost)}});
      }
      doc["edges"] = edges;
      if (g.family == Family::kTerminalBackup) {
        json terms = json::array();
        for (int v : net.terminal) terms.push_back(net.vertices[v]);
        doc["terminals"] = terms;
        doc["d"] = net.requirement;
        break;
      }
      json players = json::array();
      for (int k = 0; k < g.num_players(); ++k) {
        json p = {{"label", g.players[k]}};
        if (g.family == Family::kConnection) {
          p["source"] = net.vertices[net.source[k]];
          p["sink"] = net.vertices[net.sink[k]];
        } else {
          json s = json::array(), t = json::array();
          for (int v : net.cut_sources[k]) s.push_back(net.vertices[v]);
          for (int v : net.cut_targets[k]) t.push_back(net.vertices[v]);
          p["S"] = s;
          p["T"] = t;
        }
        players.push_back(p);
      }
      doc["players"] = players;
      break;
    }
  }
  return doc;
}

std::string serialize_instance(const GameInstance& g, int indent) {
  return instance_to_json(g).dump(indent);
}

std::uint64_t instance_digest(const GameInstance& g) {
  const std::string text_out = instance_to_json(g).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text_out) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace costshare
