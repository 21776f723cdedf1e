#include <doctest.h>

#include "costshare/approx.hpp"
#include "costshare/fixtures.hpp"
#include "costshare/instance_io.hpp"
#include "oracles.hpp"
#include "random_games.hpp"
#include "test_util.hpp"

using namespace costshare;
using nlohmann::json;

namespace {

GameInstance weighted_vc(const std::vector<int>& costs, const std::vector<std::pair<int, int>>& edges) {
  json vs = json::array(), es = json::array();
  for (std::size_t v = 0; v < costs.size(); ++v) vs.push_back({{"label", "v" + std::to_string(v)}, {"cost", costs[v]}});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    es.push_back({{"label", "e" + std::to_string(i)},
                  {"u", "v" + std::to_string(edges[i].first)},
                  {"v", "v" + std::to_string(edges[i].second)}});
  }
  return instance_from_json({{"schema", 1}, {"family", "VERTEX_COVER"}, {"vertices", vs}, {"edges", es}});
}

Rational bought_cost(const GameInstance& g, const StrategyProfile& s) {
  return purchase_cost(g, bought_set(g, s));
}

// The (alpha, beta) conditions evaluated with brute-force optima.
bool oracle_alpha_beta(const GameInstance& g, const StrategyProfile& s, const Rational& alpha, const Rational& beta) {
  const int n = g.num_players();
  const int m = g.num_resources();
  std::vector<char> bought(m);
  Rational cost(0);
  for (int r = 0; r < m; ++r) {
    bought[r] = s.resource_total(r) >= g.resources[r].cost;
    if (bought[r]) cost += g.resources[r].cost;
  }
  if (cost > beta * testsupport::oracle_optimum(g, g.grand_coalition())) return false;
  for (int k = 0; k < n; ++k) {
    if (!testsupport::oracle_feasible(g, Coalition::single(k), bought)) return false;
  }
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const Coalition c(mask);
    Rational spend(0);
    for (int k : c.members()) spend += s.total(k);
    if (sgn(spend) == 0) continue;
    if (testsupport::oracle_reduced(g, c, s.outside(c)) * alpha < spend) return false;
  }
  return true;
}

void check_bound(const GameInstance& g, const StrategyProfile& s, const Rational& factor) {
  CHECK(verify_alpha_beta(g, s, {factor, factor}));
  CHECK(serial::verify_alpha_beta(g, s, {factor, factor}));
  CHECK(oracle_alpha_beta(g, s, factor, factor));
  CHECK(bought_cost(g, s) <= factor * optimum(g, g.grand_coalition()).cost);
  for (int r = 0; r < g.num_resources(); ++r) {
    // Payments never exceed a resource's cost, and only bought resources are paid.
    const Rational total = s.resource_total(r);
    CHECK(total <= g.resources[r].cost);
    if (sgn(total) > 0) CHECK(total == g.resources[r].cost);
  }
}

}  // namespace

TEST_CASE("vertex cover scheme") {
  const auto tri = weighted_vc({3, 5, 7}, {{0, 1}, {1, 2}, {0, 2}});
  const auto s = approx_se_vc(tri);
  CHECK(bought_cost(tri, s) <= 16);
  check_bound(tri, s, 2);
  CHECK_FALSE(verify_alpha_beta(tri, s, {1, 1}));
  CHECK_FALSE(oracle_alpha_beta(tri, s, 1, 1));

  const auto edge = weighted_vc({1, 1}, {{0, 1}});
  const auto e = approx_se_vc(edge);
  check_bound(edge, e, 1);
  CHECK(verify_se(edge, e).verified);

  testsupport::Rng rng(51);
  for (int i = 0; i < 25; ++i) {
    const auto g = testsupport::random_vertex_cover(rng, i < 5 ? 8 : 5, 7, 6);
    CAPTURE(serialize_instance(g, -1));
    check_bound(g, approx_se_vc(g), 2);
  }
  CHECK_ERROR_CODE(approx_se_vc(fixture("sc_two_singletons")), ErrorCode::kUnsupportedFamily);
}

TEST_CASE("set cover scheme") {
  const auto sc = fixture("sc_two_singletons");
  CHECK(max_frequency(sc) == 2);
  check_bound(sc, approx_se_sc(sc), 2);

  const auto partition = instance_from_json({{"schema", 1},
                                             {"family", "SET_COVER"},
                                             {"elements", {"a", "b", "c"}},
                                             {"sets",
                                              {{{"label", "A"}, {"cost", 4}, {"members", {"a", "b"}}},
                                               {{"label", "B"}, {"cost", 2}, {"members", {"c"}}}}}});
  CHECK(max_frequency(partition) == 1);
  const auto p = approx_se_sc(partition);
  check_bound(partition, p, 1);
  CHECK(verify_se(partition, p).verified);

  testsupport::Rng rng(52);
  for (int i = 0; i < 25; ++i) {
    const auto g = testsupport::random_set_cover(rng, i < 5 ? 6 : 4, 5, 6);
    CAPTURE(serialize_instance(g, -1));
    const Rational f = max_frequency(g);
    check_bound(g, approx_se_sc(g), f);
  }
}

TEST_CASE("facility location scheme") {
  const auto one = instance_from_json({{"schema", 1},
                                       {"family", "UFL"},
                                       {"metric", true},
                                       {"terminals", {"t1", "t2"}},
                                       {"facilities", {{{"label", "f"}, {"cost", 4}}}},
                                       {"connections",
                                        {{{"terminal", "t1"}, {"facility", "f"}, {"cost", 1}},
                                         {{"terminal", "t2"}, {"facility", "f"}, {"cost", 2}}}}});
  const auto s = approx_se_ufl(one);
  check_bound(one, s, 1);
  CHECK(bought_cost(one, s) == 7);

  testsupport::Rng rng(53);
  for (int i = 0; i < 25; ++i) {
    const auto g = testsupport::random_ufl(rng, i < 5 ? 4 : 3, 3, 6);
    CAPTURE(serialize_instance(g, -1));
    check_bound(g, approx_se_ufl(g), 3);
  }

  CHECK_ERROR_CODE(approx_se_ufl(fixture("sc_two_singletons")), ErrorCode::kUnsupportedFamily);
  json plain = {{"schema", 1},
                {"family", "UFL"},
                {"terminals", {"t"}},
                {"facilities", {{{"label", "f"}, {"cost", 1}}}},
                {"connections", {{{"terminal", "t"}, {"facility", "f"}, {"cost", 1}}}}};
  CHECK_ERROR_CODE(approx_se_ufl(instance_from_json(plain)), ErrorCode::kNotMetric);
}

TEST_CASE("exact parameters agree with verify_se") {
  testsupport::Rng rng(54);
  int agreed_true = 0;
  for (const auto& name : fixture_names()) {
    const auto g = fixture(name);
    if (g.num_players() > 4 || g.family == Family::kFractionalVc || g.family == Family::kNonbinaryVc) continue;
    CAPTURE(name);
    std::vector<StrategyProfile> profiles;
    if (g.family != Family::kTerminalBackup) {
      const auto built = construct_se_from_lp(g);
      if (built.integral) profiles.push_back(built.profile);
    }
    const auto best = optimum(g, g.grand_coalition());
    for (int k = 0; k < g.num_players(); ++k) {
      auto s = StrategyProfile::zero(g);
      for (int r = 0; r < g.num_resources(); ++r) {
        if (sgn(best.set.level[r]) > 0) s.pay[k][r] = g.resources[r].cost;
      }
      profiles.push_back(s);
    }
    for (const auto& s : profiles) {
      const bool se = verify_se(g, s).verified;
      CHECK(verify_alpha_beta(g, s, {1, 1}) == se);
      agreed_true += se;
    }
  }
  CHECK(agreed_true > 0);
}

TEST_CASE("parameter checks") {
  const auto g = fixture("sc_two_singletons");
  const auto s = approx_se_sc(g);
  CHECK_ERROR_CODE(verify_alpha_beta(g, s, {Rational(1, 2), 2}), ErrorCode::kValidationError);
  CHECK_ERROR_CODE(verify_alpha_beta(fixture("multiwaycut_star_k", 13), StrategyProfile::zero(fixture("multiwaycut_star_k", 13)), {2, 2}),
                   ErrorCode::kScaleExceeded);
  CHECK_FALSE(verify_alpha_beta(g, StrategyProfile::zero(g), {2, 2}));
}
