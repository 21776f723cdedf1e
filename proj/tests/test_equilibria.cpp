#include <doctest.h>

#include "costshare/equilibria.hpp"
#include "costshare/fixtures.hpp"
#include "costshare/instance_io.hpp"
#include "oracles.hpp"
#include "random_games.hpp"
#include "test_util.hpp"

using namespace costshare;
using nlohmann::json;

namespace {

void pay(const GameInstance& g, StrategyProfile& s, const std::string& player, const std::string& resource,
         const char* amount) {
  s.pay[g.player_index(player)][g.resource_index(resource)] += parse_rational(amount);
}

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

GameInstance tb_path() {
  return instance_from_json({{"schema", 1},
                             {"family", "TERMINAL_BACKUP"},
                             {"vertices", {"a", "m", "b"}},
                             {"edges", {{{"u", "a"}, {"v", "m"}, {"cost", 4}}, {{"u", "m"}, {"v", "b"}, {"cost", 6}}}},
                             {"terminals", {"a", "b"}},
                             {"d", 2}});
}

GameInstance tb_star() {
  return instance_from_json({{"schema", 1},
                             {"family", "TERMINAL_BACKUP"},
                             {"vertices", {"c", "x", "y", "z"}},
                             {"edges",
                              {{{"u", "c"}, {"v", "x"}, {"cost", 2}},
                               {{"u", "c"}, {"v", "y"}, {"cost", 2}},
                               {{"u", "c"}, {"v", "z"}, {"cost", 2}}}},
                             {"terminals", {"x", "y", "z"}},
                             {"d", 2}});
}

// Pays for a random subset of resources (the optimum, most of the time),
// splitting each bought resource among random players; sometimes underpays.
StrategyProfile random_profile(testsupport::Rng& rng, const GameInstance& g) {
  auto s = StrategyProfile::zero(g);
  const int n = g.num_players();
  const auto best = optimum(g, g.grand_coalition());
  const bool use_opt = testsupport::coin(rng, 0.7);
  for (int r = 0; r < g.num_resources(); ++r) {
    const bool buy = use_opt ? sgn(best.set.level[r]) > 0 : testsupport::coin(rng, 0.5);
    if (!buy || sgn(g.resources[r].cost) == 0) continue;
    std::vector<int> weight(n);
    int total = 0;
    for (int k = 0; k < n; ++k) total += weight[k] = testsupport::uniform(rng, 0, 3);
    if (total == 0) weight[testsupport::uniform(rng, 0, n - 1)] = total = 1;
    const Rational scale = testsupport::coin(rng, 0.1) ? Rational(1, 2) : Rational(1);
    for (int k = 0; k < n; ++k) s.pay[k][r] = g.resources[r].cost * weight[k] * scale / total;
  }
  return s;
}

// Checks every theorem-level consequence of a verified profile.
void check_verified_profile(const GameInstance& g, const StrategyProfile& s) {
  const auto v = verify_se(g, s);
  REQUIRE(v.verified);
  CHECK(verify_ne(g, s).verified);
  CHECK(spoa_check(g, s));
  CHECK(in_core(g, profile_shares(s)));
  CHECK(testsupport::oracle_violating(g, s).empty());
}

void check_witness(const GameInstance& g, const StrategyProfile& s, const ViolationWitness& w) {
  CHECK(w.kind == WitnessKind::kSum);
  CHECK(validate_witness(g, s, w));
  const auto strict = strengthen_violation(g, s, w);
  CHECK(strict.kind == WitnessKind::kStrict);
  CHECK(validate_witness(g, s, strict));
  for (int k : strict.coalition.members()) CHECK(w.coalition.contains(k));
  // Per-resource totals of the deviation survive the rescaling unless the
  // singleton fast path for an unsatisfied member was taken.
  bool unsatisfied = false;
  for (int k : w.coalition.members()) unsatisfied = unsatisfied || w.old_cost[k].infeasible;
  if (!unsatisfied) {
    for (int r = 0; r < g.num_resources(); ++r) {
      Rational before(0), after(0);
      for (int k = 0; k < g.num_players(); ++k) {
        before += w.deviation[k][r];
        after += strict.deviation[k][r];
      }
      CHECK(before == after);
    }
  }
}

}  // namespace

TEST_CASE("bought set") {
  const auto fig1 = fixture("fig1_connection");
  CHECK(purchase_cost(fig1, bought_set(fig1, StrategyProfile::zero(fig1))) == 0);
  const auto nb = fixture("triangle_nonbinary_vc_b4");
  auto s = StrategyProfile::zero(nb);
  pay(nb, s, nb.players[0], "u", "7");
  CHECK(bought_set(nb, s).level[nb.resource_index("u")] == 2);

  auto full = StrategyProfile::zero(fig1);
  const auto best = optimum(fig1, fig1.grand_coalition());
  for (int r = 0; r < fig1.num_resources(); ++r) {
    if (sgn(best.set.level[r]) > 0) full.pay[r % 3][r] = fig1.resources[r].cost;
  }
  const auto got = bought_set(fig1, full);
  CHECK(purchase_cost(fig1, got) == 160);
  CHECK(got.level == best.set.level);
}

TEST_CASE("verify_se matches the brute-force violating coalitions") {
  testsupport::Rng rng(31);
  int verified = 0, violated = 0;
  for (int round = 0; round < 5; ++round) {
    for (const auto& g : {testsupport::random_set_cover(rng, 3, 4, 5), testsupport::random_vertex_cover(rng, 4, 4, 4),
                          testsupport::random_ufl(rng, 3, 2, 4), testsupport::random_cutting(rng, 5, 3, 2),
                          testsupport::random_connection(rng, 5, 3, 2), testsupport::random_ccrfl(rng, 3, 2, 4)}) {
      CAPTURE(serialize_instance(g, -1));
      for (int trial = 0; trial < 6; ++trial) {
        const auto s = random_profile(rng, g);
        const auto expected = testsupport::oracle_violating(g, s);
        const auto got = verify_se(g, s);
        CHECK(got.verified == expected.empty());
        CHECK(serial::verify_se(g, s).verified == got.verified);
        if (got.verified) {
          ++verified;
          check_verified_profile(g, s);
          continue;
        }
        ++violated;
        REQUIRE(got.witness.has_value());
        // The witness coalition is the first violator in canonical order.
        for (Coalition c : coalitions_by_size(g.num_players())) {
          if (testsupport::contains(expected, c)) {
            CHECK(got.witness->coalition == c);
            break;
          }
        }
        check_witness(g, s, *got.witness);
        const auto ne = verify_ne(g, s);
        if (!ne.verified) CHECK(ne.witness->coalition.size() == 1);
      }
    }
  }
  CHECK(verified > 5);
  CHECK(violated > 5);
}

TEST_CASE("constructions from the LP") {
  const auto sc = fixture("sc_two_singletons");
  const auto a = construct_se_from_lp(sc);
  REQUIRE(a.integral);
  CHECK(a.profile.pay[sc.player_index("e1")][sc.resource_index("S1")] == 1);
  CHECK(a.profile.pay[sc.player_index("e2")][sc.resource_index("S2")] == 1);
  CHECK(a.profile.total(0) + a.profile.total(1) == 2);
  check_verified_profile(sc, a.profile);

  const auto cc = fixture("ccrfl_capacity2");
  const auto b = construct_se_from_lp(cc);
  REQUIRE(b.integral);
  CHECK(b.profile.total(0) + b.profile.total(1) == 4);
  check_verified_profile(cc, b.profile);

  const auto tri = weighted_vc({3, 5, 7}, {{0, 1}, {1, 2}, {0, 2}});
  const auto c = construct_se_from_lp(tri);
  CHECK_FALSE(c.integral);
  CHECK(c.integral_value == 8);
  CHECK(c.lp_value == Rational(15, 2));

  CHECK_ERROR_CODE(construct_se_from_lp(fixture("triangle_fractional_vc")), ErrorCode::kUnsupportedFamily);
}

TEST_CASE("random LP constructions verify whenever the gap is one") {
  testsupport::Rng rng(32);
  int built = 0;
  for (int i = 0; i < 40; ++i) {
    const GameInstance g = i % 4 == 0   ? testsupport::random_set_cover(rng, 4, 4, 5)
                           : i % 4 == 1 ? testsupport::random_vertex_cover(rng, 5, 5, 4)
                           : i % 4 == 2 ? testsupport::random_ufl(rng, 3, 3, 5)
                                        : testsupport::random_ccrfl(rng, 3, 2, 4);
    CAPTURE(serialize_instance(g, -1));
    const auto out = construct_se_from_lp(g);
    CHECK(out.integral == (integrality_gap(g).value == 1));
    if (!out.integral) {
      if (g.family != Family::kCcrfl) CHECK(find_core(g).empty);
      continue;
    }
    ++built;
    check_verified_profile(g, out.profile);
  }
  CHECK(built > 10);
}

TEST_CASE("witnesses on the worked examples") {
  const auto nb = fixture("triangle_nonbinary_vc_b4");
  auto cand = StrategyProfile::zero(nb);
  pay(nb, cand, nb.players[0], "u", "6");
  pay(nb, cand, nb.players[0], "w", "4");
  pay(nb, cand, nb.players[1], "v", "2");
  pay(nb, cand, nb.players[2], "v", "8");
  pay(nb, cand, nb.players[2], "w", "10");
  CHECK(in_core(nb, profile_shares(cand)));
  const auto v = verify_se(nb, cand);
  REQUIRE_FALSE(v.verified);
  CHECK(v.witness->coalition == Coalition::single(0));
  check_witness(nb, cand, *v.witness);

  const auto cut = fixture("cutting_star_2p");
  auto s = StrategyProfile::zero(cut);
  pay(cut, s, "1", "s1-u", "1");
  pay(cut, s, "1", "t1-u", "1");
  pay(cut, s, "2", "s1-u", "1");
  pay(cut, s, "2", "t1-u", "1");
  const auto ne = verify_ne(cut, s);
  REQUIRE_FALSE(ne.verified);
  CHECK(ne.witness->coalition == Coalition::single(0));

  // Every way of splitting the optimum of the directed multicut has a
  // unilateral improvement.
  const auto mc = fixture("fig1_multicut_directed");
  const auto best = optimum(mc, mc.grand_coalition());
  for (const char* share : {"0", "1/3", "1/2", "1"}) {
    auto p = StrategyProfile::zero(mc);
    for (int r = 0; r < mc.num_resources(); ++r) {
      if (sgn(best.set.level[r]) == 0) continue;
      p.pay[0][r] = mc.resources[r].cost * parse_rational(share);
      p.pay[1][r] = mc.resources[r].cost - p.pay[0][r];
    }
    const auto w = verify_ne(mc, p);
    REQUIRE_FALSE(w.verified);
    CHECK(w.witness->coalition.size() == 1);
  }
}

TEST_CASE("overpaying profiles are violated") {
  const auto sc = fixture("sc_two_singletons");
  auto s = StrategyProfile::zero(sc);
  for (const char* player : {"e1", "e2"}) {
    pay(sc, s, player, "S1", "1/2");
    pay(sc, s, player, "S2", "1/2");
    pay(sc, s, player, "S3", "3/2");
  }
  const auto v = verify_se(sc, s);
  REQUIRE_FALSE(v.verified);
  check_witness(sc, s, *v.witness);
  CHECK_ERROR_CODE(spoa_check(sc, s), ErrorCode::kNotSe);
  CHECK_ERROR_CODE(strengthen_violation(sc, StrategyProfile::zero(sc), *v.witness), ErrorCode::kInvalidWitness);
}

TEST_CASE("strengthening drops members that pay nothing") {
  const auto sc = fixture("sc_two_singletons");
  auto s = StrategyProfile::zero(sc);
  pay(sc, s, "e1", "S3", "3");
  pay(sc, s, "e2", "S2", "1");
  ViolationWitness w;
  w.coalition = sc.grand_coalition();
  w.kind = WitnessKind::kSum;
  w.deviation.assign(2, std::vector<Rational>(3, Rational(0)));
  w.deviation[0][sc.resource_index("S1")] = 1;
  w.deviation[0][sc.resource_index("S2")] = 1;
  w.old_cost = player_costs(sc, s);
  w.new_cost = {PlayerCost::of(2), PlayerCost::of(0)};
  REQUIRE(validate_witness(sc, s, w));
  const auto strict = strengthen_violation(sc, s, w);
  CHECK(strict.coalition == sc.grand_coalition());
  CHECK(strict.new_cost[0].value < 3);
  CHECK(strict.new_cost[1].value < 1);

  auto t = StrategyProfile::zero(sc);
  pay(sc, t, "e1", "S3", "3");
  w.old_cost = player_costs(sc, t);
  REQUIRE(validate_witness(sc, t, w));
  const auto dropped = strengthen_violation(sc, t, w);
  CHECK(dropped.coalition == Coalition::single(0));
  CHECK(validate_witness(sc, t, dropped));
}

TEST_CASE("multiway cut star profiles") {
  for (int k = 2; k <= 5; ++k) {
    const auto g = fixture("multiwaycut_star_k", k);
    CHECK(is_multiway_star(g));
    const auto s = multiwaycut_star_se(g, 0);
    CHECK(s.total(0) == 0);
    for (int j = 1; j < k; ++j) CHECK(s.total(j) == 1);
    CHECK(purchase_cost(g, bought_set(g, s)) == k - 1);
    check_verified_profile(g, s);
  }
  CHECK_ERROR_CODE(multiwaycut_star_se(fixture("cutting_star_2p"), 0), ErrorCode::kNotStar);
}

TEST_CASE("Bird allocation") {
  const auto path = instance_from_json({{"schema", 1},
                                        {"family", "CONNECTION"},
                                        {"source", "s"},
                                        {"vertices", {"s", "a", "b"}},
                                        {"edges", {{{"u", "s"}, {"v", "a"}, {"cost", 5}}, {{"u", "a"}, {"v", "b"}, {"cost", 3}}}},
                                        {"players", {{{"label", "a"}, {"sink", "a"}}, {{"label", "b"}, {"sink", "b"}}}}});
  const auto s = bird_allocation(path);
  CHECK(s.pay[0][0] == 5);
  CHECK(s.pay[1][1] == 3);
  check_verified_profile(path, s);

  testsupport::Rng rng(33);
  for (int i = 0; i < 20; ++i) {
    const auto g = testsupport::random_mst_game(rng, 6, 4);
    CHECK(is_mst_game(g));
    check_verified_profile(g, bird_allocation(g));
  }
  CHECK_ERROR_CODE(bird_allocation(fixture("granot98_subgame")), ErrorCode::kNotMstGame);
}

TEST_CASE("terminal backup with d = 2") {
  const auto path = tb_path();
  const auto s = tb2_allocation(path, {Rational(5), Rational(5)});
  CHECK(s.total(0) == 5);
  CHECK(s.total(1) == 5);
  // Player a covers its own edge and 1 of the far edge.
  CHECK(s.pay[0][0] == 4);
  check_verified_profile(path, s);

  const auto star = tb_star();
  const auto t = tb2_allocation(star, {Rational(2), Rational(2), Rational(2)});
  for (int k = 0; k < 3; ++k) CHECK(t.pay[k][k] == 2);
  check_verified_profile(star, t);
  CHECK_ERROR_CODE(tb2_allocation(star, {Rational(3), Rational(3), Rational(0)}), ErrorCode::kCoreRequired);

  testsupport::Rng rng(34);
  int built = 0;
  for (int i = 0; i < 25; ++i) {
    const auto g = testsupport::random_terminal_backup(rng, 6, 3, 3);
    CAPTURE(serialize_instance(g, -1));
    const auto core = find_core(g);
    if (core.empty) continue;
    ++built;
    check_verified_profile(g, tb2_allocation(g, core.imputation));
  }
  CHECK(built > 5);
}

TEST_CASE("class-rule decisions") {
  const auto tri = weighted_vc({1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(decide_se_class(tri).verdict == Verdict::kNone);
  const auto cycle = weighted_vc({1, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto d = decide_se_class(cycle);
  REQUIRE(d.verdict == Verdict::kExists);
  REQUIRE(d.witness.has_value());
  check_verified_profile(cycle, *d.witness);

  testsupport::Rng rng(35);
  const auto mst = decide_se_class(testsupport::random_mst_game(rng, 5, 3));
  CHECK(mst.verdict == Verdict::kExists);

  CHECK(decide_se_class(fixture("sc_two_singletons")).verdict == Verdict::kExists);
  CHECK(decide_se_class(fixture("granot98_subgame")).verdict == Verdict::kNone);
  CHECK(decide_se_class(fixture("granot98_subgame")).method == DecisionMethod::kCoreEmpty);
}

TEST_CASE("scale limits") {
  const auto big = fixture("multiwaycut_star_k", 13);
  CHECK_ERROR_CODE(verify_se(big, StrategyProfile::zero(big)), ErrorCode::kScaleExceeded);
}
