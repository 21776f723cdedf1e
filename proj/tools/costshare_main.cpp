#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "costshare/approx.hpp"
#include "costshare/core.hpp"
#include "costshare/equilibria.hpp"
#include "costshare/error.hpp"
#include "costshare/fixtures.hpp"
#include "costshare/instance_io.hpp"
#include "costshare/optima.hpp"
#include "costshare/profile_io.hpp"

namespace {

using costshare::Error;
using costshare::ErrorCode;
using costshare::GameInstance;
using costshare::Rational;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitScale = 3;

struct Options {
  std::string instance_path;
  std::string profile_path;
  std::string fixture_name;
  std::string coalition;
  int k = 3;
  bool exact = false;
  bool pretty = false;
  int max_players = costshare::kDefaultMaxPlayers;
  long node_budget = costshare::kDefaultNodeBudget;
  std::string alpha = "1";
  std::string beta = "1";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json rat(const Rational& v) { return costshare::to_string(v); }

json labels(const GameInstance& g, costshare::Coalition c) {
  json out = json::array();
  for (int k : c.members()) out.push_back(g.players[k]);
  return out;
}

json resource_set_json(const GameInstance& g, const costshare::ResourceSet& rs) {
  json out = json::object();
  for (int r = 0; r < g.num_resources(); ++r) {
    if (rs.unbounded[r]) {
      out[g.resources[r].label] = "unbounded";
    } else if (sgn(rs.level[r]) != 0) {
      out[g.resources[r].label] = rat(rs.level[r]);
    }
  }
  return out;
}

json imputation_json(const GameInstance& g, const costshare::Imputation& imp) {
  json out = json::object();
  for (int k = 0; k < g.num_players(); ++k) out[g.players[k]] = rat(imp[k]);
  return out;
}

json witness_json(const GameInstance& g, const costshare::ViolationWitness& w) {
  json dev = json::object(), before = json::object(), after = json::object();
  for (int k : w.coalition.members()) {
    json row = json::object();
    for (int r = 0; r < g.num_resources(); ++r) {
      if (sgn(w.deviation[k][r]) != 0) row[g.resources[r].label] = rat(w.deviation[k][r]);
    }
    dev[g.players[k]] = row;
    before[g.players[k]] = w.old_cost[k].str();
    after[g.players[k]] = w.new_cost[k].str();
  }
  return {{"kind", w.kind == costshare::WitnessKind::kSum ? "SUM" : "STRICT"},
          {"coalition", labels(g, w.coalition)},
          {"deviation", dev},
          {"old_cost", before},
          {"new_cost", after}};
}

costshare::Coalition parse_coalition(const GameInstance& g, const std::string& text) {
  if (text.empty()) return g.grand_coalition();
  std::uint32_t mask = 0;
  std::stringstream in(text);
  std::string label;
  while (std::getline(in, label, ',')) {
    if (!label.empty()) mask |= 1u << g.player_index(label);
  }
  return costshare::Coalition(mask);
}

// A profile file is either a bare profile document or a report whose
// results carry one (as written by build-se and approx-se).
costshare::StrategyProfile load_profile(const GameInstance& g, const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  if (doc.contains("results") && doc["results"].contains("profile")) {
    return costshare::profile_from_json(g, doc["results"]["profile"]);
  }
  return costshare::profile_from_json(g, doc);
}

struct Outcome {
  json results;
  int exit_code = kExitOk;
};

Outcome run_opt(const GameInstance& g, const Options& o) {
  const auto c = parse_coalition(g, o.coalition);
  const auto best = costshare::optimum(g, c, o.max_players);
  return {{{"coalition", labels(g, c)},
           {"cost", rat(best.cost)},
           {"resources", resource_set_json(g, best.set)}}};
}

Outcome run_core(const GameInstance& g, const Options& o) {
  const auto costs = costshare::coalition_costs(g, o.max_players);
  const auto found = costshare::find_core(g, o.max_players);
  if (found.empty) {
    json cert = json::array();
    for (const auto& [c, weight] : found.certificate) {
      cert.push_back({{"coalition", labels(g, c)}, {"weight", rat(weight)}});
    }
    return {{{"core", "EMPTY"},
             {"grand_cost", rat(costs.grand())},
             {"certificate", cert},
             {"certificate_valid", costshare::check_core_certificate(costs, found.certificate)}},
            kExitNegative};
  }
  return {{{"core", "NONEMPTY"},
           {"grand_cost", rat(costs.grand())},
           {"imputation", imputation_json(g, found.imputation)},
           {"in_core", costshare::in_core(costs, found.imputation)}}};
}

Outcome run_lp(const GameInstance& g, const Options&) {
  const auto lp = costshare::build_lp(g);
  const auto out = costshare::solve_lp(lp);
  json results;
  switch (out.status) {
    case costshare::LpStatus::kOptimal: {
      results["status"] = "OPTIMAL";
      results["objective"] = rat(out.objective);
      json primal = json::object(), dual = json::object();
      for (int j = 0; j < lp.num_variables(); ++j) {
        if (sgn(out.primal[j]) != 0) primal[lp.variables()[j].label] = rat(out.primal[j]);
      }
      for (int i = 0; i < lp.num_rows(); ++i) {
        if (sgn(out.dual[i]) != 0) dual[lp.rows()[i].label] = rat(out.dual[i]);
      }
      results["primal"] = primal;
      results["dual"] = dual;
      results["dual_shares"] =
          imputation_json(g, costshare::dual_shares(lp, out, g.num_players()));
      results["complementary_slackness"] = costshare::check_complementary_slackness(lp, out);
      return {results};
    }
    case costshare::LpStatus::kInfeasible:
      results["status"] = "INFEASIBLE";
      break;
    case costshare::LpStatus::kUnbounded:
      results["status"] = "UNBOUNDED";
      break;
  }
  return {results, kExitNegative};
}

Outcome run_gap(const GameInstance& g, const Options& o) {
  const auto gap = costshare::integrality_gap(g, o.max_players);
  return {{{"integral", rat(gap.integral)},
           {"relaxation", rat(gap.relaxation)},
           {"gap", gap.infinite ? json("infinite") : rat(gap.value)}}};
}

Outcome run_build_se(const GameInstance& g, const Options& o) {
  const auto built = costshare::construct_se_from_lp(g, o.max_players);
  if (!built.integral) {
    return {{{"status", "NOT_INTEGRAL"},
             {"lp_value", rat(built.lp_value)},
             {"integral_value", rat(built.integral_value)}},
            kExitNegative};
  }
  return {{{"status", "OK"},
           {"lp_value", rat(built.lp_value)},
           {"shares", imputation_json(g, costshare::profile_shares(built.profile))},
           {"profile", costshare::profile_to_json(g, built.profile)}}};
}

Outcome run_verify(const GameInstance& g, const Options& o, bool strong) {
  const auto s = load_profile(g, o.profile_path);
  const auto v = strong ? costshare::verify_se(g, s, o.max_players)
                        : costshare::verify_ne(g, s, o.max_players);
  if (v.verified) return {{{"status", "VERIFIED"}}};
  return {{{"status", "VIOLATED"}, {"witness", witness_json(g, *v.witness)}}, kExitNegative};
}

Outcome run_decide(const GameInstance& g, const Options& o) {
  const auto d = o.exact ? costshare::decide_se_exact(g, o.node_budget, o.max_players)
                         : costshare::decide_se_class(g, o.max_players);
  json results = {{"verdict", std::string(costshare::verdict_name(d.verdict))},
                  {"method", std::string(costshare::method_name(d.method))},
                  {"detail", d.detail}};
  if (o.exact) results["nodes"] = d.nodes;
  if (d.witness) results["profile"] = costshare::profile_to_json(g, *d.witness);
  switch (d.verdict) {
    case costshare::Verdict::kExists:
      return {results, kExitOk};
    case costshare::Verdict::kNone:
      return {results, kExitNegative};
    case costshare::Verdict::kUnknown:
      break;
  }
  return {results, kExitScale};
}

Outcome run_approx(const GameInstance& g, const Options& o) {
  costshare::StrategyProfile s;
  costshare::ApproxParams p;
  switch (g.family) {
    case costshare::Family::kVertexCover:
      s = costshare::approx_se_vc(g);
      p = {2, 2};
      break;
    case costshare::Family::kSetCover: {
      s = costshare::approx_se_sc(g);
      const int f = costshare::max_frequency(g);
      p = {f, f};
      break;
    }
    case costshare::Family::kUfl:
      s = costshare::approx_se_ufl(g);
      p = {3, 3};
      break;
    default:
      throw Error(ErrorCode::kUnsupportedFamily, "approx-se supports VERTEX_COVER, SET_COVER and UFL");
  }
  const Rational bought = costshare::purchase_cost(g, costshare::bought_set(g, s));
  const Rational best = costshare::optimum(g, g.grand_coalition(), o.max_players).cost;
  const bool holds = costshare::verify_alpha_beta(g, s, p, o.max_players);
  return {{{"alpha", rat(p.alpha)},
           {"beta", rat(p.beta)},
           {"cost", rat(bought)},
           {"optimum", rat(best)},
           {"ratio", sgn(best) == 0 ? json(nullptr) : rat(bought / best)},
           {"verify_alpha_beta", holds},
           {"profile", costshare::profile_to_json(g, s)}},
          holds ? kExitOk : kExitNegative};
}

Outcome run_verify_ab(const GameInstance& g, const Options& o) {
  const auto s = load_profile(g, o.profile_path);
  costshare::ApproxParams p{costshare::parse_rational(o.alpha), costshare::parse_rational(o.beta)};
  if (p.alpha < 1 || p.beta < 1) throw CLI::ValidationError("--alpha/--beta", "must be >= 1");
  const bool holds = costshare::verify_alpha_beta(g, s, p, o.max_players);
  return {{{"alpha", rat(p.alpha)}, {"beta", rat(p.beta)}, {"holds", holds}},
          holds ? kExitOk : kExitNegative};
}

void render_pretty(const json& v, const std::string& prefix, std::ostream& out) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      render_pretty(item, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      render_pretty(v[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << std::left << std::setw(40) << prefix << ' '
        << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kScaleExceeded:
    case ErrorCode::kPathLimitExceeded:
      return kExitScale;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-sharing game workbench: optima, core, strong equilibria"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--pretty", o.pretty, "Render results as an aligned key/value table");
  app.add_option("--max-players", o.max_players, "Refuse exponential work above this many players")
      ->capture_default_str()
      ->check(CLI::Range(1, 31));
  app.add_option("--node-budget", o.node_budget, "LP solves allowed for decide-se --exact")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  struct Command {
    CLI::App* sub;
    std::function<Outcome(const GameInstance&, const Options&)> run;
  };
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, bool takes_profile,
                 std::function<Outcome(const GameInstance&, const Options&)> run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("instance", o.instance_path, "Instance JSON file")->required();
    if (takes_profile) sub->add_option("profile", o.profile_path, "Profile JSON or report")->required();
    commands.push_back({sub, std::move(run)});
    return sub;
  };
  add("opt", "Optimal purchase for a coalition", false, run_opt)
      ->add_option("--coalition", o.coalition, "Comma-separated player labels (default: all)");
  add("core", "Find a core imputation or an emptiness certificate", false, run_core);
  add("lp", "Solve the family LP relaxation", false, run_lp);
  add("gap", "Integrality gap of the family LP", false, run_gap);
  add("build-se", "Strong equilibrium from an integral LP optimum", false, run_build_se);
  add("verify-se", "Check a profile for violating coalitions", true,
      [](const GameInstance& g, const Options& opt) { return run_verify(g, opt, true); });
  add("verify-ne", "Check a profile for unilateral deviations", true,
      [](const GameInstance& g, const Options& opt) { return run_verify(g, opt, false); });
  add("decide-se", "Decide strong-equilibrium existence", false, run_decide)
      ->add_flag("--exact", o.exact, "Exhaustive search over payment disjunctions");
  add("approx-se", "Primal-dual approximate strong equilibrium", false, run_approx);
  CLI::App* ab = add("verify-ab", "Check the (alpha,beta) condition", true, run_verify_ab);
  ab->add_option("--alpha", o.alpha, "Coalition improvement factor")->capture_default_str();
  ab->add_option("--beta", o.beta, "Cost approximation factor")->capture_default_str();

  CLI::App* fix = app.add_subcommand("fixture", "Print a named example instance");
  fix->add_option("name", o.fixture_name, "Fixture name")->required();
  fix->add_option("--k", o.k, "Leaves for multiwaycut_star_k")->capture_default_str();
  app.footer("Fixtures: " + [] {
    std::string s;
    for (const auto& n : costshare::fixture_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + "\nExit codes: 0 success, 1 negative verdict, 2 usage or input error, 3 scale or budget exceeded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fix->parsed()) {
      std::cout << costshare::fixture_json(o.fixture_name, o.k).dump(2) << '\n';
      return kExitOk;
    }
    for (const auto& cmd : commands) {
      if (!cmd.sub->parsed()) continue;
      const auto start = std::chrono::steady_clock::now();
      const GameInstance g = costshare::load_instance(read_file(o.instance_path));
      Outcome out = cmd.run(g, o);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      char digest[17];
      std::snprintf(digest, sizeof digest, "%016llx",
                    static_cast<unsigned long long>(costshare::instance_digest(g)));
      json report = {{"command", cmd.sub->get_name()},
                     {"argv", std::vector<std::string>(argv, argv + argc)},
                     {"instance", g.name},
                     {"instance_digest", digest},
                     {"results", out.results},
                     {"exit_code", out.exit_code},
                     {"timing", {{"wall_ms", ms}}}};
      if (o.pretty) {
        render_pretty(report, "", std::cout);
      } else {
        std::cout << report.dump(2) << '\n';
      }
      return out.exit_code;
    }
  } catch (const Error& e) {
    std::cerr << json({{"error", std::string(costshare::error_code_name(e.code()))},
                       {"message", e.what()}})
                     .dump()
              << '\n';
    return exit_code_for(e.code());
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
