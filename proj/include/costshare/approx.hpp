#pragma once

#include "costshare/equilibria.hpp"

namespace costshare {

struct ApproxParams {
  Rational alpha{1};
  Rational beta{1};
};

// Edge-raising primal-dual scheme for VERTEX_COVER; a (2,2)-SE.
StrategyProfile approx_se_vc(const GameInstance& g);

// Element-raising primal-dual scheme for SET_COVER; an (f,f)-SE where f is
// the largest number of sets containing one element.
StrategyProfile approx_se_sc(const GameInstance& g);
int max_frequency(const GameInstance& g);

// Primal-dual facility location for metric UFL; a (3,3)-SE. Throws
// kNotMetric when the instance is not flagged metric.
StrategyProfile approx_se_ufl(const GameInstance& g);

// Bought cost <= beta * c(K), every player satisfied, and for every
// coalition C the reduced optimum is at least (1/alpha) * sum of |s_k| over
// C. OpenMP-parallel over coalitions.
bool verify_alpha_beta(const GameInstance& g, const StrategyProfile& s, const ApproxParams& p,
                       int max_players = kDefaultMaxPlayers);

namespace serial {
bool verify_alpha_beta(const GameInstance& g, const StrategyProfile& s, const ApproxParams& p,
                       int max_players = kDefaultMaxPlayers);
}  // namespace serial

}  // namespace costshare
