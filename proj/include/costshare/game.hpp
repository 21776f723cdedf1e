#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "costshare/coalition.hpp"
#include "costshare/lp.hpp"
#include "costshare/rational.hpp"

namespace costshare {

enum class Family {
  kSetCover,
  kVertexCover,
  kEdgeCover,
  kUfl,
  kCcrfl,
  kConnection,
  kCutting,
  kTerminalBackup,
  kFractionalVc,
  kNonbinaryVc,
};

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

struct Resource {
  std::string label;
  Rational cost;
};

// SET_COVER: resources are sets, players are elements.
struct SetCoverPayload {
  std::vector<std::vector<int>> members;  // per resource, sorted player indices
};

// VERTEX_COVER, FRACTIONAL_VC, NONBINARY_VC: resources are vertices, players
// are edges.
struct VertexCoverPayload {
  std::vector<std::pair<int, int>> endpoints;  // per player, resource indices
  std::vector<int> requirement;                // per player b_k (1 unless NONBINARY_VC)
};

// EDGE_COVER: players are vertices, resources are edges.
struct EdgeCoverPayload {
  std::vector<std::pair<int, int>> endpoints;  // per resource, player indices
};

// UFL and CCRFL: players are terminals. Resources are facility openings and
// terminal-facility connections.
struct FacilityPayload {
  std::vector<std::string> facilities;
  std::vector<int> opening;                  // per facility, resource index
  std::vector<std::vector<int>> connection;  // [terminal][facility] resource index or -1
  bool metric = false;
  // CCRFL only: per facility, the allowed coalitions as bitmasks over
  // terminals; downward closed, contains 0, sorted ascending.
  std::vector<std::vector<std::uint32_t>> allowed;
};

// CONNECTION, CUTTING, TERMINAL_BACKUP: resources are the edges, in order.
struct NetworkPayload {
  bool directed = false;
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // per resource (tail, head)
  // CONNECTION
  std::vector<int> source, sink;  // per player
  // CUTTING
  std::vector<std::vector<int>> cut_sources, cut_targets;  // per player, sorted
  // TERMINAL_BACKUP
  std::vector<int> terminal;  // per player, its vertex
  int requirement = 2;        // d
};

using Payload = std::variant<SetCoverPayload, VertexCoverPayload, EdgeCoverPayload,
                             FacilityPayload, NetworkPayload>;

struct GameInstance {
  Family family = Family::kSetCover;
  std::string name;
  std::vector<std::string> players;
  std::vector<Resource> resources;
  Payload payload;

  int num_players() const { return static_cast<int>(players.size()); }
  int num_resources() const { return static_cast<int>(resources.size()); }
  Coalition grand_coalition() const { return Coalition::all(num_players()); }

  int player_index(const std::string& label) const;    // throws kUnknownLabel
  int resource_index(const std::string& label) const;  // throws kUnknownLabel

  const SetCoverPayload& set_cover() const { return std::get<SetCoverPayload>(payload); }
  const VertexCoverPayload& vertex_cover() const { return std::get<VertexCoverPayload>(payload); }
  const EdgeCoverPayload& edge_cover() const { return std::get<EdgeCoverPayload>(payload); }
  const FacilityPayload& facility() const { return std::get<FacilityPayload>(payload); }
  const NetworkPayload& network() const { return std::get<NetworkPayload>(payload); }

  // Families whose resources are bought whole (0/1), as opposed to the
  // fractional and multi-unit vertex cover variants.
  bool binary() const {
    return family != Family::kFractionalVc && family != Family::kNonbinaryVc;
  }
};

// Throws Error(kValidationError) naming the violated invariant.
void validate(const GameInstance& g);

// Purchase levels per resource: 0/1 for binary families, a unit count for
// NONBINARY_VC, a degree for FRACTIONAL_VC. `unbounded[r]` marks a
// zero-cost vertex in the fractional/multi-unit variants, which supplies any
// amount for free.
struct ResourceSet {
  std::vector<Rational> level;
  std::vector<bool> unbounded;

  static ResourceSet empty(const GameInstance& g);
  static ResourceSet full(const GameInstance& g);
  static ResourceSet of(const GameInstance& g, const std::vector<int>& resources);
  bool contains(int r) const { return unbounded[r] || sgn(level[r]) > 0; }
};

// Whether every member of c has its constraint satisfied when rs is bought.
// Monotone in rs for every family except CCRFL, where each bought connection
// puts its terminal into the facility's group whether or not it is needed.
bool feasible(const GameInstance& g, Coalition c, const ResourceSet& rs);

// Binary families only; chosen[r] != 0 means resource r is bought. Hot path
// of the exact searches: unlike feasible(), zero-cost resources count only
// when the caller marks them.
bool feasible_binary(const GameInstance& g, Coalition c, const std::vector<char>& chosen);

// Whether some purchase between `fixed` and `available` (fixed is a subset)
// satisfies c. Equals feasible_binary(available) for the monotone families.
bool completable(const GameInstance& g, Coalition c, const std::vector<char>& fixed,
                 const std::vector<char>& available);

// NONBINARY_VC: units[r] purchased units, unbounded[r] for free vertices.
bool feasible_units(const GameInstance& g, Coalition c, const std::vector<long>& units,
                    const std::vector<bool>& unbounded);

constexpr std::size_t kDefaultPathCap = 100000;

// Simple S_k -> T_k paths of a CUTTING player, as edge index lists in path
// order. Paths stop at the first target vertex and never revisit a source, so
// the result is the minimal path system. Start vertices and neighbours are
// explored in label order. Throws kPathLimitExceeded past `cap`.
std::vector<std::vector<int>> enumerate_paths(const GameInstance& g, int player,
                                              std::size_t cap = kDefaultPathCap);

// Family LP relaxation with player-owned rows. Variable labels:
//   covering families, CUTTING: one x per resource, labelled by resource
//   UFL: y per facility and x per connection, labelled by resource
//   CCRFL: one z per (facility, nonempty allowed set), "f{t1,t2}"
//   CONNECTION, TERMINAL_BACKUP: y per edge (resource label) and flow
//   variables "flow:<player>:<edge>:<u>><v>", two arcs per undirected edge
LinearProgram build_lp(const GameInstance& g, std::size_t path_cap = kDefaultPathCap);

// Player k's share of the LP dual objective: sum over rows owned by k of
// rhs * dual.
std::vector<Rational> dual_shares(const LinearProgram& lp, const LpOutcome& out, int num_players);

}  // namespace costshare
