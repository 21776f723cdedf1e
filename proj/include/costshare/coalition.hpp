#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace costshare {

// Nonempty subset of player indices, stored as a bitmask (player k <-> bit k).
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}

  static constexpr Coalition all(int num_players) {
    return Coalition(num_players >= 32 ? ~0u : ((1u << num_players) - 1u));
  }
  static constexpr Coalition single(int player) { return Coalition(1u << player); }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool contains(int player) const { return (mask_ >> player) & 1u; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr Coalition without(Coalition other) const { return Coalition(mask_ & ~other.mask_); }
  constexpr Coalition with(int player) const { return Coalition(mask_ | (1u << player)); }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr bool operator==(Coalition a, Coalition b) { return a.mask_ == b.mask_; }

 private:
  std::uint32_t mask_ = 0;
};

// All nonempty coalitions of n players ordered by size, then by the sorted
// member list lexicographically. This is the witness-minimality order.
std::vector<Coalition> coalitions_by_size(int num_players);

}  // namespace costshare
