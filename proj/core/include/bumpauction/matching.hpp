#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bumpauction/types.hpp"

namespace bump {

// True when every bidder in the list can be assigned a distinct slot from
// its choice set.
bool can_match(const std::vector<Bidder>& bidders,
               const std::vector<std::string>& slots);

struct MatchingResult {
  double weight = 0.0;
  std::vector<std::string> matched;               // bidder ids, ascending
  std::map<std::string, std::string> assignment;  // slot -> bidder id
};

// Sum of bids over ids, accumulated in ascending id order so that equal id
// sets always produce bit-identical totals.
double canonical_weight(const std::vector<Bidder>& bidders,
                        const std::vector<std::string>& ids);

// Maximum total-bid subset of bidders assignable to distinct slots. Weight
// ties are broken toward the lexicographically smallest matched id set.
MatchingResult max_weight_matching(const std::vector<Bidder>& bidders,
                                   const std::vector<std::string>& slots);

// Best matching among those that assign every id in forced; nullopt when no
// such matching exists.
std::optional<MatchingResult> max_weight_matching_including(
    const std::vector<Bidder>& bidders, const std::vector<std::string>& slots,
    const std::vector<std::string>& forced);

// A perfect matching of holders onto slots: holders[k] occupies slots[k].
struct LiveMatch {
  std::vector<std::string> slots;
  std::vector<Bidder> holders;
  std::vector<int> arrival_index;  // 0 for dummy placeholders
};

struct ExchangeResult {
  // Positions (into LiveMatch arrays) of holders exchangeable with the
  // candidate, ascending.
  std::vector<std::size_t> holder_positions;
  // Per slot position: relocation parent slot, -1 for the candidate's own
  // choice slots, -2 for unreachable slots.
  std::vector<int> parent;
};

// Holders that can leave so the candidate fits after relocating others along
// alternating choice edges.
ExchangeResult exchange_set(const LiveMatch& live, const Bidder& candidate);

}  // namespace bump
