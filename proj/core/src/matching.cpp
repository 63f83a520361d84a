#include "bumpauction/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace bump {
namespace {

std::unordered_map<std::string, int> index_slots(const std::vector<std::string>& slots) {
  std::unordered_map<std::string, int> index;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!index.emplace(slots[k], static_cast<int>(k)).second)
      throw ValidationError("duplicate slot id: " + slots[k]);
  }
  return index;
}

std::vector<std::vector<int>> build_adjacency(
    const std::vector<Bidder>& bidders,
    const std::unordered_map<std::string, int>& slot_index) {
  std::vector<std::vector<int>> adj(bidders.size());
  for (std::size_t b = 0; b < bidders.size(); ++b) {
    adj[b].reserve(bidders[b].choice_set.size());
    for (const auto& slot : bidders[b].choice_set) {
      auto it = slot_index.find(slot);
      if (it == slot_index.end())
        throw ValidationError("choice set of " + bidders[b].id +
                              " names unknown slot: " + slot);
      adj[b].push_back(it->second);
    }
    std::sort(adj[b].begin(), adj[b].end());
  }
  return adj;
}

// Incremental Kuhn matching: insert() finds an augmenting path for one bidder
// and mutates slot_owner only when a path exists.
struct Augmenter {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> slot_owner;
  std::vector<char> visited;

  Augmenter(const std::vector<std::vector<int>>& adjacency, std::size_t n_slots)
      : adj(adjacency), slot_owner(n_slots, -1), visited(n_slots, 0) {}

  bool try_path(int bidder) {
    for (int slot : adj[bidder]) {
      if (visited[slot]) continue;
      visited[slot] = 1;
      if (slot_owner[slot] < 0 || try_path(slot_owner[slot])) {
        slot_owner[slot] = bidder;
        return true;
      }
    }
    return false;
  }

  bool insert(int bidder) {
    std::fill(visited.begin(), visited.end(), 0);
    return try_path(bidder);
  }
};

std::vector<std::size_t> greedy_order(const std::vector<Bidder>& bidders) {
  std::vector<std::size_t> order(bidders.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bidders[a].bid != bidders[b].bid) return bidders[a].bid > bidders[b].bid;
    return bidders[a].id < bidders[b].id;
  });
  return order;
}

void check_unique_ids(const std::vector<Bidder>& bidders) {
  std::unordered_map<std::string, int> seen;
  for (const auto& bidder : bidders)
    if (!seen.emplace(bidder.id, 1).second)
      throw ValidationError("duplicate bidder id: " + bidder.id);
}

// Greedy max-weight completion over an independence oracle: forced members
// first (nullopt when they do not fit), then remaining bidders in weight
// order. Returns matched bidder indices plus the slot assignment.
struct GreedyOutcome {
  std::vector<std::size_t> matched;
  std::vector<int> slot_owner;
};

std::optional<GreedyOutcome> greedy_matching(
    const std::vector<Bidder>& bidders, std::size_t n_slots,
    const std::vector<std::vector<int>>& adj,
    const std::vector<std::size_t>& forced) {
  Augmenter augmenter(adj, n_slots);
  std::vector<char> taken(bidders.size(), 0);
  GreedyOutcome out;
  for (std::size_t b : forced) {
    if (!augmenter.insert(static_cast<int>(b))) return std::nullopt;
    taken[b] = 1;
    out.matched.push_back(b);
  }
  for (std::size_t b : greedy_order(bidders)) {
    if (taken[b]) continue;
    if (augmenter.insert(static_cast<int>(b))) out.matched.push_back(b);
  }
  out.slot_owner = std::move(augmenter.slot_owner);
  return out;
}

MatchingResult to_result(const std::vector<Bidder>& bidders,
                         const std::vector<std::string>& slots,
                         const GreedyOutcome& greedy) {
  MatchingResult result;
  for (std::size_t b : greedy.matched) result.matched.push_back(bidders[b].id);
  std::sort(result.matched.begin(), result.matched.end());
  result.weight = canonical_weight(bidders, result.matched);
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (greedy.slot_owner[s] >= 0)
      result.assignment[slots[s]] = bidders[greedy.slot_owner[s]].id;
  return result;
}

bool weights_tie(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

bool can_match(const std::vector<Bidder>& bidders,
               const std::vector<std::string>& slots) {
  if (bidders.size() > slots.size()) return false;
  auto slot_index = index_slots(slots);
  auto adj = build_adjacency(bidders, slot_index);
  Augmenter augmenter(adj, slots.size());
  for (std::size_t b = 0; b < bidders.size(); ++b)
    if (!augmenter.insert(static_cast<int>(b))) return false;
  return true;
}

double canonical_weight(const std::vector<Bidder>& bidders,
                        const std::vector<std::string>& ids) {
  std::unordered_map<std::string, double> bid_of;
  for (const auto& bidder : bidders) bid_of[bidder.id] = bidder.bid;
  std::vector<std::string> sorted(ids);
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (const auto& id : sorted) {
    auto it = bid_of.find(id);
    if (it == bid_of.end()) throw ValidationError("unknown bidder id: " + id);
    total += it->second;
  }
  return total;
}

MatchingResult max_weight_matching(const std::vector<Bidder>& bidders,
                                   const std::vector<std::string>& slots) {
  auto result = max_weight_matching_including(bidders, slots, {});
  if (!result) throw InvariantError("unconstrained matching reported infeasible");
  return *result;
}

std::optional<MatchingResult> max_weight_matching_including(
    const std::vector<Bidder>& bidders, const std::vector<std::string>& slots,
    const std::vector<std::string>& forced) {
  check_unique_ids(bidders);
  auto slot_index = index_slots(slots);
  auto adj = build_adjacency(bidders, slot_index);

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t b = 0; b < bidders.size(); ++b) position[bidders[b].id] = b;
  std::vector<std::size_t> forced_positions;
  std::vector<char> is_forced(bidders.size(), 0);
  for (const auto& id : forced) {
    auto it = position.find(id);
    if (it == position.end()) throw ValidationError("unknown bidder id: " + id);
    if (is_forced[it->second]) continue;
    is_forced[it->second] = 1;
    forced_positions.push_back(it->second);
  }

  auto best = greedy_matching(bidders, slots.size(), adj, forced_positions);
  if (!best) return std::nullopt;
  std::vector<std::string> best_ids;
  for (std::size_t b : best->matched) best_ids.push_back(bidders[b].id);
  std::sort(best_ids.begin(), best_ids.end());
  const double best_weight = canonical_weight(bidders, best_ids);

  // Pin the tie-break: force bidders in ascending id order, keeping each one
  // only if an optimum-weight matching through the grown set still exists.
  std::vector<std::size_t> by_id(bidders.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return bidders[a].id < bidders[b].id;
  });

  std::vector<std::size_t> pinned = forced_positions;
  std::vector<std::string> pinned_ids;
  for (std::size_t p : pinned) pinned_ids.push_back(bidders[p].id);
  std::sort(pinned_ids.begin(), pinned_ids.end());
  for (std::size_t b : by_id) {
    // Once the pinned set alone reaches optimum weight it is a prefix of
    // every further extension, so it is the lex-min winner set already.
    if (weights_tie(canonical_weight(bidders, pinned_ids), best_weight)) break;
    if (is_forced[b]) continue;
    auto trial = pinned;
    trial.push_back(b);
    auto attempt = greedy_matching(bidders, slots.size(), adj, trial);
    if (!attempt) continue;
    std::vector<std::string> ids;
    for (std::size_t m : attempt->matched) ids.push_back(bidders[m].id);
    std::sort(ids.begin(), ids.end());
    if (weights_tie(canonical_weight(bidders, ids), best_weight)) {
      pinned = std::move(trial);
      pinned_ids.insert(
          std::upper_bound(pinned_ids.begin(), pinned_ids.end(), bidders[b].id),
          bidders[b].id);
    }
  }

  // The answer is exactly the pinned set: rerun the assignment with it forced
  // and drop any greedy extras the completion pulled in.
  auto completion = greedy_matching(bidders, slots.size(), adj, pinned);
  if (!completion) throw InvariantError("pinned matching became infeasible");
  std::vector<char> keep(bidders.size(), 0);
  for (std::size_t p : pinned) keep[p] = 1;
  GreedyOutcome chosen;
  chosen.matched = pinned;
  chosen.slot_owner.assign(slots.size(), -1);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    int owner = completion->slot_owner[s];
    if (owner >= 0 && keep[static_cast<std::size_t>(owner)])
      chosen.slot_owner[s] = owner;
  }
  return to_result(bidders, slots, chosen);
}

ExchangeResult exchange_set(const LiveMatch& live, const Bidder& candidate) {
  if (live.holders.size() != live.slots.size() ||
      live.arrival_index.size() != live.slots.size())
    throw InvariantError("live match arrays out of sync");
  auto slot_index = index_slots(live.slots);

  ExchangeResult result;
  result.parent.assign(live.slots.size(), -2);
  std::deque<int> frontier;
  for (const auto& slot : candidate.choice_set) {
    auto it = slot_index.find(slot);
    if (it == slot_index.end())
      throw ValidationError("choice set of " + candidate.id +
                            " names unknown slot: " + slot);
    if (result.parent[it->second] == -2) {
      result.parent[it->second] = -1;
      frontier.push_back(it->second);
    }
  }
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    result.holder_positions.push_back(static_cast<std::size_t>(u));
    for (const auto& slot : live.holders[u].choice_set) {
      auto it = slot_index.find(slot);
      if (it == slot_index.end())
        throw InvariantError("holder " + live.holders[u].id +
                             " references unknown slot: " + slot);
      if (result.parent[it->second] == -2) {
        result.parent[it->second] = u;
        frontier.push_back(it->second);
      }
    }
  }
  std::sort(result.holder_positions.begin(), result.holder_positions.end());
  return result;
}

}  // namespace bump
