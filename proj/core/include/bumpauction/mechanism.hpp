#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bumpauction/matching.hpp"
#include "bumpauction/types.hpp"

namespace bump {

// Live auction state: a perfect matching of holders (arrived bidders plus
// dummy placeholders) onto slots.
struct MatchState {
  MechanismParams params;
  LiveMatch live;

  static MatchState initial(const Scenario& scenario, const MechanismParams& params);
  // Throws InvariantError unless every slot holds exactly one bidder whose
  // choice set contains it.
  void check_perfect() const;
};

struct StepResult {
  bool accepted = false;
  std::optional<Bidder> evicted;  // holder that left, dummy placeholders included
  double payment = 0.0;           // alpha * evicted bid, zero for dummies
  std::vector<SlotMove> moves;    // applied relocations, candidate landing last
};

// Processes one arrival: evict the cheapest exchangeable holder when the
// candidate's bid covers (1+gamma) times that holder's bid, else reject.
// Acceptance is non-strict: equality accepts.
StepResult step(MatchState& state, const Bidder& candidate, int arrival_index);

struct AllocationResult {
  std::vector<Status> status;  // per arrival position
  std::map<std::string, double> bump_payments;
  std::vector<Event> events;  // accept/reject/bump, dummy evictions included
  MatchState final_state;
};

// Full arrival replay without settlement pricing.
AllocationResult run_allocation(const Scenario& scenario, const MechanismParams& params);

// Lowest bid at which the arrival at this position would be accepted,
// given the actual prefix before it.
double acceptance_weight(const Scenario& scenario, const MechanismParams& params,
                         std::size_t position);

struct Thresholds {
  double ac = 0.0;  // minimum accepted bid
  double sv = 0.0;  // minimum surviving bid
  // False when the counterfactual scan saw survival fail above a lower
  // surviving bid; diagnostic only.
  bool upward_closed = true;
};

// Bids at which this bidder's replay outcome can flip: every other bid
// scaled by 1, 1/(1+gamma) and (1+gamma), plus zero, sorted and deduplicated.
std::vector<double> survival_break_points(const Scenario& scenario,
                                          const MechanismParams& params,
                                          std::size_t position);

// Minimum surviving bid, found by replaying the whole scenario with this
// bidder's bid swapped to probes between the break points.
Thresholds survival_weight(const Scenario& scenario, const MechanismParams& params,
                           std::size_t position);

Thresholds thresholds_of(const Scenario& scenario, const MechanismParams& params,
                         std::size_t position);

// Survivor price: sv when the acceptance and survival thresholds coincide,
// (1 - alpha) * sv when survival is the binding one.
double price_of(const Thresholds& thresholds, const MechanismParams& params);

// Full mechanism: allocation replay plus survivor pricing and settle events.
Outcome run(const Scenario& scenario, const MechanismParams& params);

struct SettlementReport {
  std::map<std::string, double> prices;
  std::map<std::string, double> refunds;
  std::map<std::string, double> utilities;
  double revenue = 0.0;
  double effective_efficiency = 0.0;  // survivor bid total - alpha * bumped bid total
  double total_utility = 0.0;
  double survivor_bid_total = 0.0;
  double bumped_bid_total = 0.0;
  double survival_threshold_total = 0.0;  // sum of sv over survivors
};

SettlementReport settle(const Scenario& scenario, const MechanismParams& params,
                        const Outcome& outcome);

}  // namespace bump
