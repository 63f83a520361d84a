#include "bumpauction/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace bump {
namespace {

Bidder make_dummy(const std::string& slot, const std::vector<std::string>& all_slots) {
  Bidder dummy;
  dummy.id = "__dummy:" + slot;
  dummy.bid = 0.0;
  dummy.true_value = 0.0;
  dummy.choice_set = all_slots;
  dummy.kind = BidderKind::dummy;
  return dummy;
}

// Argmin by (bid, arrival index, id); dummies carry arrival index 0.
std::size_t cheapest_position(const LiveMatch& live,
                              const std::vector<std::size_t>& positions) {
  std::size_t best = positions.front();
  for (std::size_t p : positions) {
    const Bidder& challenger = live.holders[p];
    const Bidder& incumbent = live.holders[best];
    if (challenger.bid != incumbent.bid) {
      if (challenger.bid < incumbent.bid) best = p;
      continue;
    }
    if (live.arrival_index[p] != live.arrival_index[best]) {
      if (live.arrival_index[p] < live.arrival_index[best]) best = p;
      continue;
    }
    if (challenger.id < incumbent.id) best = p;
  }
  return best;
}

}  // namespace

MatchState MatchState::initial(const Scenario& scenario, const MechanismParams& params) {
  scenario.validate();
  params.validate();
  MatchState state;
  state.params = params;
  state.live.slots = scenario.slots;
  for (const auto& slot : scenario.slots) {
    state.live.holders.push_back(make_dummy(slot, scenario.slots));
    state.live.arrival_index.push_back(0);
  }
  return state;
}

void MatchState::check_perfect() const {
  if (live.holders.size() != live.slots.size() ||
      live.arrival_index.size() != live.slots.size())
    throw InvariantError("live match arrays out of sync");
  std::unordered_set<std::string> seen;
  for (std::size_t k = 0; k < live.slots.size(); ++k) {
    const Bidder& holder = live.holders[k];
    if (!seen.insert(holder.id).second)
      throw InvariantError("holder assigned twice: " + holder.id);
    if (std::find(holder.choice_set.begin(), holder.choice_set.end(),
                  live.slots[k]) == holder.choice_set.end())
      throw InvariantError("holder " + holder.id + " sits on slot outside its choice set");
  }
}

StepResult step(MatchState& state, const Bidder& candidate, int arrival_index) {
  StepResult result;
  ExchangeResult exchange = exchange_set(state.live, candidate);
  if (exchange.holder_positions.empty())
    throw InvariantError("empty exchange set for " + candidate.id);

  std::size_t evict = cheapest_position(state.live, exchange.holder_positions);
  if (state.params.accept_factor() * state.live.holders[evict].bid > candidate.bid)
    return result;

  result.accepted = true;
  result.evicted = state.live.holders[evict];
  if (result.evicted->kind != BidderKind::dummy)
    result.payment = state.params.alpha * result.evicted->bid;

  // Shift holders along the relocation chain, candidate entering at the seed.
  std::size_t slot = evict;
  while (exchange.parent[slot] >= 0) {
    std::size_t from = static_cast<std::size_t>(exchange.parent[slot]);
    state.live.holders[slot] = state.live.holders[from];
    state.live.arrival_index[slot] = state.live.arrival_index[from];
    result.moves.push_back({state.live.holders[slot].id, state.live.slots[slot]});
    slot = from;
  }
  state.live.holders[slot] = candidate;
  state.live.arrival_index[slot] = arrival_index;
  result.moves.push_back({candidate.id, state.live.slots[slot]});
  return result;
}

AllocationResult run_allocation(const Scenario& scenario, const MechanismParams& params) {
  AllocationResult result{.status = {}, .bump_payments = {}, .events = {},
                          .final_state = MatchState::initial(scenario, params)};
  result.status.assign(scenario.arrivals.size(), Status::rejected);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i)
    position[scenario.arrivals[i].id] = i;

  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
    const Bidder& candidate = scenario.arrivals[i];
    const int t = static_cast<int>(i) + 1;
    StepResult stepped = step(result.final_state, candidate, t);
    if (!stepped.accepted) {
      result.events.push_back({t, EventKind::reject, candidate.id, {}, {}, {}});
      continue;
    }
    result.status[i] = Status::survivor;
    result.events.push_back(
        {t, EventKind::accept, candidate.id, {}, {}, stepped.moves});
    const Bidder& evicted = *stepped.evicted;
    result.events.push_back(
        {t, EventKind::bump, evicted.id, candidate.id, stepped.payment, {}});
    if (evicted.kind != BidderKind::dummy) {
      result.status[position.at(evicted.id)] = Status::bumped;
      result.bump_payments[evicted.id] = stepped.payment;
    }
    result.final_state.check_perfect();
  }
  return result;
}

double acceptance_weight(const Scenario& scenario, const MechanismParams& params,
                         std::size_t position) {
  if (position >= scenario.arrivals.size())
    throw ValidationError("arrival position out of range");
  MatchState state = MatchState::initial(scenario, params);
  for (std::size_t i = 0; i < position; ++i)
    step(state, scenario.arrivals[i], static_cast<int>(i) + 1);
  ExchangeResult exchange = exchange_set(state.live, scenario.arrivals[position]);
  if (exchange.holder_positions.empty())
    throw InvariantError("empty exchange set for " + scenario.arrivals[position].id);
  std::size_t evict = cheapest_position(state.live, exchange.holder_positions);
  return params.accept_factor() * state.live.holders[evict].bid;
}

namespace {

bool survives_with_bid(const Scenario& scenario, const MechanismParams& params,
                       std::size_t position, double bid) {
  Scenario probe = scenario;
  probe.arrivals[position].bid = bid;
  AllocationResult alloc = run_allocation(probe, params);
  return alloc.status[position] == Status::survivor;
}

}  // namespace

std::vector<double> survival_break_points(const Scenario& scenario,
                                          const MechanismParams& params,
                                          std::size_t position) {
  if (position >= scenario.arrivals.size())
    throw ValidationError("arrival position out of range");
  std::vector<double> cuts{0.0};
  double max_other = 0.0;
  for (std::size_t j = 0; j < scenario.arrivals.size(); ++j) {
    if (j == position) continue;
    const double w = scenario.arrivals[j].bid;
    cuts.push_back(w);
    cuts.push_back(w / params.accept_factor());
    cuts.push_back(params.accept_factor() * w);
    max_other = std::max(max_other, w);
  }
  cuts.push_back(params.accept_factor() * max_other);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

Thresholds survival_weight(const Scenario& scenario, const MechanismParams& params,
                           std::size_t position) {
  if (position >= scenario.arrivals.size())
    throw ValidationError("arrival position out of range");
  params.validate();
  const std::vector<double> cuts = survival_break_points(scenario, params, position);

  Thresholds thresholds;
  thresholds.ac = acceptance_weight(scenario, params, position);
  bool found = false;
  double sv = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double probe = cuts[k] + (cuts[k + 1] - cuts[k]) / 2.0;
    const bool alive = survives_with_bid(scenario, params, position, probe);
    if (alive && !found) {
      found = true;
      sv = cuts[k];
    } else if (!alive && found) {
      thresholds.upward_closed = false;
    }
  }
  const bool top = survives_with_bid(scenario, params, position, cuts.back() + 1.0);
  if (!top && found) thresholds.upward_closed = false;
  if (!found) {
    if (!top)
      throw InvariantError("no surviving bid found for " +
                           scenario.arrivals[position].id);
    sv = cuts.back();
  }
  thresholds.sv = sv;
  if (thresholds.sv < thresholds.ac)
    throw InvariantError("survival threshold below acceptance threshold for " +
                         scenario.arrivals[position].id);
  return thresholds;
}

Thresholds thresholds_of(const Scenario& scenario, const MechanismParams& params,
                         std::size_t position) {
  return survival_weight(scenario, params, position);
}

double price_of(const Thresholds& thresholds, const MechanismParams& params) {
  if (thresholds.sv < thresholds.ac)
    throw InvariantError("survival threshold below acceptance threshold");
  if (thresholds.ac == thresholds.sv) return thresholds.sv;
  return (1.0 - params.alpha) * thresholds.sv;
}

Outcome run(const Scenario& scenario, const MechanismParams& params) {
  AllocationResult alloc = run_allocation(scenario, params);
  Outcome outcome;
  outcome.events = std::move(alloc.events);
  outcome.bump_payments = std::move(alloc.bump_payments);
  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
    const std::string& id = scenario.arrivals[i].id;
    switch (alloc.status[i]) {
      case Status::survivor: outcome.survivors.push_back(id); break;
      case Status::bumped: outcome.bumped.push_back(id); break;
      case Status::rejected: outcome.rejected.push_back(id); break;
    }
  }
  const LiveMatch& live = alloc.final_state.live;
  for (std::size_t k = 0; k < live.slots.size(); ++k)
    if (live.holders[k].kind != BidderKind::dummy)
      outcome.final_assignment[live.slots[k]] = live.holders[k].id;

  const int settle_time = static_cast<int>(scenario.arrivals.size()) + 1;
  for (const auto& id : outcome.survivors) {
    Thresholds thresholds =
        thresholds_of(scenario, params, scenario.arrival_position(id));
    const double price = price_of(thresholds, params);
    outcome.prices[id] = price;
    outcome.events.push_back({settle_time, EventKind::settle, id, {}, price, {}});
  }
  return outcome;
}

SettlementReport settle(const Scenario& scenario, const MechanismParams& params,
                        const Outcome& outcome) {
  SettlementReport report;
  report.prices = outcome.prices;
  report.refunds = outcome.bump_payments;
  for (const auto& [id, price] : report.prices) report.revenue += price;
  for (const auto& [id, refund] : report.refunds) report.revenue -= refund;
  for (const auto& bidder : scenario.arrivals) {
    report.utilities[bidder.id] = utility_of(scenario, params, outcome, bidder.id);
    report.total_utility += report.utilities[bidder.id];
  }
  for (const auto& id : outcome.survivors) {
    report.survivor_bid_total += scenario.arrivals[scenario.arrival_position(id)].bid;
    report.survival_threshold_total +=
        thresholds_of(scenario, params, scenario.arrival_position(id)).sv;
  }
  for (const auto& id : outcome.bumped)
    report.bumped_bid_total += scenario.arrivals[scenario.arrival_position(id)].bid;
  report.effective_efficiency =
      report.survivor_bid_total - params.alpha * report.bumped_bid_total;
  return report;
}

}  // namespace bump
