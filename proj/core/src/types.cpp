#include "bumpauction/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace bump {

void MechanismParams::validate() const {
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw ValidationError("gamma must be a finite positive number");
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw ValidationError("alpha must be a finite positive number");
  if (alpha >= gamma / (1.0 + gamma))
    throw ValidationError("alpha must be below gamma/(1+gamma)");
}

std::string to_string(BidderKind kind) {
  switch (kind) {
    case BidderKind::actual: return "actual";
    case BidderKind::speculator: return "speculator";
    case BidderKind::dummy: return "dummy";
  }
  throw InvariantError("unknown bidder kind");
}

BidderKind bidder_kind_from_string(const std::string& text) {
  if (text == "actual") return BidderKind::actual;
  if (text == "speculator") return BidderKind::speculator;
  if (text == "dummy") return BidderKind::dummy;
  throw ValidationError("unknown bidder kind: " + text);
}

double value_of(const Bidder& bidder) {
  return bidder.true_value ? *bidder.true_value : bidder.bid;
}

void Scenario::validate() const {
  if (slots.empty()) throw ValidationError("scenario needs at least one slot");
  std::unordered_set<std::string> slot_ids;
  for (const auto& slot : slots) {
    if (slot.empty()) throw ValidationError("slot ids must be non-empty");
    if (!slot_ids.insert(slot).second)
      throw ValidationError("duplicate slot id: " + slot);
  }
  if (!std::isfinite(min_bid_epsilon) || min_bid_epsilon <= 0.0)
    throw ValidationError("min_bid_epsilon must be a finite positive number");

  std::unordered_set<std::string> bidder_ids;
  for (const auto& bidder : arrivals) {
    if (bidder.id.empty()) throw ValidationError("bidder ids must be non-empty");
    if (bidder.id.rfind("__dummy", 0) == 0)
      throw ValidationError("bidder id prefix __dummy is reserved: " + bidder.id);
    if (!bidder_ids.insert(bidder.id).second)
      throw ValidationError("duplicate bidder id: " + bidder.id);
    if (bidder.kind == BidderKind::dummy)
      throw ValidationError("dummy bidders are internal and cannot arrive: " + bidder.id);
    if (!std::isfinite(bidder.bid) || bidder.bid < 0.0)
      throw ValidationError("bid must be finite and non-negative: " + bidder.id);
    if (bidder.true_value &&
        (!std::isfinite(*bidder.true_value) || *bidder.true_value < 0.0))
      throw ValidationError("true_value must be finite and non-negative: " + bidder.id);
    if (bidder.choice_set.empty())
      throw ValidationError("choice set must be non-empty: " + bidder.id);
    std::unordered_set<std::string> seen;
    for (const auto& slot : bidder.choice_set) {
      if (!slot_ids.count(slot))
        throw ValidationError("choice set of " + bidder.id + " names unknown slot: " + slot);
      if (!seen.insert(slot).second)
        throw ValidationError("choice set of " + bidder.id + " repeats slot: " + slot);
    }
  }
}

std::size_t Scenario::arrival_position(const std::string& id) const {
  for (std::size_t i = 0; i < arrivals.size(); ++i)
    if (arrivals[i].id == id) return i;
  throw ValidationError("unknown bidder id: " + id);
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::accept: return "ACCEPT";
    case EventKind::reject: return "REJECT";
    case EventKind::bump: return "BUMP";
    case EventKind::settle: return "SETTLE";
  }
  throw InvariantError("unknown event kind");
}

std::string to_string(Status status) {
  switch (status) {
    case Status::rejected: return "rejected";
    case Status::bumped: return "bumped";
    case Status::survivor: return "survivor";
  }
  throw InvariantError("unknown status");
}

Status Outcome::status_of(const std::string& id) const {
  if (std::find(survivors.begin(), survivors.end(), id) != survivors.end())
    return Status::survivor;
  if (std::find(bumped.begin(), bumped.end(), id) != bumped.end())
    return Status::bumped;
  if (std::find(rejected.begin(), rejected.end(), id) != rejected.end())
    return Status::rejected;
  throw ValidationError("bidder not present in outcome: " + id);
}

double utility_of(const Scenario& scenario, const MechanismParams& params,
                  const Outcome& outcome, const std::string& id) {
  const Bidder& bidder = scenario.arrivals[scenario.arrival_position(id)];
  switch (outcome.status_of(id)) {
    case Status::rejected:
      return 0.0;
    case Status::survivor:
      return value_of(bidder) - outcome.prices.at(id);
    case Status::bumped:
      return outcome.bump_payments.at(id) - params.alpha * value_of(bidder);
  }
  throw InvariantError("unknown status");
}

double total_utility(const Scenario& scenario, const MechanismParams& params,
                     const Outcome& outcome) {
  double total = 0.0;
  for (const auto& bidder : scenario.arrivals)
    total += utility_of(scenario, params, outcome, bidder.id);
  return total;
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // collapse -0
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace bump
