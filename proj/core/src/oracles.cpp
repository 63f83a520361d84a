#include "bumpauction/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bump {
namespace {

constexpr double kRelTol = 1e-9;

bool leq_tol(double lhs, double rhs) {
  return lhs <= rhs + kRelTol * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

bool close_tol(double a, double b) {
  return std::fabs(a - b) <= kRelTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

MatchingResult brute_force_opt(const std::vector<Bidder>& bidders,
                               const std::vector<std::string>& slots) {
  if (bidders.size() > 12)
    throw ValidationError("exhaustive optimum limited to 12 bidders");
  const std::size_t n = bidders.size();
  double best_weight = 0.0;
  std::vector<std::string> best_ids;
  bool have = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Bidder> subset;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t{1} << b)) subset.push_back(bidders[b]);
    if (subset.size() > slots.size() || !can_match(subset, slots)) continue;
    std::vector<std::string> ids;
    for (const auto& bidder : subset) ids.push_back(bidder.id);
    std::sort(ids.begin(), ids.end());
    const double weight = canonical_weight(bidders, ids);
    const double scale = std::max({1.0, std::fabs(weight), std::fabs(best_weight)});
    if (!have || weight > best_weight + 1e-12 * scale ||
        (std::fabs(weight - best_weight) <= 1e-12 * scale && ids < best_ids)) {
      have = true;
      best_weight = weight;
      best_ids = ids;
    }
  }
  MatchingResult result;
  result.matched = best_ids;
  result.weight = canonical_weight(bidders, best_ids);
  std::vector<Bidder> chosen;
  for (const auto& bidder : bidders)
    if (std::find(best_ids.begin(), best_ids.end(), bidder.id) != best_ids.end())
      chosen.push_back(bidder);
  if (auto constrained = max_weight_matching_including(chosen, slots, best_ids))
    result.assignment = constrained->assignment;
  return result;
}

VcgResult vcg(const std::vector<Bidder>& bidders,
              const std::vector<std::string>& slots) {
  VcgResult result;
  if (bidders.empty()) return result;
  result.allocation = max_weight_matching(bidders, slots);
  const double opt_weight = result.allocation.weight;
  for (const auto& winner : result.allocation.matched) {
    std::vector<Bidder> others;
    double winner_bid = 0.0;
    for (const auto& bidder : bidders) {
      if (bidder.id == winner)
        winner_bid = bidder.bid;
      else
        others.push_back(bidder);
    }
    const double without = max_weight_matching(others, slots).weight;
    double payment = without - (opt_weight - winner_bid);
    if (payment < 0.0) {
      if (payment < -1e-9 * std::max(1.0, opt_weight))
        throw InvariantError("negative externality payment for " + winner);
      payment = 0.0;
    }
    result.payments[winner] = payment;
    result.revenue += payment;
  }
  return result;
}

std::map<std::string, double> tilde_weights(const Scenario& scenario,
                                            const MechanismParams& params,
                                            const Outcome& outcome) {
  std::map<std::string, double> weights;
  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
    const Bidder& bidder = scenario.arrivals[i];
    if (outcome.status_of(bidder.id) == Status::survivor)
      weights[bidder.id] = thresholds_of(scenario, params, i).sv;
    else
      weights[bidder.id] = bidder.bid / params.accept_factor();
  }
  return weights;
}

bool survivors_in_reweighted_opt(const Scenario& scenario,
                                 const MechanismParams& params,
                                 const Outcome& outcome, std::string* detail) {
  const auto weights = tilde_weights(scenario, params, outcome);
  std::vector<Bidder> reweighted = scenario.arrivals;
  for (auto& bidder : reweighted) bidder.bid = weights.at(bidder.id);
  const double best = max_weight_matching(reweighted, scenario.slots).weight;
  for (const auto& id : outcome.survivors) {
    auto constrained =
        max_weight_matching_including(reweighted, scenario.slots, {id});
    if (!constrained || !close_tol(constrained->weight, best)) {
      if (detail)
        *detail = "survivor " + id + " outside every reweighted optimum (" +
                  fmt(constrained ? constrained->weight : -1.0) + " vs " +
                  fmt(best) + ")";
      return false;
    }
  }
  return true;
}

bool OutcomeChecks::all_ok() const {
  for (const auto& item : items)
    if (!item.ok) return false;
  return true;
}

std::string OutcomeChecks::first_failure() const {
  for (const auto& item : items)
    if (!item.ok)
      return item.name + " (lhs=" + fmt(item.lhs) + ", rhs=" + fmt(item.rhs) + ")";
  return {};
}

OutcomeChecks check_outcomes_impl(const Scenario& scenario,
                                  const MechanismParams& params,
                                  const Outcome& outcome) {
  OutcomeChecks checks;
  const SettlementReport report = settle(scenario, params, outcome);
  const double gamma = params.gamma;
  const double alpha = params.alpha;

  auto push_leq = [&](const std::string& name, double lhs, double rhs) {
    checks.items.push_back({name, leq_tol(lhs, rhs), lhs, rhs});
  };

  push_leq("refund_weight_vs_threshold_total", report.bumped_bid_total,
           report.survival_threshold_total / gamma);
  push_leq("threshold_total_vs_survivor_weight", report.survival_threshold_total,
           report.survivor_bid_total);

  const double opt_bids =
      max_weight_matching(scenario.arrivals, scenario.slots).weight;
  push_leq("optimum_vs_survivor_weight", opt_bids,
           params.accept_factor() * report.survivor_bid_total);
  push_leq("effective_efficiency_floor",
           opt_bids * (1.0 - alpha / gamma) / params.accept_factor(),
           report.effective_efficiency);

  std::string detail;
  const bool contained =
      survivors_in_reweighted_opt(scenario, params, outcome, &detail);
  checks.items.push_back({"survivors_in_reweighted_optimum", contained, 0.0, 0.0});

  bool bids_cover_values = true;
  for (const auto& bidder : scenario.arrivals)
    if (bidder.bid < value_of(bidder) - 1e-12) bids_cover_values = false;

  const VcgResult reference = vcg(scenario.arrivals, scenario.slots);
  push_leq("threshold_total_vs_reference_revenue",
           reference.revenue / params.accept_factor(),
           report.survival_threshold_total);

  if (bids_cover_values) {
    const double spread = 1.0 - alpha - alpha / gamma;
    push_leq("revenue_floor", spread / params.accept_factor() * reference.revenue,
             report.revenue);
    if (report.total_utility >= -1e-9) {
      std::vector<Bidder> by_value = scenario.arrivals;
      for (auto& bidder : by_value) bidder.bid = value_of(bidder);
      const double opt_values =
          max_weight_matching(by_value, scenario.slots).weight;
      double survivor_value_total = 0.0;
      for (const auto& id : outcome.survivors)
        survivor_value_total +=
            value_of(scenario.arrivals[scenario.arrival_position(id)]);
      push_leq("welfare_floor",
               spread / ((1.0 + spread) * params.accept_factor()) * opt_values,
               survivor_value_total);
    }
  }
  return checks;
}

OutcomeChecks check_outcome_bounds(const Scenario& scenario,
                                   const MechanismParams& params,
                                   const Outcome& outcome) {
  return check_outcomes_impl(scenario, params, outcome);
}

DeficitComparison deficit_compare(const Scenario& scenario,
                                  const MechanismParams& params) {
  const Outcome outcome = run(scenario, params);
  const SettlementReport report = settle(scenario, params, outcome);
  DeficitComparison comparison;
  comparison.revenue_shipped = report.revenue;
  double price_total = 0.0;
  for (const auto& [id, price] : outcome.prices) price_total += price;
  double variant_refunds = 0.0;
  for (const auto& id : outcome.bumped)
    variant_refunds +=
        params.alpha *
        thresholds_of(scenario, params, scenario.arrival_position(id)).sv;
  comparison.revenue_threshold_refund = price_total - variant_refunds;
  return comparison;
}

Scenario random_scenario(std::mt19937_64& rng, const RandomInstanceOptions& options) {
  Scenario scenario;
  std::uniform_int_distribution<int> slot_count(1, options.max_slots);
  std::uniform_int_distribution<int> bidder_count(1, options.max_bidders);
  const int slots = slot_count(rng);
  for (int s = 1; s <= slots; ++s) scenario.slots.push_back("s" + std::to_string(s));

  std::uniform_real_distribution<double> bid(options.min_bid, options.max_bid);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> pick(0, slots - 1);
  const int bidders = bidder_count(rng);
  for (int b = 1; b <= bidders; ++b) {
    Bidder bidder;
    bidder.id = (b < 10 ? "b0" : "b") + std::to_string(b);
    bidder.bid = bid(rng);
    for (const auto& slot : scenario.slots)
      if (coin(rng)) bidder.choice_set.push_back(slot);
    if (bidder.choice_set.empty())
      bidder.choice_set.push_back(scenario.slots[pick(rng)]);
    if (!options.truthful) bidder.true_value = bid(rng);
    scenario.arrivals.push_back(std::move(bidder));
  }
  scenario.validate();
  return scenario;
}

MechanismParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gamma_draw(0.3, 3.0);
  std::uniform_real_distribution<double> share(0.05, 0.9);
  MechanismParams params;
  params.gamma = gamma_draw(rng);
  params.alpha = share(rng) * params.gamma / (1.0 + params.gamma);
  params.validate();
  return params;
}

namespace {

double utility_with_bid(const Scenario& scenario, const MechanismParams& params,
                        std::size_t position, double bid,
                        const Thresholds& thresholds) {
  Scenario probe = scenario;
  probe.arrivals[position].bid = bid;
  const AllocationResult alloc = run_allocation(probe, params);
  const double value = value_of(scenario.arrivals[position]);
  switch (alloc.status[position]) {
    case Status::rejected: return 0.0;
    case Status::bumped: return params.alpha * bid - params.alpha * value;
    case Status::survivor: return value - price_of(thresholds, params);
  }
  throw InvariantError("unknown status");
}

}  // namespace

std::vector<std::string> check_instance(const Scenario& scenario,
                                        const MechanismParams& params,
                                        const std::string& label) {
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what) { failures.push_back(label + ": " + what); };

  Outcome outcome;
  try {
    outcome = run(scenario, params);
  } catch (const std::exception& error) {
    fail(std::string("run threw: ") + error.what());
    return failures;
  }

  // Partition: every arrival lands in exactly one status set.
  if (outcome.survivors.size() + outcome.bumped.size() + outcome.rejected.size() !=
      scenario.arrivals.size())
    fail("status sets do not partition the arrivals");
  for (const auto& bidder : scenario.arrivals) {
    try {
      outcome.status_of(bidder.id);
    } catch (const std::exception&) {
      fail("bidder missing from all status sets: " + bidder.id);
    }
  }
  if (outcome.final_assignment.size() != outcome.survivors.size())
    fail("final assignment does not cover exactly the survivors");

  // Refund identity: exact product, no rounding slack.
  for (const auto& [id, payment] : outcome.bump_payments) {
    const double expected =
        params.alpha * scenario.arrivals[scenario.arrival_position(id)].bid;
    if (payment != expected) fail("refund is not exactly alpha*bid for " + id);
  }

  // Event ordering: a bidder's bump strictly follows its accept.
  std::map<std::string, int> accepted_at;
  for (const auto& event : outcome.events)
    if (event.kind == EventKind::accept) accepted_at[event.bidder] = event.time;
  for (const auto& event : outcome.events) {
    if (event.kind != EventKind::bump) continue;
    if (event.bidder.rfind("__dummy", 0) == 0) continue;
    auto it = accepted_at.find(event.bidder);
    if (it == accepted_at.end() || event.time <= it->second)
      fail("bump event not strictly after accept for " + event.bidder);
  }

  std::vector<Thresholds> thresholds(scenario.arrivals.size());
  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
    try {
      thresholds[i] = thresholds_of(scenario, params, i);
    } catch (const std::exception& error) {
      fail(std::string("thresholds threw: ") + error.what());
      return failures;
    }
    const Bidder& bidder = scenario.arrivals[i];
    if (thresholds[i].ac > thresholds[i].sv)
      fail("acceptance threshold above survival threshold for " + bidder.id);
    if (!thresholds[i].upward_closed)
      fail("survival not upward closed in own bid for " + bidder.id);

    const double guard = 1e-9 * std::max(1.0, bidder.bid);
    const Status status = outcome.status_of(bidder.id);
    if (bidder.bid < thresholds[i].ac - guard && status != Status::rejected)
      fail("bid below acceptance threshold not rejected: " + bidder.id);
    if (bidder.bid > thresholds[i].ac + guard &&
        bidder.bid < thresholds[i].sv - guard && status != Status::bumped)
      fail("bid between thresholds not bumped: " + bidder.id);
    if (bidder.bid > thresholds[i].sv + guard && status != Status::survivor)
      fail("bid above survival threshold not surviving: " + bidder.id);

    // Individual rationality under truthful bids; bumped utility is exactly 0.
    if (bidder.bid == value_of(bidder)) {
      const double utility = utility_of(scenario, params, outcome, bidder.id);
      if (utility < -1e-9) fail("negative truthful utility for " + bidder.id);
      if (status == Status::bumped && utility != 0.0)
        fail("bumped truthful utility not exactly zero for " + bidder.id);
    }
  }

  OutcomeChecks checks = check_outcome_bounds(scenario, params, outcome);
  if (!checks.all_ok()) fail("outcome bound failed: " + checks.first_failure());

  // Reference auction structure.
  const VcgResult reference = vcg(scenario.arrivals, scenario.slots);
  for (const auto& [winner, payment] : reference.payments) {
    bool matches = payment <= 1e-9;
    for (const auto& bidder : scenario.arrivals) {
      if (std::find(reference.allocation.matched.begin(),
                    reference.allocation.matched.end(),
                    bidder.id) != reference.allocation.matched.end())
        continue;
      if (close_tol(payment, bidder.bid)) matches = true;
    }
    if (!matches) fail("externality payment is not a losing bid for " + winner);
  }
  {
    std::vector<Bidder> raised = scenario.arrivals;
    raised.front().bid *= 1.5;
    const VcgResult after = vcg(raised, scenario.slots);
    if (after.revenue < reference.revenue - 1e-9 * std::max(1.0, reference.revenue))
      fail("reference revenue fell after a bid increase");
  }
  for (const auto& winner : reference.allocation.matched) {
    for (const auto& removed : scenario.arrivals) {
      if (removed.id == winner) continue;
      std::vector<Bidder> rest;
      for (const auto& bidder : scenario.arrivals)
        if (bidder.id != removed.id) rest.push_back(bidder);
      const double best = max_weight_matching(rest, scenario.slots).weight;
      auto forced = max_weight_matching_including(rest, scenario.slots, {winner});
      if (!forced || !close_tol(forced->weight, best))
        fail("optimum member " + winner + " drops out after removing " + removed.id);
    }
  }

  // Underbidding never beats the truthful bid.
  const std::size_t sweep_limit = std::min<std::size_t>(2, scenario.arrivals.size());
  for (std::size_t i = 0; i < sweep_limit; ++i) {
    const Bidder& bidder = scenario.arrivals[i];
    if (bidder.bid != value_of(bidder)) continue;
    const double truthful = utility_of(scenario, params, outcome, bidder.id);
    const auto cuts = survival_break_points(scenario, params, i);
    std::vector<double> probes;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      probes.push_back(cuts[k]);
      if (k + 1 < cuts.size()) probes.push_back(cuts[k] + (cuts[k + 1] - cuts[k]) / 2.0);
    }
    for (double probe : probes) {
      if (probe >= value_of(bidder) - 1e-9) continue;
      const double shaded = utility_with_bid(scenario, params, i, probe, thresholds[i]);
      if (shaded > truthful + 1e-9)
        fail("underbid " + fmt(probe) + " beats truthful bid for " + bidder.id);
    }
  }

  return failures;
}

VerifyReport verify_random(std::uint64_t seed, int count) {
  if (count <= 0) throw ValidationError("instance count must be positive");
  VerifyReport report;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const MechanismParams params = random_params(rng);
    const Scenario scenario = random_scenario(rng, RandomInstanceOptions{});
    std::ostringstream label;
    label << "seed=" << seed << " instance=" << k;
    auto failures = check_instance(scenario, params, label.str());
    report.instances += 1;
    report.checks += 9;
    for (auto& failure : failures) report.failures.push_back(std::move(failure));
  }
  return report;
}

}  // namespace bump
