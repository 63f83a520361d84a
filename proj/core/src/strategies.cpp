#include "bumpauction/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bumpauction/matching.hpp"

namespace bump {

std::vector<double> geometric_bids(double x, double eps, double gamma) {
  if (!std::isfinite(x) || x <= 0.0)
    throw ValidationError("ladder top must be positive");
  if (!std::isfinite(eps) || eps <= 0.0)
    throw ValidationError("ladder floor must be positive");
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw ValidationError("gamma must be a finite positive number");
  if (eps > x) throw ValidationError("ladder floor above the top bid");

  const double factor = 1.0 + gamma;
  std::vector<double> bids{x};
  double bid = x;
  while (bid / factor >= eps) {
    bid /= factor;
    bids.push_back(bid);
  }
  std::reverse(bids.begin(), bids.end());
  for (std::size_t j = bids.size() - 1; j > 0; --j) {
    while (factor * bids[j - 1] > bids[j])
      bids[j - 1] = std::nextafter(bids[j - 1], 0.0);
    if (bids[j - 1] <= 0.0) throw InvariantError("ladder rung collapsed to zero");
  }
  return bids;
}

double bumpable_top(double w, double gamma) {
  if (!std::isfinite(w) || w <= 0.0)
    throw ValidationError("target bid must be positive");
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw ValidationError("gamma must be a finite positive number");
  double top = w / (1.0 + gamma);
  while ((1.0 + gamma) * top > w) top = std::nextafter(top, 0.0);
  if (top <= 0.0) throw InvariantError("bumpable top collapsed to zero");
  return top;
}

double speculator_profit(const Scenario& scenario, const Outcome& outcome,
                         const std::string& owner) {
  double profit = 0.0;
  for (const auto& bidder : scenario.arrivals) {
    if (bidder.kind != BidderKind::speculator) continue;
    if (!owner.empty() && bidder.owner != owner) continue;
    switch (outcome.status_of(bidder.id)) {
      case Status::bumped: profit += outcome.bump_payments.at(bidder.id); break;
      case Status::survivor: profit -= outcome.prices.at(bidder.id); break;
      case Status::rejected: break;
    }
  }
  return profit;
}

double profit_cap(const Scenario& scenario, const MechanismParams& params) {
  const double opt = max_weight_matching(scenario.arrivals, scenario.slots).weight;
  return params.alpha / params.gamma * opt;
}

Scenario inject_opt_ladders(const Scenario& scenario, const MechanismParams& params) {
  scenario.validate();
  params.validate();
  std::vector<Bidder> actuals;
  for (const auto& bidder : scenario.arrivals)
    if (bidder.kind == BidderKind::actual) actuals.push_back(bidder);
  const MatchingResult opt = max_weight_matching(actuals, scenario.slots);
  const std::set<std::string> opt_ids(opt.matched.begin(), opt.matched.end());

  double previous = -1.0;
  for (const auto& bidder : scenario.arrivals) {
    if (!opt_ids.count(bidder.id)) continue;
    if (bidder.bid <= previous)
      throw ValidationError(
          "optimum bidders must arrive in strictly increasing bid order");
    previous = bidder.bid;
  }

  Scenario augmented = scenario;
  augmented.arrivals.clear();
  for (const auto& bidder : scenario.arrivals) {
    if (opt_ids.count(bidder.id)) {
      const double top = bumpable_top(bidder.bid, params.gamma);
      const auto ladder = geometric_bids(top, scenario.min_bid_epsilon, params.gamma);
      for (std::size_t j = 0; j < ladder.size(); ++j) {
        Bidder identity;
        identity.id = "spec:" + bidder.id + ":" + std::to_string(j + 1);
        identity.bid = ladder[j];
        identity.choice_set = bidder.choice_set;
        identity.true_value = 0.0;
        identity.kind = BidderKind::speculator;
        identity.owner = "opt_ladders";
        augmented.arrivals.push_back(std::move(identity));
      }
    }
    augmented.arrivals.push_back(bidder);
  }
  augmented.validate();
  return augmented;
}

BestResponse best_response_over_grid(const Scenario& scenario,
                                     const MechanismParams& params,
                                     const std::string& bidder_id,
                                     const std::vector<std::string>& choice_set) {
  const std::size_t position = scenario.arrival_position(bidder_id);
  Scenario reported = scenario;
  reported.arrivals[position].choice_set = choice_set;
  reported.validate();

  const Thresholds thresholds = thresholds_of(reported, params, position);
  const double price = price_of(thresholds, params);
  const double value = value_of(scenario.arrivals[position]);

  const auto cuts = survival_break_points(reported, params, position);
  std::vector<double> probes;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    probes.push_back(cuts[k]);
    if (k + 1 < cuts.size())
      probes.push_back(cuts[k] + (cuts[k + 1] - cuts[k]) / 2.0);
  }
  probes.push_back(cuts.back() + 1.0);

  BestResponse best;
  bool have = false;
  for (double bid : probes) {
    Scenario probe = reported;
    probe.arrivals[position].bid = bid;
    const AllocationResult alloc = run_allocation(probe, params);
    double utility = 0.0;
    switch (alloc.status[position]) {
      case Status::rejected: utility = 0.0; break;
      case Status::bumped:
        utility = params.alpha * bid - params.alpha * value;
        break;
      case Status::survivor: utility = value - price; break;
    }
    if (!have || utility > best.utility) {
      have = true;
      best.utility = utility;
      best.bid = bid;
    }
  }
  return best;
}

namespace {

double take(const std::map<std::string, double>& overrides,
            std::set<std::string>& seen, const std::string& key,
            double fallback) {
  seen.insert(key);
  auto it = overrides.find(key);
  return it == overrides.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& overrides,
                    const std::set<std::string>& seen, const std::string& name) {
  for (const auto& [key, value] : overrides)
    if (!seen.count(key))
      throw ValidationError("unknown parameter for " + name + ": " + key);
}

int as_count(double value, const std::string& what) {
  if (!std::isfinite(value) || value < 1.0 || value != std::floor(value))
    throw ValidationError(what + " must be a positive integer");
  return static_cast<int>(value);
}

std::vector<std::string> slot_range(const std::string& prefix, int count) {
  std::vector<std::string> slots;
  for (int s = 1; s <= count; ++s) slots.push_back(prefix + std::to_string(s));
  return slots;
}

Bidder make_bidder(std::string id, double bid, std::vector<std::string> choice) {
  Bidder bidder;
  bidder.id = std::move(id);
  bidder.bid = bid;
  bidder.choice_set = std::move(choice);
  return bidder;
}

Bidder make_identity(std::string id, double bid, std::vector<std::string> choice,
                     std::string owner) {
  Bidder bidder = make_bidder(std::move(id), bid, std::move(choice));
  bidder.kind = BidderKind::speculator;
  bidder.true_value = 0.0;
  bidder.owner = std::move(owner);
  return bidder;
}

GeneratedExample tight_chain(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const int k = as_count(take(overrides, seen, "k", 5.0), "k");
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const double eps = take(overrides, seen, "eps", 0.5);
  reject_unknown(overrides, seen, "tight_chain");

  GeneratedExample example;
  example.name = "tight_chain";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = {"s1"};
  double bid = 1.0;
  for (int i = 1; i <= k + 1; ++i) {
    example.scenario.arrivals.push_back(
        make_bidder("b" + std::to_string(i), bid, {"s1"}));
    bid *= 1.0 + gamma;
  }
  const double closer = bid - eps;
  if (closer <= 0.0) throw ValidationError("eps leaves a non-positive closing bid");
  example.scenario.arrivals.push_back(
      make_bidder("b" + std::to_string(k + 2), closer, {"s1"}));
  example.scenario.validate();
  example.notes = {{"k", static_cast<double>(k)}, {"eps", eps},
                   {"chain_top", bid / (1.0 + gamma)}, {"closing_bid", closer}};
  return example;
}

GeneratedExample c11c(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const double big = take(overrides, seen, "C", 11.0);
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const bool c_first = take(overrides, seen, "c_first", 1.0) != 0.0;
  reject_unknown(overrides, seen, "c11c");
  if (big <= 1.0) throw ValidationError("C must exceed 1");

  GeneratedExample example;
  example.name = "c11c";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = {"s1", "s2"};
  Bidder whale = make_bidder("big", big, {"s1", "s2"});
  Bidder minnow = make_bidder("small", 1.0, {"s1", "s2"});
  if (c_first) {
    example.scenario.arrivals = {whale, minnow};
  } else {
    example.scenario.arrivals = {minnow, whale};
  }
  example.scenario.validate();
  example.notes = {{"C", big}, {"c_first", c_first ? 1.0 : 0.0}};
  return example;
}

GeneratedExample subopt_spec(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const double w1 = take(overrides, seen, "w1", 1.0);
  const double w2 = take(overrides, seen, "w2", 4.0);
  const double w3 = take(overrides, seen, "w3", 1.5);
  const double eps = take(overrides, seen, "eps", 1e-6);
  const double plan_raw = take(overrides, seen, "plan", 2.0);
  reject_unknown(overrides, seen, "subopt_spec");
  if (plan_raw != 0.0 && plan_raw != 1.0 && plan_raw != 2.0)
    throw ValidationError("plan must be 0 (none), 1 or 2");
  if (!(w1 < w3 && w3 < w2))
    throw ValidationError("bids must satisfy w1 < w3 < w2");

  GeneratedExample example;
  example.name = "subopt_spec";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = {"i1", "i2"};
  example.scenario.min_bid_epsilon = eps;

  auto append_ladder = [&](const std::string& tag, double target,
                           const std::vector<std::string>& choice,
                           const std::string& owner) {
    const auto ladder = geometric_bids(bumpable_top(target, gamma), eps, gamma);
    for (std::size_t j = 0; j < ladder.size(); ++j)
      example.scenario.arrivals.push_back(make_identity(
          tag + std::to_string(j + 1), ladder[j], choice, owner));
  };
  if (plan_raw == 1.0) {
    append_ladder("specA1.", w3, {"i1"}, "planA");
    append_ladder("specA2.", w3, {"i2"}, "planA");
  } else if (plan_raw == 2.0) {
    append_ladder("specB.", w2, {"i2"}, "planB");
  }
  example.scenario.arrivals.push_back(make_bidder("b1", w1, {"i1"}));
  example.scenario.arrivals.push_back(make_bidder("b2", w2, {"i2"}));
  example.scenario.arrivals.push_back(make_bidder("b3", w3, {"i1", "i2"}));
  example.scenario.validate();
  example.notes = {{"plan", plan_raw},
                   {"plan_a_cap", alpha * 2.0 * w3 / gamma},
                   {"plan_b_target", alpha * w2 / gamma}};
  return example;
}

GeneratedExample sacrifice(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const int k = as_count(take(overrides, seen, "k", 5.0), "k");
  const double big = take(overrides, seen, "C", 100.0);
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const double eps = take(overrides, seen, "eps", 1e-3);
  reject_unknown(overrides, seen, "sacrifice");
  if (k < 2) throw ValidationError("k must be at least 2");
  if (big <= 1.0) throw ValidationError("C must exceed 1");
  if (eps >= big / (1.0 + gamma))
    throw ValidationError("eps must sit below C/(1+gamma)");

  GeneratedExample example;
  example.name = "sacrifice";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = slot_range("s", k);
  example.scenario.min_bid_epsilon = eps;
  const auto all = example.scenario.slots;

  // Level-major interleave: the k lowest rungs consume the k empty slots,
  // then each level bumps the one below it.
  const auto ladder = geometric_bids(bumpable_top(big, gamma), eps, gamma);
  for (std::size_t level = 0; level < ladder.size(); ++level)
    for (int g = 1; g <= k; ++g)
      example.scenario.arrivals.push_back(make_identity(
          "spec" + std::to_string(g) + "." + std::to_string(level + 1),
          ladder[level], all, "ring"));
  example.scenario.arrivals.push_back(make_identity("specX", big, all, "ring"));
  for (int j = 1; j < k; ++j)
    example.scenario.arrivals.push_back(
        make_bidder("K" + std::to_string(j), big, all));
  example.scenario.arrivals.push_back(make_bidder("late", 1.0, all));
  example.scenario.validate();

  double rung_total = 0.0;
  for (double rung : ladder) rung_total += rung;
  example.notes = {{"k", static_cast<double>(k)},
                   {"C", big},
                   {"eps", eps},
                   {"target_profit", alpha * static_cast<double>(k) * rung_total - big},
                   {"headline_profit", (k * alpha - 1.0) * big / gamma}};
  return example;
}

GeneratedExample deficit(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const double load = take(overrides, seen, "L", 20.0);
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  reject_unknown(overrides, seen, "deficit");
  const double bound = (1.0 + gamma) * (1.0 + gamma) / alpha;
  if (load <= bound)
    throw ValidationError("L must exceed (1+gamma)^2/alpha = " +
                          format_number(bound));

  GeneratedExample example;
  example.name = "deficit";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = {"s1"};
  example.scenario.arrivals.push_back(make_bidder("e", 1.0, {"s1"}));
  example.scenario.arrivals.push_back(make_bidder("ell", load, {"s1"}));
  example.scenario.validate();
  example.notes = {{"L", load}, {"negativity_bound", bound}};
  return example;
}

GeneratedExample choice_misreport(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const double cap = alpha * std::pow(1.0 + gamma, -1.5);
  const double x = take(overrides, seen, "x", cap / 2.0);
  reject_unknown(overrides, seen, "choice_misreport");
  if (x <= 0.0 || x >= cap)
    throw ValidationError("x must lie in (0, alpha*(1+gamma)^(-3/2)) = (0, " +
                          format_number(cap) + ")");

  GeneratedExample example;
  example.name = "choice_misreport";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = {"i1", "i2"};
  example.scenario.arrivals.push_back(
      make_bidder("blow", std::pow(1.0 + gamma, -1.5), {"i1", "i2"}));
  example.scenario.arrivals.push_back(make_bidder("bstar", x, {"i1", "i2"}));
  example.scenario.arrivals.push_back(make_bidder("b1", 1.0, {"i1"}));
  example.scenario.validate();
  example.notes = {{"x", x}, {"x_cap", cap}};
  return example;
}

GeneratedExample myopic(const std::map<std::string, double>& overrides) {
  std::set<std::string> seen;
  const int n = as_count(take(overrides, seen, "n", 3.0), "n");
  const double gamma = take(overrides, seen, "gamma", 1.0);
  const double alpha = take(overrides, seen, "alpha", 0.25);
  const double x = take(overrides, seen, "x", 0.4);
  reject_unknown(overrides, seen, "myopic");
  if (x <= 0.0 || x >= 1.0) throw ValidationError("x must lie in (0,1)");

  GeneratedExample example;
  example.name = "myopic";
  example.params = {alpha, gamma};
  example.params.validate();
  example.scenario.slots = slot_range("s", n);
  const auto all = example.scenario.slots;
  const double high_value = 5.0;

  // Low-value bidders play the one-step deviation: bid right at the high
  // bidder's bump threshold instead of their value.
  for (int i = 1; i <= n; ++i) {
    Bidder low = make_bidder("low" + std::to_string(i),
                             high_value / (1.0 + gamma), all);
    low.true_value = x;
    example.scenario.arrivals.push_back(std::move(low));
  }
  for (int i = 1; i < n; ++i)
    example.scenario.arrivals.push_back(
        make_bidder("mid" + std::to_string(i), 1.0, all));
  example.scenario.arrivals.push_back(make_bidder("high", high_value, all));
  example.scenario.validate();
  example.notes = {{"n", static_cast<double>(n)}, {"x", x},
                   {"low_bid", high_value / (1.0 + gamma)}};
  return example;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"tight_chain", "c11c",    "subopt_spec",      "sacrifice",
          "deficit",     "myopic",  "choice_misreport"};
}

GeneratedExample build_example(const std::string& name,
                               const std::map<std::string, double>& overrides) {
  if (name == "tight_chain") return tight_chain(overrides);
  if (name == "c11c") return c11c(overrides);
  if (name == "subopt_spec") return subopt_spec(overrides);
  if (name == "sacrifice") return sacrifice(overrides);
  if (name == "deficit") return deficit(overrides);
  if (name == "choice_misreport") return choice_misreport(overrides);
  if (name == "myopic") return myopic(overrides);
  throw ValidationError("unknown example name: " + name);
}

}  // namespace bump
