// Acceptance harness: one line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bumpauction/bounds.hpp"
#include "bumpauction/matching.hpp"
#include "bumpauction/mechanism.hpp"
#include "bumpauction/oracles.hpp"
#include "bumpauction/strategies.hpp"
#include "bumpauction/types.hpp"

using namespace bump;

namespace {

struct Tally {
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

std::string num(double value) { return format_number(value); }

void chain_replay(Tally& t) {
  const GeneratedExample example = build_example("tight_chain");
  const Outcome outcome = run(example.scenario, example.params);
  const SettlementReport report = settle(example.scenario, example.params, outcome);

  t.expect(outcome.survivors == std::vector<std::string>{"b6"},
           "survivor set is not exactly b6");
  t.expect(outcome.status_of("b7") == Status::rejected, "b7 was not rejected");
  t.expect(outcome.prices.count("b6") && outcome.prices.at("b6") == 32.0,
           "b6 price is not exactly 32");
  double refunds = 0.0;
  for (const auto& [id, amount] : report.refunds) refunds += amount;
  t.expect(refunds == 7.75, "bump refunds do not total exactly 7.75, got " + num(refunds));
  t.expect(report.revenue == 24.25,
           "revenue is not exactly 24.25, got " + num(report.revenue));
  t.expect(report.total_utility == 0.0,
           "truthful chain utility is not exactly 0, got " + num(report.total_utility));
  // Six acceptances each displace someone (the first displaces the slot's
  // placeholder at pay 0), then one rejection and one settlement.
  std::size_t accepts = 0, bumps = 0, rejects = 0, settles = 0, placeholder_bumps = 0;
  for (const Event& event : outcome.events) {
    switch (event.kind) {
      case EventKind::accept: ++accepts; break;
      case EventKind::bump:
        ++bumps;
        if (event.bidder.rfind("__dummy:", 0) == 0) ++placeholder_bumps;
        break;
      case EventKind::reject: ++rejects; break;
      case EventKind::settle: ++settles; break;
    }
  }
  t.expect(outcome.events.size() == 14,
           "event count is not 14, got " + std::to_string(outcome.events.size()));
  t.expect(accepts == 6 && bumps == 6 && rejects == 1 && settles == 1,
           "event mix is not 6 ACCEPT / 6 BUMP / 1 REJECT / 1 SETTLE");
  t.expect(placeholder_bumps == 1, "expected exactly one placeholder bump");
}

void closed_forms(Tally& t) {
  for (int i = 1; i <= 12; ++i) {
    const double alpha = 0.05 * i;
    const double expected[3] = {closed_form_c2(alpha), closed_form_c3(alpha),
                                closed_form_c4(alpha)};
    const int ns[3] = {2, 3, 4};
    for (int k = 0; k < 3; ++k) {
      const SolveResult result = solve_c_n(alpha, ns[k]);
      if (!result.root) {
        t.expect(false, "no root at alpha=" + num(alpha) + " n=" + std::to_string(ns[k]));
        continue;
      }
      const double gap = std::abs(*result.root - expected[k]);
      t.expect(gap <= 1e-8, "alpha=" + num(alpha) + " n=" + std::to_string(ns[k]) +
                                " root off by " + num(gap));
    }
  }
}

void bound_curve(Tally& t) {
  const auto curve = lower_bound_curve(0.05, 0.60, 56, default_n_list());
  t.expect(curve.size() == 56, "curve does not have 56 points");
  for (const CurvePoint& point : curve) {
    const std::string at = "alpha=" + num(point.alpha) + ": ";
    t.expect(point.c3 > point.cn_min, at + "n=3 root is not above the deep minimum");
    t.expect(point.cn_min >= point.limit - 1e-3,
             at + "deep minimum fell below the recursion limit");
    t.expect(std::abs(point.lower_bound - point.limit) <= 1e-9,
             at + "guaranteed share does not meet the recursion limit");
    t.expect(point.cn_min > 0.0 && point.cn_min < 1.0, at + "root outside (0,1)");
  }
  for (std::size_t i = 1; i < curve.size(); ++i)
    t.expect(curve[i].lower_bound < curve[i - 1].lower_bound,
             "guaranteed share is not decreasing in alpha at point " + std::to_string(i));
}

void random_bounds(Tally& t) {
  std::mt19937_64 rng(20250101);
  for (int k = 0; k < 500; ++k) {
    const MechanismParams params = random_params(rng);
    const Scenario scenario = random_scenario(rng, RandomInstanceOptions{});
    const Outcome outcome = run(scenario, params);
    const OutcomeChecks checks = check_outcome_bounds(scenario, params, outcome);
    if (!checks.all_ok()) {
      t.expect(false, "instance " + std::to_string(k) + ": " + checks.first_failure());
      if (t.problems.size() > 5) return;
    }
    bool has_revenue_floor = false;
    bool has_reference = false;
    for (const CheckItem& item : checks.items) {
      if (item.name == "revenue_floor") has_revenue_floor = true;
      if (item.name == "threshold_total_vs_reference_revenue") has_reference = true;
    }
    t.expect(has_revenue_floor,
             "instance " + std::to_string(k) + " is missing the revenue floor check");
    t.expect(has_reference,
             "instance " + std::to_string(k) + " is missing the reference revenue check");
    if (t.problems.size() > 5) return;
  }
}

void verification_sweep(Tally& t) {
  const VerifyReport report = verify_random(20250101, 500);
  t.expect(report.instances == 500, "sweep did not run 500 instances");
  t.expect(report.checks == 4500, "sweep did not run 9 checks per instance");
  for (std::size_t i = 0; i < report.failures.size() && i < 5; ++i)
    t.expect(false, report.failures[i]);
}

void profit_caps(Tally& t) {
  for (const auto& name : example_names()) {
    const GeneratedExample example = build_example(name);
    const Outcome outcome = run(example.scenario, example.params);
    const double profit = speculator_profit(example.scenario, outcome);
    const double cap = profit_cap(example.scenario, example.params);
    t.expect(profit <= cap + 1e-9,
             name + ": profit " + num(profit) + " above cap " + num(cap));
  }

  double plan_profit[3] = {0.0, 0.0, 0.0};
  for (int plan = 0; plan <= 2; ++plan) {
    const GeneratedExample example =
        build_example("subopt_spec", {{"plan", static_cast<double>(plan)}});
    const Outcome outcome = run(example.scenario, example.params);
    const double profit = speculator_profit(example.scenario, outcome);
    const double cap = profit_cap(example.scenario, example.params);
    t.expect(profit <= cap + 1e-9, "subopt plan " + std::to_string(plan) +
                                       ": profit " + num(profit) + " above cap " + num(cap));
    plan_profit[plan] = profit;
  }
  t.expect(plan_profit[0] == 0.0, "plan 0 has no ring yet shows profit");
  t.expect(plan_profit[2] > 0.75, "pure milking does not beat the blocking cap");
  t.expect(plan_profit[2] >= plan_profit[1], "blocking outperforms pure milking");

  const GeneratedExample ring = build_example("sacrifice");
  const Outcome ring_outcome = run(ring.scenario, ring.params);
  const double ring_profit = speculator_profit(ring.scenario, ring_outcome, "ring");
  t.expect(std::abs(ring_profit - 25.0) <= 1.25,
           "sacrificial ring profit " + num(ring_profit) + " is not near 25");
  t.expect(ring_profit <= profit_cap(ring.scenario, ring.params) + 1e-9,
           "sacrificial ring beats the profit cap");

  std::mt19937_64 rng(20250102);
  RandomInstanceOptions options;
  options.max_bidders = 6;
  options.max_slots = 3;
  options.truthful = true;
  options.min_bid = 0.5;
  options.max_bid = 10.0;
  int processed = 0;
  for (int k = 0; k < 200; ++k) {
    const MechanismParams params = random_params(rng);
    Scenario scenario = random_scenario(rng, options);
    scenario.min_bid_epsilon = 0.01;
    std::sort(scenario.arrivals.begin(), scenario.arrivals.end(),
              [](const Bidder& a, const Bidder& b) { return a.bid < b.bid; });
    bool tied = false;
    for (std::size_t i = 1; i < scenario.arrivals.size(); ++i)
      if (scenario.arrivals[i].bid == scenario.arrivals[i - 1].bid) tied = true;
    if (tied) continue;

    const Scenario augmented = inject_opt_ladders(scenario, params);
    const Outcome outcome = run(augmented, params);
    const double profit = speculator_profit(augmented, outcome, "opt_ladders");
    const double cap = profit_cap(augmented, params);
    t.expect(profit <= cap + 1e-9,
             "augmented instance " + std::to_string(k) + ": profit " + num(profit) +
                 " above cap " + num(cap));
    if (t.problems.size() > 5) return;
    ++processed;
  }
  t.expect(processed >= 190, "too few augmented instances processed");
}

void matching_oracle(Tally& t) {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> bidder_count(1, 10);
  std::uniform_int_distribution<int> slot_count(1, 4);
  std::uniform_int_distribution<int> bid_die(0, 20);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int k = 0; k < 300; ++k) {
    const int slots_n = slot_count(rng);
    std::vector<std::string> slots;
    for (int s = 1; s <= slots_n; ++s) slots.push_back("s" + std::to_string(s));
    const int n = bidder_count(rng);
    std::vector<Bidder> bidders;
    for (int b = 1; b <= n; ++b) {
      Bidder bidder;
      bidder.id = "b" + std::to_string(b);
      bidder.bid = bid_die(rng);
      for (const auto& slot : slots)
        if (coin(rng)) bidder.choice_set.push_back(slot);
      if (bidder.choice_set.empty())
        bidder.choice_set.push_back(slots[static_cast<std::size_t>(coin(rng)) % slots.size()]);
      bidders.push_back(std::move(bidder));
    }
    const MatchingResult fast = max_weight_matching(bidders, slots);
    const MatchingResult reference = brute_force_opt(bidders, slots);
    t.expect(fast.weight == reference.weight,
             "instance " + std::to_string(k) + ": weight " + num(fast.weight) +
                 " differs from exhaustive " + num(reference.weight));
    t.expect(fast.matched == reference.matched,
             "instance " + std::to_string(k) + ": winner set differs from exhaustive");
    if (t.problems.size() > 5) return;
  }
}

void refund_rule(Tally& t) {
  const GeneratedExample example = build_example("deficit");
  const DeficitComparison compare = deficit_compare(example.scenario, example.params);
  t.expect(compare.revenue_shipped == 1.75,
           "shipped refund revenue is not exactly 1.75, got " + num(compare.revenue_shipped));
  t.expect(compare.revenue_threshold_refund == -0.5,
           "threshold refund revenue is not exactly -0.5, got " +
               num(compare.revenue_threshold_refund));
  t.expect(compare.revenue_shipped > 0.0 && compare.revenue_threshold_refund < 0.0,
           "the comparison does not separate the two refund rules");
}

struct Criterion {
  const char* name;
  double budget_ms;
  std::function<void(Tally&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"bump chain replays to the pinned settlement", 1000.0, chain_replay},
      {"recursion roots match the small-case closed forms", 5000.0, closed_forms},
      {"guaranteed share curve tracks the deep-recursion limit", 60000.0, bound_curve},
      {"random outcomes satisfy the structural bounds", 30000.0, random_bounds},
      {"randomized structural verification sweep is clean", 120000.0, verification_sweep},
      {"speculator rings never clear more than the profit cap", 30000.0, profit_caps},
      {"matching oracle agrees with exhaustive search", 30000.0, matching_oracle},
      {"shipped refund rule avoids the variant's deficit", 1000.0, refund_rule},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Tally tally;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].body(tally);
    } catch (const std::exception& error) {
      tally.expect(false, std::string("unexpected exception: ") + error.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed =
        std::chrono::duration<double, std::milli>(stop - start).count();
    if (elapsed > criteria[i].budget_ms)
      tally.expect(false, "time budget exceeded: " + std::to_string(elapsed) + " ms > " +
                              std::to_string(criteria[i].budget_ms) + " ms");

    const bool ok = tally.problems.empty();
    std::printf("[%s] %zu %s (%.0f ms)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, elapsed);
    for (const auto& problem : tally.problems)
      std::printf("       - %s\n", problem.c_str());
    if (!ok) ++failed;
  }

  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed;
}
