#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bumpauction/oracles.hpp"
#include "bumpauction/strategies.hpp"
#include "bumpauction/types.hpp"

namespace {

using namespace bump;

Bidder mk(std::string id, double bid, std::vector<std::string> choice) {
  Bidder bidder;
  bidder.id = std::move(id);
  bidder.bid = bid;
  bidder.choice_set = std::move(choice);
  return bidder;
}

bool has_item(const OutcomeChecks& checks, const std::string& name) {
  for (const auto& item : checks.items)
    if (item.name == name) return true;
  return false;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("the exhaustive optimum refuses oversized inputs") {
  std::vector<Bidder> too_many;
  for (int i = 0; i < 13; ++i)
    too_many.push_back(mk("b" + std::to_string(i), 1.0, {"s1"}));
  CHECK_THROWS_AS(brute_force_opt(too_many, {"s1"}), ValidationError);
}

TEST_CASE("the reference auction charges externalities") {
  const std::vector<std::string> slots{"s1", "s2"};
  const std::vector<Bidder> bidders = {mk("A", 10, {"s1"}),
                                       mk("B", 8, {"s1", "s2"}),
                                       mk("C", 6, {"s2"})};
  const VcgResult result = vcg(bidders, slots);
  CHECK(result.allocation.weight == 18.0);
  CHECK(result.allocation.matched == std::vector<std::string>{"A", "B"});
  CHECK(result.payments.at("A") == 6.0);
  CHECK(result.payments.at("B") == 6.0);
  CHECK(result.payments.count("C") == 0);
  CHECK(result.revenue == 12.0);

  const VcgResult second_price =
      vcg({mk("hi", 20, {"s1"}), mk("lo", 1, {"s1"})}, {"s1"});
  CHECK(second_price.payments.at("hi") == 1.0);
  CHECK(second_price.revenue == 1.0);
}

TEST_CASE("winners pay within their bid and losers pay nothing") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 80; ++trial) {
    const Scenario scenario = random_scenario(rng, {});
    const VcgResult result = vcg(scenario.arrivals, scenario.slots);
    for (const auto& [id, payment] : result.payments) {
      CHECK(std::binary_search(result.allocation.matched.begin(),
                               result.allocation.matched.end(), id));
      CHECK(payment >= -1e-12);
      const Bidder& bidder = scenario.arrivals[scenario.arrival_position(id)];
      CHECK(payment <= bidder.bid + 1e-9);
    }
    CHECK(result.payments.size() == result.allocation.matched.size());
  }
}

TEST_CASE("every externality payment echoes a losing bid") {
  std::mt19937_64 rng(91);
  int nonzero = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Scenario scenario = random_scenario(rng, {});
    const VcgResult full = vcg(scenario.arrivals, scenario.slots);
    for (const auto& [winner, payment] : full.payments) {
      if (payment <= 1e-9) continue;
      ++nonzero;
      bool echoed = false;
      for (const auto& bidder : scenario.arrivals) {
        if (std::binary_search(full.allocation.matched.begin(),
                               full.allocation.matched.end(), bidder.id))
          continue;
        if (std::abs(payment - bidder.bid) <= 1e-9 * std::max(1.0, bidder.bid))
          echoed = true;
      }
      CHECK_MESSAGE(echoed, "payment ", payment, " for ", winner);
    }

    // Removing a loser never flips the chosen allocation.
    for (const auto& bidder : scenario.arrivals) {
      if (std::binary_search(full.allocation.matched.begin(),
                             full.allocation.matched.end(), bidder.id))
        continue;
      std::vector<Bidder> rest;
      for (const auto& other : scenario.arrivals)
        if (other.id != bidder.id) rest.push_back(other);
      CHECK(vcg(rest, scenario.slots).allocation.matched ==
            full.allocation.matched);
      break;
    }
  }
  CHECK(nonzero > 20);
}

TEST_CASE("survivors stay inside a reweighted optimum across the catalog") {
  for (const auto& name : example_names()) {
    const GeneratedExample example = build_example(name);
    const Outcome outcome = run(example.scenario, example.params);
    std::string detail;
    CHECK_MESSAGE(
        survivors_in_reweighted_opt(example.scenario, example.params, outcome,
                                    &detail),
        name, ": ", detail);
  }
}

TEST_CASE("structural bound items hold across the catalog") {
  for (const auto& name : example_names()) {
    for (double plan : {1.0, 2.0}) {
      if (name != "subopt_spec" && plan > 1.0) continue;
      const GeneratedExample example =
          name == "subopt_spec" ? build_example(name, {{"plan", plan}})
                                : build_example(name);
      const Outcome outcome = run(example.scenario, example.params);
      const OutcomeChecks checks =
          check_outcome_bounds(example.scenario, example.params, outcome);
      CHECK_MESSAGE(checks.all_ok(), name, ": ", checks.first_failure());
    }
  }
}

TEST_CASE("the welfare floor is only claimed when the total stays solvent") {
  const GeneratedExample chain = build_example("tight_chain");
  const OutcomeChecks chain_checks = check_outcome_bounds(
      chain.scenario, chain.params, run(chain.scenario, chain.params));
  CHECK(has_item(chain_checks, "welfare_floor"));
  CHECK(has_item(chain_checks, "revenue_floor"));

  // The herd example burns utility, so no welfare claim is made there.
  const GeneratedExample herd = build_example("myopic");
  const OutcomeChecks herd_checks = check_outcome_bounds(
      herd.scenario, herd.params, run(herd.scenario, herd.params));
  CHECK_FALSE(has_item(herd_checks, "welfare_floor"));
  CHECK(has_item(herd_checks, "revenue_floor"));
}

TEST_CASE("threshold refunds would sink the worked pair below zero") {
  const GeneratedExample example = build_example("deficit");
  const DeficitComparison compared =
      deficit_compare(example.scenario, example.params);
  CHECK(compared.revenue_shipped == 1.75);
  CHECK(compared.revenue_threshold_refund == -0.5);
}

TEST_CASE("random parameters stay inside the admissible region") {
  std::mt19937_64 rng(101);
  for (int draw = 0; draw < 300; ++draw) {
    const MechanismParams params = random_params(rng);
    CHECK(params.gamma >= 0.3);
    CHECK(params.gamma <= 3.0);
    CHECK(params.alpha > 0.0);
    CHECK(params.alpha < params.gamma / (1.0 + params.gamma));
    CHECK_NOTHROW(params.validate());
  }
}

TEST_CASE("random scenarios respect their own limits") {
  std::mt19937_64 rng(111);
  RandomInstanceOptions options;
  for (int draw = 0; draw < 50; ++draw) {
    const Scenario scenario = random_scenario(rng, options);
    CHECK_NOTHROW(scenario.validate());
    CHECK(scenario.arrivals.size() <=
          static_cast<std::size_t>(options.max_bidders));
    CHECK(scenario.slots.size() <= static_cast<std::size_t>(options.max_slots));
    for (const auto& bidder : scenario.arrivals) {
      CHECK(bidder.bid >= options.min_bid);
      CHECK(bidder.bid <= options.max_bid);
      CHECK(bidder.bid == value_of(bidder));
    }
  }
}

TEST_CASE("the randomized sweep is clean on a fixed seed") {
  const VerifyReport report = verify_random(7, 25);
  CHECK(report.instances == 25);
  CHECK(report.checks == 225);
  if (!report.failures.empty()) FAIL_CHECK(report.failures.front());
  CHECK(report.failures.empty());
}

}  // TEST_SUITE
