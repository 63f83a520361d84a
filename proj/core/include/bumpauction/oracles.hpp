#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bumpauction/matching.hpp"
#include "bumpauction/mechanism.hpp"
#include "bumpauction/types.hpp"

namespace bump {

// Exhaustive reference optimum; refuses more than 12 bidders.
MatchingResult brute_force_opt(const std::vector<Bidder>& bidders,
                               const std::vector<std::string>& slots);

struct VcgResult {
  MatchingResult allocation;
  std::map<std::string, double> payments;  // winners only
  double revenue = 0.0;
};

// Sealed-bid reference auction: efficient allocation, each winner pays the
// externality it imposes on the others.
VcgResult vcg(const std::vector<Bidder>& bidders,
              const std::vector<std::string>& slots);

// Reweighted bids: survivors carry their survival threshold, everyone else
// bid/(1+gamma).
std::map<std::string, double> tilde_weights(const Scenario& scenario,
                                            const MechanismParams& params,
                                            const Outcome& outcome);

// Every survivor belongs to an optimum matching under the reweighted bids
// (checked through constrained-optimum weight equality).
bool survivors_in_reweighted_opt(const Scenario& scenario,
                                 const MechanismParams& params,
                                 const Outcome& outcome,
                                 std::string* detail = nullptr);

struct CheckItem {
  std::string name;
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct OutcomeChecks {
  std::vector<CheckItem> items;
  bool all_ok() const;
  std::string first_failure() const;
};

// Structural inequalities tying one run's outcome to the offline optima:
// refund/threshold/survivor-weight chain, optimum coverage, welfare and
// revenue floors, effective efficiency.
OutcomeChecks check_outcome_bounds(const Scenario& scenario,
                                   const MechanismParams& params,
                                   const Outcome& outcome);

struct DeficitComparison {
  double revenue_shipped = 0.0;           // refunds pay alpha * bid
  double revenue_threshold_refund = 0.0;  // variant refunds pay alpha * sv
};

// Revenue under the shipped refund rule versus the survival-threshold refund
// variant (the variant exists only here; it can go negative).
DeficitComparison deficit_compare(const Scenario& scenario,
                                  const MechanismParams& params);

struct RandomInstanceOptions {
  int max_bidders = 8;
  int max_slots = 5;
  bool truthful = true;
  double min_bid = 0.05;
  double max_bid = 10.0;
};

Scenario random_scenario(std::mt19937_64& rng, const RandomInstanceOptions& options);
MechanismParams random_params(std::mt19937_64& rng);

// Failure descriptions for one instance across the whole structural suite;
// empty means clean.
std::vector<std::string> check_instance(const Scenario& scenario,
                                        const MechanismParams& params,
                                        const std::string& label);

struct VerifyReport {
  int instances = 0;
  int checks = 0;
  std::vector<std::string> failures;
};

// Seeded randomized sweep of the structural suite.
VerifyReport verify_random(std::uint64_t seed, int count);

}  // namespace bump
