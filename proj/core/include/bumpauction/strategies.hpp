#pragma once

#include <map>
#include <string>
#include <vector>

#include "bumpauction/mechanism.hpp"
#include "bumpauction/types.hpp"

namespace bump {

// Ascending bid ladder x/(1+gamma)^l, ..., x/(1+gamma), x with the largest l
// satisfying x/(1+gamma)^l >= eps. Built by successive division so that
// consecutive bids replay as a bump cascade even after rounding; bids are
// nudged down by ulps where (1+gamma)*bid would otherwise overshoot the next
// rung.
std::vector<double> geometric_bids(double x, double eps, double gamma);

// Largest bid whose bump threshold stays within w: (1+gamma)*result <= w.
double bumpable_top(double w, double gamma);

struct GeneratedExample {
  std::string name;
  Scenario scenario;
  MechanismParams params;
  std::map<std::string, double> notes;
};

// Named scenario generators: tight_chain, c11c, subopt_spec, sacrifice,
// deficit, choice_misreport, myopic. Overrides replace per-name defaults;
// unknown keys are rejected.
GeneratedExample build_example(const std::string& name,
                               const std::map<std::string, double>& overrides = {});

std::vector<std::string> example_names();

// Ring cash flow: bump refunds received minus prices paid, summed over
// speculator identities (all of them, or just one owner label).
double speculator_profit(const Scenario& scenario, const Outcome& outcome,
                         const std::string& owner = "");

// No ring can clear more than alpha/gamma times the optimum over all
// submitted bids.
double profit_cap(const Scenario& scenario, const MechanismParams& params);

// Injects a bid/(1+gamma)-geometric ladder on each optimum bidder's choice
// set right before that bidder arrives. Requires the optimum bidders to
// arrive in strictly increasing bid order.
Scenario inject_opt_ladders(const Scenario& scenario, const MechanismParams& params);

struct BestResponse {
  double utility = 0.0;
  double bid = 0.0;
};

// Utility-maximizing bid for one bidder over the replay break-point grid
// (break points plus interval midpoints), reporting the given choice set.
BestResponse best_response_over_grid(const Scenario& scenario,
                                     const MechanismParams& params,
                                     const std::string& bidder_id,
                                     const std::vector<std::string>& choice_set);

}  // namespace bump
