#pragma once

#include <string>
#include <vector>

#include "bumpauction/mechanism.hpp"
#include "bumpauction/types.hpp"

namespace bump {

struct ScenarioFile {
  Scenario scenario;
  MechanismParams params;
};

// Scenario files: {"slots": [...], "alpha": a, "gamma": g, "epsilon": e,
// "bidders": [{"id", "bid", "choice_set", "true_value"?, "kind"?, "owner"?}]}
// in arrival order. Unknown keys are rejected.
ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile load_scenario(const std::string& path);

std::string render_scenario_json(const Scenario& scenario,
                                 const MechanismParams& params);

// Outcome plus settlement figures; numbers go through format_number so the
// bytes never depend on the run.
std::string render_outcome_json(const Scenario& scenario,
                                const MechanismParams& params,
                                const Outcome& outcome,
                                const SettlementReport& report);

enum class LogLevel { quiet, info, trace };

// BUMP_AUCTION_LOG = quiet | info | trace; unset means info.
LogLevel log_level_from_env();
LogLevel log_level_from_string(const std::string& text);

// One line per event: "t=<k> <KIND> bidder=<id> [by=<id>] [pay=<amount>]".
// info hides dummy-placeholder evictions, trace shows them, quiet is empty.
std::string render_event_log(const std::vector<Event>& events, LogLevel level);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bump
