#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bump {

// Bad user input (files, flags, scenario contents). CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant or failed verification run. CLI exit code 3.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / stream trouble. CLI exit code 1.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct MechanismParams {
  double alpha = 0.25;
  double gamma = 1.0;

  // Requires gamma > 0 and 0 < alpha < gamma / (1 + gamma).
  void validate() const;
  double accept_factor() const { return 1.0 + gamma; }
};

enum class BidderKind { actual, speculator, dummy };

std::string to_string(BidderKind kind);
BidderKind bidder_kind_from_string(const std::string& text);

struct Bidder {
  std::string id;
  double bid = 0.0;
  std::vector<std::string> choice_set;
  // Missing true_value means the bid is truthful.
  std::optional<double> true_value;
  BidderKind kind = BidderKind::actual;
  // Optional grouping label, e.g. the ring a speculator identity belongs to.
  std::string owner;
};

double value_of(const Bidder& bidder);

struct Scenario {
  std::vector<std::string> slots;
  std::vector<Bidder> arrivals;  // in arrival order
  double min_bid_epsilon = 1e-6;

  void validate() const;
  // Index into arrivals, or throws ValidationError for unknown ids.
  std::size_t arrival_position(const std::string& id) const;
};

enum class EventKind { accept, reject, bump, settle };

std::string to_string(EventKind kind);

struct SlotMove {
  std::string bidder;
  std::string slot;
};

struct Event {
  int time = 0;  // arrival index, 1-based; settlement events use T+1
  EventKind kind = EventKind::accept;
  std::string bidder;
  std::optional<std::string> by;
  std::optional<double> amount;
  std::vector<SlotMove> moves;
};

enum class Status { rejected, bumped, survivor };

std::string to_string(Status status);

struct Outcome {
  // Ids in arrival order; dummy placeholders never appear in these sets.
  std::vector<std::string> survivors;
  std::vector<std::string> bumped;
  std::vector<std::string> rejected;
  std::map<std::string, double> bump_payments;  // bumped id -> alpha * bid, exact product
  std::map<std::string, double> prices;         // survivor id -> settlement price
  std::map<std::string, std::string> final_assignment;  // slot -> surviving bidder id
  std::vector<Event> events;

  Status status_of(const std::string& id) const;
};

// Per-bidder utility: 0 when rejected, value - price for survivors,
// alpha * (bid - value) for bumped bidders (zero when truthful).
double utility_of(const Scenario& scenario, const MechanismParams& params,
                  const Outcome& outcome, const std::string& id);

double total_utility(const Scenario& scenario, const MechanismParams& params,
                     const Outcome& outcome);

// 12 significant digits, negative zero normalized, locale independent; every
// number the tool prints goes through here so reruns are byte identical.
std::string format_number(double value);

}  // namespace bump
