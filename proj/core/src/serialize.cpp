#include "bumpauction/serialize.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bump {
namespace {

using nlohmann::json;

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(const std::string& text) { return '"' + escape(text) + '"'; }

double number_field(const json& object, const std::string& key) {
  if (!object.at(key).is_number())
    throw ValidationError("field " + key + " must be a number");
  return object.at(key).get<double>();
}

void reject_unknown_keys(const json& object,
                         const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const auto& key : allowed)
      if (it.key() == key) known = true;
    if (!known)
      throw ValidationError("unknown key in " + where + ": " + it.key());
  }
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + error.what());
  }
  if (!root.is_object()) throw ValidationError("scenario must be a JSON object");
  reject_unknown_keys(root, {"slots", "alpha", "gamma", "epsilon", "bidders"},
                      "scenario");
  for (const auto& key : {"slots", "alpha", "gamma", "bidders"})
    if (!root.contains(key))
      throw ValidationError(std::string("scenario is missing field ") + key);

  ScenarioFile file;
  file.params.alpha = number_field(root, "alpha");
  file.params.gamma = number_field(root, "gamma");
  if (root.contains("epsilon"))
    file.scenario.min_bid_epsilon = number_field(root, "epsilon");

  if (!root.at("slots").is_array())
    throw ValidationError("slots must be an array of strings");
  for (const auto& slot : root.at("slots")) {
    if (!slot.is_string()) throw ValidationError("slots must be an array of strings");
    file.scenario.slots.push_back(slot.get<std::string>());
  }

  if (!root.at("bidders").is_array())
    throw ValidationError("bidders must be an array");
  for (const auto& entry : root.at("bidders")) {
    if (!entry.is_object()) throw ValidationError("each bidder must be an object");
    reject_unknown_keys(
        entry, {"id", "bid", "choice_set", "true_value", "kind", "owner"},
        "bidder");
    for (const auto& key : {"id", "bid", "choice_set"})
      if (!entry.contains(key))
        throw ValidationError(std::string("bidder is missing field ") + key);
    Bidder bidder;
    if (!entry.at("id").is_string())
      throw ValidationError("bidder id must be a string");
    bidder.id = entry.at("id").get<std::string>();
    bidder.bid = number_field(entry, "bid");
    if (!entry.at("choice_set").is_array())
      throw ValidationError("choice_set must be an array of slot ids");
    for (const auto& slot : entry.at("choice_set")) {
      if (!slot.is_string())
        throw ValidationError("choice_set must be an array of slot ids");
      bidder.choice_set.push_back(slot.get<std::string>());
    }
    if (entry.contains("true_value"))
      bidder.true_value = number_field(entry, "true_value");
    if (entry.contains("kind")) {
      if (!entry.at("kind").is_string())
        throw ValidationError("bidder kind must be a string");
      bidder.kind = bidder_kind_from_string(entry.at("kind").get<std::string>());
    }
    if (entry.contains("owner")) {
      if (!entry.at("owner").is_string())
        throw ValidationError("bidder owner must be a string");
      bidder.owner = entry.at("owner").get<std::string>();
    }
    file.scenario.arrivals.push_back(std::move(bidder));
  }

  file.params.validate();
  file.scenario.validate();
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  return parse_scenario_text(read_text_file(path));
}

std::string render_scenario_json(const Scenario& scenario,
                                 const MechanismParams& params) {
  std::ostringstream out;
  out << "{\n  \"slots\": [";
  for (std::size_t s = 0; s < scenario.slots.size(); ++s)
    out << (s ? ", " : "") << quoted(scenario.slots[s]);
  out << "],\n";
  out << "  \"alpha\": " << format_number(params.alpha) << ",\n";
  out << "  \"gamma\": " << format_number(params.gamma) << ",\n";
  out << "  \"epsilon\": " << format_number(scenario.min_bid_epsilon) << ",\n";
  out << "  \"bidders\": [\n";
  for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
    const Bidder& bidder = scenario.arrivals[i];
    out << "    {\"id\": " << quoted(bidder.id)
        << ", \"bid\": " << format_number(bidder.bid) << ", \"choice_set\": [";
    for (std::size_t c = 0; c < bidder.choice_set.size(); ++c)
      out << (c ? ", " : "") << quoted(bidder.choice_set[c]);
    out << ']';
    if (bidder.true_value)
      out << ", \"true_value\": " << format_number(*bidder.true_value);
    if (bidder.kind != BidderKind::actual)
      out << ", \"kind\": " << quoted(to_string(bidder.kind));
    if (!bidder.owner.empty()) out << ", \"owner\": " << quoted(bidder.owner);
    out << '}' << (i + 1 < scenario.arrivals.size() ? "," : "") << '\n';
  }
  out << "  ]\n}\n";
  return out.str();
}

namespace {

void render_string_list(std::ostringstream& out, const std::string& key,
                        const std::vector<std::string>& values) {
  out << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << (i ? ", " : "") << quoted(values[i]);
  out << "]";
}

void render_number_map(std::ostringstream& out, const std::string& key,
                       const std::map<std::string, double>& values) {
  out << "  \"" << key << "\": {";
  bool first = true;
  for (const auto& [name, value] : values) {
    out << (first ? "" : ", ") << quoted(name) << ": " << format_number(value);
    first = false;
  }
  out << "}";
}

}  // namespace

std::string render_outcome_json(const Scenario& scenario,
                                const MechanismParams& params,
                                const Outcome& outcome,
                                const SettlementReport& report) {
  (void)scenario;
  (void)params;
  std::ostringstream out;
  out << "{\n";
  render_string_list(out, "survivors", outcome.survivors);
  out << ",\n";
  render_string_list(out, "bumped", outcome.bumped);
  out << ",\n";
  render_string_list(out, "rejected", outcome.rejected);
  out << ",\n  \"assignment\": {";
  {
    bool first = true;
    for (const auto& [slot, id] : outcome.final_assignment) {
      out << (first ? "" : ", ") << quoted(slot) << ": " << quoted(id);
      first = false;
    }
  }
  out << "},\n";
  render_number_map(out, "prices", outcome.prices);
  out << ",\n";
  render_number_map(out, "bump_payments", outcome.bump_payments);
  out << ",\n  \"revenue\": " << format_number(report.revenue);
  out << ",\n  \"effective_efficiency\": "
      << format_number(report.effective_efficiency);
  out << ",\n  \"total_utility\": " << format_number(report.total_utility);
  out << ",\n";
  render_number_map(out, "utilities", report.utilities);
  out << ",\n  \"events\": [\n";
  for (std::size_t e = 0; e < outcome.events.size(); ++e) {
    const Event& event = outcome.events[e];
    out << "    {\"t\": " << event.time << ", \"kind\": "
        << quoted(to_string(event.kind)) << ", \"bidder\": " << quoted(event.bidder);
    if (event.by) out << ", \"by\": " << quoted(*event.by);
    if (event.amount) out << ", \"pay\": " << format_number(*event.amount);
    if (!event.moves.empty()) {
      out << ", \"moves\": [";
      for (std::size_t m = 0; m < event.moves.size(); ++m)
        out << (m ? ", " : "") << "{\"bidder\": " << quoted(event.moves[m].bidder)
            << ", \"slot\": " << quoted(event.moves[m].slot) << '}';
      out << ']';
    }
    out << '}' << (e + 1 < outcome.events.size() ? "," : "") << '\n';
  }
  out << "  ]\n}\n";
  return out.str();
}

LogLevel log_level_from_string(const std::string& text) {
  if (text == "quiet") return LogLevel::quiet;
  if (text == "info") return LogLevel::info;
  if (text == "trace") return LogLevel::trace;
  throw ValidationError("unknown log level: " + text);
}

LogLevel log_level_from_env() {
  const char* raw = std::getenv("BUMP_AUCTION_LOG");
  if (raw == nullptr || *raw == '\0') return LogLevel::info;
  return log_level_from_string(raw);
}

std::string render_event_log(const std::vector<Event>& events, LogLevel level) {
  if (level == LogLevel::quiet) return {};
  std::ostringstream out;
  for (const Event& event : events) {
    if (level != LogLevel::trace && event.kind == EventKind::bump &&
        event.bidder.rfind("__dummy", 0) == 0)
      continue;
    out << "t=" << event.time << ' ' << to_string(event.kind)
        << " bidder=" << event.bidder;
    if (event.by) out << " by=" << *event.by;
    if (event.amount) out << " pay=" << format_number(*event.amount);
    out << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write file: " + path);
}

}  // namespace bump
