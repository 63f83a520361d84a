#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bumpauction/bounds.hpp"
#include "bumpauction/mechanism.hpp"
#include "bumpauction/oracles.hpp"
#include "bumpauction/serialize.hpp"
#include "bumpauction/strategies.hpp"
#include "bumpauction/types.hpp"

namespace {

using namespace bump;

struct CommonOverrides {
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> epsilon;
};

ScenarioFile load_with_overrides(const std::string& path,
                                 const CommonOverrides& overrides) {
  ScenarioFile file = load_scenario(path);
  if (overrides.alpha) file.params.alpha = *overrides.alpha;
  if (overrides.gamma) file.params.gamma = *overrides.gamma;
  if (overrides.epsilon) file.scenario.min_bid_epsilon = *overrides.epsilon;
  file.params.validate();
  file.scenario.validate();
  return file;
}

LogLevel pick_log_level(const std::string& flag) {
  if (flag.empty()) return log_level_from_env();
  return log_level_from_string(flag);
}

std::map<std::string, double> parse_param_list(
    const std::vector<std::string>& entries) {
  std::map<std::string, double> params;
  for (const auto& entry : entries) {
    const auto split = entry.find('=');
    if (split == std::string::npos || split == 0)
      throw ValidationError("parameters take the form key=value: " + entry);
    const std::string key = entry.substr(0, split);
    const std::string raw = entry.substr(split + 1);
    char* end = nullptr;
    const double value = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end == nullptr || *end != '\0')
      throw ValidationError("parameter " + key + " has a non-numeric value: " + raw);
    params[key] = value;
  }
  return params;
}

std::vector<int> parse_n_list(const std::string& text) {
  if (text == "fib") return default_n_list();
  std::vector<int> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      values.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw ValidationError("bad n list entry: " + token);
    }
  }
  if (values.empty()) throw ValidationError("n list is empty");
  return values;
}

void cmd_run(const std::string& path, const CommonOverrides& overrides,
             const std::string& out_path, const std::string& log_flag) {
  const ScenarioFile file = load_with_overrides(path, overrides);
  const Outcome outcome = run(file.scenario, file.params);
  const SettlementReport report = settle(file.scenario, file.params, outcome);
  std::cerr << render_event_log(outcome.events, pick_log_level(log_flag));
  const std::string rendered =
      render_outcome_json(file.scenario, file.params, outcome, report);
  if (out_path.empty())
    std::cout << rendered;
  else
    write_text_file(out_path, rendered);
}

void cmd_thresholds(const std::string& path, const CommonOverrides& overrides,
                    const std::string& format) {
  const ScenarioFile file = load_with_overrides(path, overrides);
  const Outcome outcome = run(file.scenario, file.params);
  const bool csv = format == "csv";
  if (csv)
    std::cout << "bidder,bid,status,accept_min,survive_min,price\n";
  else
    std::cout << std::left << std::setw(12) << "bidder" << std::setw(16) << "bid"
              << std::setw(10) << "status" << std::setw(16) << "accept_min"
              << std::setw(16) << "survive_min" << "price\n";
  for (std::size_t i = 0; i < file.scenario.arrivals.size(); ++i) {
    const Bidder& bidder = file.scenario.arrivals[i];
    const Thresholds thresholds = thresholds_of(file.scenario, file.params, i);
    const Status status = outcome.status_of(bidder.id);
    const std::string price =
        status == Status::survivor
            ? format_number(outcome.prices.at(bidder.id))
            : std::string(csv ? "" : "-");
    if (csv)
      std::cout << bidder.id << ',' << format_number(bidder.bid) << ','
                << to_string(status) << ',' << format_number(thresholds.ac) << ','
                << format_number(thresholds.sv) << ',' << price << '\n';
    else
      std::cout << std::left << std::setw(12) << bidder.id << std::setw(16)
                << format_number(bidder.bid) << std::setw(10) << to_string(status)
                << std::setw(16) << format_number(thresholds.ac) << std::setw(16)
                << format_number(thresholds.sv) << price << '\n';
  }
}

void cmd_vcg(const std::string& path, const CommonOverrides& overrides,
             const std::string& format) {
  const ScenarioFile file = load_with_overrides(path, overrides);
  const VcgResult result = vcg(file.scenario.arrivals, file.scenario.slots);
  const bool csv = format == "csv";
  if (csv)
    std::cout << "winner,bid,payment\n";
  else
    std::cout << std::left << std::setw(12) << "winner" << std::setw(16) << "bid"
              << "payment\n";
  for (const auto& winner : result.allocation.matched) {
    const Bidder& bidder =
        file.scenario.arrivals[file.scenario.arrival_position(winner)];
    if (csv)
      std::cout << winner << ',' << format_number(bidder.bid) << ','
                << format_number(result.payments.at(winner)) << '\n';
    else
      std::cout << std::left << std::setw(12) << winner << std::setw(16)
                << format_number(bidder.bid)
                << format_number(result.payments.at(winner)) << '\n';
  }
  if (csv)
    std::cout << "total,," << format_number(result.revenue) << '\n';
  else
    std::cout << "revenue: " << format_number(result.revenue) << '\n';
}

void cmd_bounds(double alpha_min, double alpha_max, int steps,
                const std::string& n_list_text, double tol, int grid,
                const std::string& format) {
  SolveOptions options;
  options.tol = tol;
  options.grid = grid;
  const auto curve = lower_bound_curve(alpha_min, alpha_max, steps,
                                       parse_n_list(n_list_text), options);
  std::cout << render_curve(curve, format == "csv");
}

void cmd_verify(std::uint64_t seed, int count) {
  const VerifyReport report = verify_random(seed, count);
  if (report.failures.empty()) {
    std::cout << "verified " << report.instances << " instances ("
              << report.checks << " structural checks), no violations\n";
    return;
  }
  std::size_t shown = 0;
  for (const auto& failure : report.failures) {
    if (shown++ == 20) {
      std::cerr << "... " << (report.failures.size() - 20) << " more\n";
      break;
    }
    std::cerr << failure << '\n';
  }
  throw InvariantError("verification found " +
                       std::to_string(report.failures.size()) + " violations");
}

void cmd_gen_example(const std::string& name,
                     const std::vector<std::string>& raw_params,
                     const std::string& out_path) {
  const GeneratedExample example =
      build_example(name, parse_param_list(raw_params));
  for (const auto& [key, value] : example.notes)
    std::cerr << "note " << key << "=" << format_number(value) << '\n';
  const std::string rendered =
      render_scenario_json(example.scenario, example.params);
  if (out_path.empty())
    std::cout << rendered;
  else
    write_text_file(out_path, rendered);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advance reservation auction with paid bump compensation"};
  app.require_subcommand(1);

  CommonOverrides overrides;
  std::string scenario_path;
  std::string out_path;
  std::string log_flag;
  std::string format = "table";

  auto add_common = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--alpha", [&](const CLI::results_t& res) {
      overrides.alpha = std::stod(res[0]);
      return true;
    }, "override the refund share");
    cmd->add_option("--gamma", [&](const CLI::results_t& res) {
      overrides.gamma = std::stod(res[0]);
      return true;
    }, "override the bump factor");
    cmd->add_option("--epsilon", [&](const CLI::results_t& res) {
      overrides.epsilon = std::stod(res[0]);
      return true;
    }, "override the minimum ladder bid");
    if (with_format)
      cmd->add_option("--format", format, "table or csv")
          ->check(CLI::IsMember({"table", "csv"}));
  };

  CLI::App* run_cmd = app.add_subcommand("run", "replay arrivals and settle");
  add_common(run_cmd, false);
  run_cmd->add_option("--out", out_path, "write the outcome JSON here");
  run_cmd->add_option("--log", log_flag, "quiet, info or trace")
      ->check(CLI::IsMember({"quiet", "info", "trace"}));

  CLI::App* thresholds_cmd =
      app.add_subcommand("thresholds", "acceptance and survival thresholds");
  add_common(thresholds_cmd, true);

  CLI::App* vcg_cmd =
      app.add_subcommand("vcg", "offline reference auction on the same bids");
  add_common(vcg_cmd, true);

  double alpha_min = 0.05, alpha_max = 0.6, tol = 1e-9;
  int steps = 56, grid = 10000;
  std::string n_list_text = "fib";
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "efficiency lower-bound curve data");
  bounds_cmd->add_option("--alpha-min", alpha_min, "first alpha");
  bounds_cmd->add_option("--alpha-max", alpha_max, "last alpha");
  bounds_cmd->add_option("--steps", steps, "number of grid points");
  bounds_cmd->add_option("--n-list", n_list_text, "fib or comma separated depths");
  bounds_cmd->add_option("--tol", tol, "bisection tolerance");
  bounds_cmd->add_option("--grid", grid, "scan cells per unit interval");
  bounds_cmd->add_option("--format", format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));

  std::uint64_t seed = 20250101;
  int count = 100;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "randomized structural property sweep");
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--count", count, "instances to draw");

  std::string example_name;
  std::vector<std::string> raw_params;
  CLI::App* gen_cmd = app.add_subcommand("gen-example", "emit a catalog scenario");
  gen_cmd->add_option("name", example_name, "one of the catalog names")->required();
  gen_cmd->add_option("--param", raw_params, "key=value override, repeatable");
  gen_cmd->add_option("--out", out_path, "write the scenario JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    if (run_cmd->parsed())
      cmd_run(scenario_path, overrides, out_path, log_flag);
    else if (thresholds_cmd->parsed())
      cmd_thresholds(scenario_path, overrides, format);
    else if (vcg_cmd->parsed())
      cmd_vcg(scenario_path, overrides, format);
    else if (bounds_cmd->parsed())
      cmd_bounds(alpha_min, alpha_max, steps, n_list_text, tol, grid, format);
    else if (verify_cmd->parsed())
      cmd_verify(seed, count);
    else if (gen_cmd->parsed())
      cmd_gen_example(example_name, raw_params, out_path);
  } catch (const ValidationError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  } catch (const IoError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  } catch (const InvariantError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 3;
  }
  return 0;
}
