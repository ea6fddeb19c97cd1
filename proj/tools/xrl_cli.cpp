// Copyright 2026 The XRL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// xrl: run scenarios, print balance margins, self-check, serve the bridge.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "self_check.hpp"
#include "xrl/balance.hpp"
#include "xrl/bridge.hpp"
#include "xrl/config.hpp"
#include "xrl/scenario.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

// Empty path selects the built-in squat.
xrl::ScenarioConfig config_from(const std::string& path) {
  return path.empty() ? xrl::default_squat_config() : xrl::load_config(path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw xrl::Error("cannot open '" + path + "' for writing");
  return f;
}

int cmd_run(const std::string& path, std::string trace_path, std::string summary_path,
            std::optional<double> duration, bool json) {
  xrl::ScenarioConfig config = config_from(path);
  if (duration) config.duration = *duration;
  config.validate();
  if (trace_path.empty()) trace_path = config.trace_path;
  if (summary_path.empty()) summary_path = config.summary_path;

  std::optional<std::ofstream> trace;
  if (!trace_path.empty()) trace = open_out(trace_path);
  const xrl::RunSummary s = xrl::run_scenario(config, trace ? &*trace : nullptr);
  std::cout << (json ? xrl::summary_json(s) + "\n" : xrl::format_summary(s));
  if (!summary_path.empty()) open_out(summary_path) << xrl::summary_json(s) << "\n";
  return s.verdict == xrl::Verdict::kStable ? 0 : 1;
}

int cmd_balance(const std::string& path, bool json) {
  const xrl::ScenarioConfig config = config_from(path);
  const xrl::BalanceReport r = xrl::balance_report(config.robot, config.balance);
  std::cout << (json ? xrl::report_json(r) + "\n" : xrl::format_report(r));
  return r.recoverable ? 0 : 1;
}

int cmd_serve(const std::string& path, const std::string& host, unsigned short port, bool no_pace,
              double max_seconds, const std::string& trace_path) {
  const xrl::ScenarioConfig config = config_from(path);
  config.validate();
  xrl::ServeOptions options;
  options.bridge.host = host;
  options.bridge.port = port;
  options.bridge.log = &std::clog;
  options.pace = !no_pace;
  options.max_wall_seconds = max_seconds;
  options.stop = &g_stop;
  std::optional<std::ofstream> trace;
  if (!trace_path.empty()) {
    trace = open_out(trace_path);
    options.trace = &*trace;
  }
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const xrl::RunSummary s = xrl::serve(config, options);
  std::cout << xrl::format_summary(s);
  return s.verdict == xrl::Verdict::kStable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XRL two-leg closed-chain simulator and controller"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string summary_path;
  std::optional<double> duration;
  bool json = false;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and print its summary");
  run->add_option("config", config_path, "Scenario config (default: built-in squat)")
      ->check(CLI::ExistingFile);
  run->add_option("--trace", trace_path, "Write the per-tick CSV trace here");
  run->add_option("--summary", summary_path, "Write the JSON summary here");
  run->add_option("--duration", duration, "Override the simulated duration (s)");
  run->add_flag("--json", json, "Print the summary as JSON");

  CLI::App* balance = app.add_subcommand("balance", "Print the static balance margins");
  balance->add_option("config", config_path, "Config supplying robot and balance keys")
      ->check(CLI::ExistingFile);
  balance->add_flag("--json", json, "Print JSON");

  app.add_subcommand("check", "Run the invariant self-checks");

  std::string host = "127.0.0.1";
  unsigned short port = 8765;
  bool no_pace = false;
  double max_seconds = 0.0;
  CLI::App* serve = app.add_subcommand("serve", "Run a live session behind the websocket bridge");
  serve->add_option("config", config_path, "Scenario config (default: built-in squat)")
      ->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port")->capture_default_str();
  serve->add_flag("--no-pace", no_pace, "Run as fast as possible instead of in real time");
  serve->add_option("--max-seconds", max_seconds, "Stop after this much wall time (0: never)");
  serve->add_option("--trace", trace_path, "Write the CSV trace here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, trace_path, summary_path, duration, json);
    if (balance->parsed()) return cmd_balance(config_path, json);
    if (serve->parsed()) return cmd_serve(config_path, host, port, no_pace, max_seconds, trace_path);
    return xrl::tools::run_self_check(std::cout) == 0 ? 0 : 1;
  } catch (const xrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
