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


#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xrl/config.hpp"
#include "xrl/model.hpp"
#include "xrl/scenario.hpp"

using namespace xrl;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::string traced(const ScenarioConfig& c, RunSummary* summary = nullptr) {
  std::ostringstream trace;
  const RunSummary s = run_scenario(c, &trace);
  if (summary) *summary = s;
  return trace.str();
}

}  // namespace

TEST_CASE("balanced initial state matches the requested pose") {
  const RobotParams p;
  for (double z : {0.66, 0.75, 0.9}) {
    const SimState s = balanced_state(p, z, 0.05);
    const TaskPose pose = task_pose(s.q, p);
    CHECK(pose[kZ] == doctest::Approx(z).epsilon(1e-10));
    CHECK(pose[kPitch] == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(std::abs(pose[kX]) < 1e-10);
    CHECK(std::abs(pose[kRoll]) < 1e-10);
  }
}

TEST_CASE("zero duration gives an empty trace and passes") {
  ScenarioConfig c = default_squat_config();
  c.duration = 0.0;
  RunSummary s;
  const auto lines = lines_of(traced(c, &s));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == trace_header());
  CHECK(s.verdict == Verdict::kStable);
  CHECK(s.ticks == 0);
}

TEST_CASE("trace rows are complete and consecutive") {
  ScenarioConfig c = default_squat_config();
  c.duration = 0.3;
  const auto lines = lines_of(traced(c));
  REQUIRE(lines.size() == 301);
  const std::size_t n = fields(lines[0]);
  for (const std::string& want : {"t", "u_x", "ud_yaw", "p_z_com", "q_knee_theta_l",
                                  "tau_hip_phi_r", "fop_fz", "link_alive"}) {
    CHECK(lines[0].find(want) != std::string::npos);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(fields(lines[i]) == n);
    const double t = std::stod(lines[i].substr(0, lines[i].find(',')));
    CHECK(t == doctest::Approx(0.001 * static_cast<double>(i - 1)));
  }
}

TEST_CASE("same config and seed give byte-identical traces") {
  ScenarioConfig c = default_squat_config();
  c.duration = 1.5;
  c.noise_q = 1e-4;
  c.noise_qd = 1e-3;
  c.channel.drop_prob = 0.1;
  c.channel.delay = 0.002;
  const std::string a = traced(c), b = traced(c);
  CHECK(a == b);
  c.seed = 2;
  CHECK(traced(c) != a);
}

TEST_CASE("holding still: no drift, open loop stays disconnected") {
  ScenarioConfig c;
  c.duration = 2.0;
  RunSummary s;
  traced(c, &s);
  CHECK(s.verdict == Verdict::kStable);
  CHECK(s.max_xy_dev < 1e-3);
  CHECK(s.max_open_loop_error == 0.0);
  CHECK(s.max_open_loop_force == 0.0);
  CHECK(s.central_ticks == 200);
  CHECK(s.max_closure_gap < 1e-8);
}

TEST_CASE("operator leads the descent") {
  ScenarioConfig c = default_squat_config();
  c.duration = 9.5;
  c.events = {{1.0, EventKind::kOperatorZ, 0.75, 8.0}};
  c.channel.kill_at.reset();
  Simulation sim(c);
  double last_z = 1.0;
  bool monotone = true;
  while (sim.advance()) {
    const TickRecord& r = sim.last_record();
    if (r.t > 1.5 && r.t < 8.5 && r.tick % 100 == 0) {
      monotone = monotone && r.p[kZ] < last_z;
      last_z = r.p[kZ];
    }
  }
  CHECK(monotone);
  const RunSummary& s = sim.summary();
  CHECK(s.verdict == Verdict::kStable);
  CHECK(s.z_tracked);
  CHECK(s.max_z_tracking_error < 0.05);
  CHECK(sim.last_record().p[kZ] == doctest::Approx(0.75).epsilon(0.01));
}

TEST_CASE("link kill is visible in the records") {
  ScenarioConfig c;
  c.duration = 0.6;
  c.channel.kill_at = 0.3;
  bool alive_before = true, dead_after = true;
  Simulation sim(c);
  while (sim.advance()) {
    const TickRecord& r = sim.last_record();
    if (r.t < 0.29) alive_before = alive_before && r.link_alive;
    if (r.t > 0.33) dead_after = dead_after && !r.link_alive;
  }
  CHECK(alive_before);
  CHECK(dead_after);
  CHECK(sim.summary().killed);
}

TEST_CASE("without gains the loaded robot falls") {
  ScenarioConfig c = default_squat_config();
  c.gains = GainConfig{};
  RunSummary s;
  s = run_scenario(c);
  CHECK(s.verdict == Verdict::kUnstable);
  CHECK(s.fell);
  CHECK(s.ticks < 22000);
}

TEST_CASE("runtime errors abort with the tick index") {
  ScenarioConfig c;
  c.duration = 5.0;
  c.op.max_force = 4000.0;
  c.events = {{0.1, EventKind::kOperatorZ, 2.0, 0.5}};
  RunSummary s;
  s = run_scenario(c);
  CHECK(s.verdict == Verdict::kUnstable);
  CHECK((s.aborted || s.fell));
  if (s.aborted) CHECK(s.reason.find("tick") != std::string::npos);
}

TEST_CASE("steering applies at the current time") {
  ScenarioConfig c;
  c.duration = 1.0;
  Simulation sim(c);
  for (int i = 0; i < 100; ++i) sim.advance();
  sim.steer({Steering::Kind::kOperatorZ, 0.85, 0.5});
  sim.steer({Steering::Kind::kKill});
  while (sim.advance()) {
  }
  CHECK(sim.last_record().z_h == doctest::Approx(0.85));
  CHECK_FALSE(sim.last_record().link_alive);
}

TEST_CASE("summary renders as text and JSON") {
  ScenarioConfig c;
  c.duration = 0.2;
  const RunSummary s = run_scenario(c);
  CHECK(format_summary(s).find("verdict: STABLE") != std::string::npos);
  const auto j = nlohmann::json::parse(summary_json(s));
  CHECK(j.at("verdict") == "STABLE");
  CHECK(j.at("ticks") == 200);
}
