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

#include <fstream>
#include <sstream>

#include "xrl/config.hpp"

using namespace xrl;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError(0, "", "");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("empty text gives the documented defaults") {
  const ScenarioConfig c = parse_config("");
  const RobotParams p;
  CHECK(c.robot.l1 == p.l1);
  CHECK(c.robot.l2 == p.l2);
  CHECK(c.robot.w_hip == p.w_hip);
  CHECK(c.robot.m_pl == p.m_pl);
  CHECK(c.gains.kp == GainConfig::xrl_default().kp);
  CHECK(c.dt == 0.001);
  CHECK(c.channel.period == 0.01);
  CHECK_FALSE(c.channel.kill_at.has_value());
  CHECK(c.events.empty());
  CHECK(parse_config("\n# only a comment\n\n").events.empty());
}

TEST_CASE("kill time from a qualified key") {
  const ScenarioConfig c = parse_config("channel.kill_at = 10.0\n");
  REQUIRE(c.channel.kill_at.has_value());
  CHECK(*c.channel.kill_at == 10.0);
  CHECK_FALSE(parse_config("[channel]\nkill_at = none\n").channel.kill_at.has_value());
}

TEST_CASE("sections, comments and lists") {
  const ScenarioConfig c = parse_config(
      "[robot]\n"
      "m_pl = 0   ; no payload\n"
      "torso_inertia = 1, 2, 3\n"
      "[gains]\n"
      "k0 = 1 2 3 4 5 6 7 8 9 10 11 12\n"
      "[controller]\n"
      "open_loop = 0 0 1 0 0 0\n"
      "[operator]\n"
      "rest_load = 50\n"
      "[balance]\n"
      "edge = length\n");
  CHECK(c.robot.m_pl == 0.0);
  CHECK(c.robot.torso_inertia == Vec3(1, 2, 3));
  CHECK(c.gains.k0(11, 11) == 12.0);
  CHECK(c.gains.k0(0, 1) == 0.0);
  CHECK_FALSE(c.open_loop[kPitch]);
  CHECK(c.open_loop[kZ]);
  CHECK(c.op.rest_load == 50.0);
  CHECK_FALSE(c.rest_load_follows_assist);
  CHECK(c.balance.edge == EdgeDimension::kFootLength);
}

TEST_CASE("events parse in order") {
  const ScenarioConfig c = parse_config(
      "[events]\n"
      "event = 1.0 operator_z 0.7 8\n"
      "event = 10 comm_kill\n"
      "event = 12 push_y 50\n"
      "event = 15 assist 100\n");
  REQUIRE(c.events.size() == 4);
  CHECK(c.events[0].kind == EventKind::kOperatorZ);
  CHECK(c.events[0].duration == 8.0);
  CHECK(c.events[1].kind == EventKind::kCommKill);
  CHECK(c.events[2].value == 50.0);
  CHECK(c.events[3].kind == EventKind::kAssist);
}

TEST_CASE("malformed number names the key and line") {
  const ConfigError e = parse_error("[robot]\nl1 = 0.26x7\n");
  CHECK(e.line == 2);
  CHECK(e.key == "robot.l1");
  CHECK(std::string(e.what()).find("malformed number") != std::string::npos);
}

TEST_CASE("configuration errors") {
  CHECK(parse_error("[robot]\nl3 = 1\n").key == "robot.l3");
  CHECK(parse_error("sim.dt = 0.001\nsim.dt = 0.002\n").line == 2);
  CHECK(std::string(parse_error("sim.dt =\n").what()).find("missing value") != std::string::npos);
  CHECK(parse_error("[robot\n").line == 1);
  CHECK(parse_error("just words\n").line == 1);
  CHECK(parse_error("gains.kp = 1 2 3\n").key == "gains.kp");
  CHECK(parse_error("events.event = 1 jump\n").key == "events.event");
  CHECK(parse_error("events.event = 1 push_x\n").key == "events.event");
  CHECK(parse_error("controller.open_loop = 0 0 maybe 0 1 0\n").key == "controller.open_loop");
  CHECK(parse_error("sim.dt = inf\n").key == "sim.dt");
}

TEST_CASE("semantic validation runs after parsing") {
  parse_error("events.event = 5 comm_kill\nevents.event = 1 comm_kill\n");
  parse_error("sim.dt = 0.003\n");  // 10 ms is not a multiple of 3 ms
  parse_error("channel.drop_prob = 2\n");
  parse_error("robot.l1 = -1\n");
  parse_error("events.event = 1 operator_z 0.7 0\n");
  parse_error("gains.k0 = -1\n");
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/xrl.cfg"), ConfigError);
}

TEST_CASE("shipped squat config equals the built-in squat") {
  const ScenarioConfig file = parse_config(read_file(XRL_SOURCE_DIR "/configs/squat.cfg"));
  const ScenarioConfig built = default_squat_config();
  CHECK(file.gains.kp == built.gains.kp);
  CHECK(file.gains.bp == built.gains.bp);
  CHECK(file.gains.k0 == built.gains.k0);
  CHECK(file.gains.b0 == built.gains.b0);
  CHECK(file.op.z.initial() == built.op.z.initial());
  CHECK(file.channel.kill_at == built.channel.kill_at);
  CHECK(file.duration == built.duration);
  REQUIRE(file.events.size() == built.events.size());
  for (std::size_t i = 0; i < file.events.size(); ++i) {
    CHECK(file.events[i].t == built.events[i].t);
    CHECK(file.events[i].kind == built.events[i].kind);
    CHECK(file.events[i].value == built.events[i].value);
    CHECK(file.events[i].duration == built.events[i].duration);
  }
}

TEST_CASE("built-in squat is a valid config") {
  CHECK_NOTHROW(default_squat_config().validate());
}
