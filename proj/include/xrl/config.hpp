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


// Scenario configuration and its plain-text format.
//
// The format is INI-like: `[section]` headers, `key = value` lines, `#` or
// `;` comments. A key may also be written fully qualified outside any
// section (`channel.kill_at = 10.0`). Unknown keys, duplicate keys and
// malformed values are errors. See docs/config.md for every key.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xrl/balance.hpp"
#include "xrl/controller.hpp"
#include "xrl/operator.hpp"
#include "xrl/params.hpp"
#include "xrl/servo_network.hpp"

namespace xrl {

enum class EventKind {
  kCommKill,
  kCommRestore,
  kPushX,          // value: impulse, N*s
  kPushY,          // value: impulse, N*s
  kAssist,         // value: assist force, N
  kOperatorZ,      // value: target COM height, m; duration: s
  kOperatorTheta,  // value: target pitch, rad; duration: s
};

const char* event_name(EventKind kind);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::kCommKill;
  double value = 0.0;
  double duration = 0.0;
};

struct Criteria {
  double xy_tolerance = 0.02;        // m, COM x/y deviation before the first push
  double angle_tolerance_deg = 2.0;  // roll and yaw
  double z_tracking_tolerance = 0.05;  // m, |z_COM - z_h| during operator moves
  double settle_tolerance = 0.05;    // m, post-disturbance return band
  double settle_time = 10.0;         // s
};

struct ScenarioConfig {
  RobotParams robot;
  GainConfig gains = GainConfig::xrl_default();
  std::array<bool, kTaskDim> open_loop{false, false, true, false, true, false};
  TaskPose setpoint = TaskPose::Zero();
  IkOptions ik;
  ChannelConfig channel;
  OperatorModel op;
  bool rest_load_follows_assist = true;
  double duration = 22.0;  // s
  double dt = 0.001;       // s
  double push_duration = 0.1;  // s, length of the force pulse carrying a push impulse
  std::uint64_t seed = 1;
  double noise_q = 0.0;   // rad, half-width of uniform sensor noise
  double noise_qd = 0.0;  // rad/s
  std::vector<Event> events;
  BalanceOptions balance;
  Criteria criteria;
  std::string trace_path;
  std::string summary_path;

  /// Throws ValidationError on inconsistent values.
  void validate() const;
};

/// Parses the text format. Throws ConfigError carrying the line and key.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a file. Relative output paths stay relative to the
/// working directory.
ScenarioConfig load_config(const std::string& path);

/// The built-in squat: hold at z_COM = 0.90 m, operator leads the descent
/// to 0.70 m between 1 s and 9 s, link killed at 10 s, 50 N*s lateral push
/// at 12 s, 22 s total.
ScenarioConfig default_squat_config();

}  // namespace xrl
