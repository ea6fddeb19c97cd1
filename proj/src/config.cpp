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


#include "xrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace xrl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_values(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Errors raised inside setters; the parser attaches line and key.
struct BadValue {
  std::string message;
};

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw BadValue{"malformed number '" + std::string(s) + "'"};
  }
  if (!std::isfinite(v)) throw BadValue{"non-finite number '" + std::string(s) + "'"};
  return v;
}

std::uint64_t to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw BadValue{"malformed integer '" + std::string(s) + "'"};
  }
  return v;
}

double one_double(std::string_view value) {
  const auto parts = split_values(value);
  if (parts.size() != 1) throw BadValue{"expected one number"};
  return to_double(parts[0]);
}

std::vector<double> doubles(std::string_view value, std::size_t n) {
  const auto parts = split_values(value);
  if (parts.size() != n) {
    throw BadValue{"expected " + std::to_string(n) + " numbers, got " +
                   std::to_string(parts.size())};
  }
  std::vector<double> out;
  for (auto p : parts) out.push_back(to_double(p));
  return out;
}

bool to_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw BadValue{"expected a boolean, got '" + std::string(s) + "'"};
}

// A scalar broadcasts to the whole diagonal; otherwise one entry per joint.
JointMatrix joint_diagonal(std::string_view value) {
  const auto parts = split_values(value);
  JointVector d;
  if (parts.size() == 1) {
    d.setConstant(to_double(parts[0]));
  } else if (parts.size() == static_cast<std::size_t>(kNumJoints)) {
    for (int i = 0; i < kNumJoints; ++i) d[i] = to_double(parts[i]);
  } else {
    throw BadValue{"expected 1 or 12 numbers"};
  }
  return d.asDiagonal();
}

Mat6 task_diagonal(std::string_view value) {
  const auto v = doubles(value, kTaskDim);
  Vec6 d;
  for (int i = 0; i < kTaskDim; ++i) d[i] = v[i];
  return d.asDiagonal();
}

EventKind event_kind(std::string_view s) {
  static const std::map<std::string_view, EventKind> kinds = {
      {"comm_kill", EventKind::kCommKill},     {"comm_restore", EventKind::kCommRestore},
      {"push_x", EventKind::kPushX},           {"push_y", EventKind::kPushY},
      {"assist", EventKind::kAssist},          {"operator_z", EventKind::kOperatorZ},
      {"operator_theta", EventKind::kOperatorTheta},
  };
  const auto it = kinds.find(s);
  if (it == kinds.end()) throw BadValue{"unknown event kind '" + std::string(s) + "'"};
  return it->second;
}

Event parse_event(std::string_view value) {
  const auto parts = split_values(value);
  if (parts.size() < 2) throw BadValue{"event needs '<time> <kind> [value] [duration]'"};
  Event e;
  e.t = to_double(parts[0]);
  e.kind = event_kind(parts[1]);
  std::size_t want = 2;
  switch (e.kind) {
    case EventKind::kCommKill:
    case EventKind::kCommRestore:
      break;
    case EventKind::kPushX:
    case EventKind::kPushY:
    case EventKind::kAssist:
      want = 3;
      break;
    case EventKind::kOperatorZ:
    case EventKind::kOperatorTheta:
      want = 4;
      break;
  }
  if (parts.size() != want) {
    throw BadValue{std::string("event '") + event_name(e.kind) + "' takes " +
                   std::to_string(want - 2) + " argument(s)"};
  }
  if (want >= 3) e.value = to_double(parts[2]);
  if (want == 4) e.duration = to_double(parts[3]);
  return e;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

Setter number(double RobotParams::*field) {
  return [field](ScenarioConfig& c, std::string_view v) { c.robot.*field = one_double(v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["robot.m_act"] = number(&RobotParams::m_act);
    t["robot.m_batt"] = number(&RobotParams::m_batt);
    t["robot.m_pl"] = number(&RobotParams::m_pl);
    t["robot.l1"] = number(&RobotParams::l1);
    t["robot.l2"] = number(&RobotParams::l2);
    t["robot.w_hip"] = number(&RobotParams::w_hip);
    t["robot.w_base"] = number(&RobotParams::w_base);
    t["robot.l_foot"] = number(&RobotParams::l_foot);
    t["robot.w_foot"] = number(&RobotParams::w_foot);
    t["robot.g"] = number(&RobotParams::g);
    t["robot.tau_ankle_max"] = number(&RobotParams::tau_ankle_max);
    t["robot.tau_knee_max"] = number(&RobotParams::tau_knee_max);
    t["robot.tau_hip_max"] = number(&RobotParams::tau_hip_max);
    t["robot.f_assist"] = number(&RobotParams::f_assist);
    t["robot.torso_inertia"] = [](ScenarioConfig& c, std::string_view v) {
      const auto d = doubles(v, 3);
      c.robot.torso_inertia = Vec3(d[0], d[1], d[2]);
    };

    t["gains.kp"] = [](ScenarioConfig& c, std::string_view v) { c.gains.kp = task_diagonal(v); };
    t["gains.bp"] = [](ScenarioConfig& c, std::string_view v) { c.gains.bp = task_diagonal(v); };
    t["gains.k0"] = [](ScenarioConfig& c, std::string_view v) { c.gains.k0 = joint_diagonal(v); };
    t["gains.b0"] = [](ScenarioConfig& c, std::string_view v) { c.gains.b0 = joint_diagonal(v); };

    t["controller.open_loop"] = [](ScenarioConfig& c, std::string_view v) {
      const auto parts = split_values(v);
      if (parts.size() != kTaskDim) throw BadValue{"expected 6 flags"};
      for (int i = 0; i < kTaskDim; ++i) c.open_loop[i] = to_bool(parts[i]);
    };
    t["controller.setpoint"] = [](ScenarioConfig& c, std::string_view v) {
      const auto d = doubles(v, kTaskDim);
      for (int i = 0; i < kTaskDim; ++i) c.setpoint[i] = d[i];
    };
    t["controller.ik_damping"] = [](ScenarioConfig& c, std::string_view v) { c.ik.damping = one_double(v); };
    t["controller.ik_step_cap"] = [](ScenarioConfig& c, std::string_view v) { c.ik.step_cap = one_double(v); };
    t["controller.ik_max_iterations"] = [](ScenarioConfig& c, std::string_view v) {
      c.ik.max_iterations = static_cast<int>(to_uint(trim(v)));
    };
    t["controller.ik_tolerance"] = [](ScenarioConfig& c, std::string_view v) { c.ik.tolerance = one_double(v); };

    t["channel.period"] = [](ScenarioConfig& c, std::string_view v) { c.channel.period = one_double(v); };
    t["channel.delay"] = [](ScenarioConfig& c, std::string_view v) { c.channel.delay = one_double(v); };
    t["channel.drop_prob"] = [](ScenarioConfig& c, std::string_view v) { c.channel.drop_prob = one_double(v); };
    t["channel.kill_at"] = [](ScenarioConfig& c, std::string_view v) {
      if (trim(v) == "none") {
        c.channel.kill_at.reset();
      } else {
        c.channel.kill_at = one_double(v);
      }
    };
    t["channel.seed"] = [](ScenarioConfig& c, std::string_view v) { c.channel.seed = to_uint(trim(v)); };

    t["operator.z0"] = [](ScenarioConfig& c, std::string_view v) { c.op.z.reset(one_double(v)); };
    t["operator.theta0"] = [](ScenarioConfig& c, std::string_view v) { c.op.theta.reset(one_double(v)); };
    t["operator.k_hz"] = [](ScenarioConfig& c, std::string_view v) { c.op.k_hz = one_double(v); };
    t["operator.b_hz"] = [](ScenarioConfig& c, std::string_view v) { c.op.b_hz = one_double(v); };
    t["operator.k_htheta"] = [](ScenarioConfig& c, std::string_view v) { c.op.k_htheta = one_double(v); };
    t["operator.b_htheta"] = [](ScenarioConfig& c, std::string_view v) { c.op.b_htheta = one_double(v); };
    t["operator.max_force"] = [](ScenarioConfig& c, std::string_view v) { c.op.max_force = one_double(v); };
    t["operator.max_moment"] = [](ScenarioConfig& c, std::string_view v) { c.op.max_moment = one_double(v); };
    t["operator.rest_load"] = [](ScenarioConfig& c, std::string_view v) {
      if (trim(v) == "assist") {
        c.rest_load_follows_assist = true;
      } else {
        c.rest_load_follows_assist = false;
        c.op.rest_load = one_double(v);
      }
    };

    t["sim.duration"] = [](ScenarioConfig& c, std::string_view v) { c.duration = one_double(v); };
    t["sim.dt"] = [](ScenarioConfig& c, std::string_view v) { c.dt = one_double(v); };
    t["sim.seed"] = [](ScenarioConfig& c, std::string_view v) { c.seed = to_uint(trim(v)); };
    t["sim.noise_q"] = [](ScenarioConfig& c, std::string_view v) { c.noise_q = one_double(v); };
    t["sim.noise_qd"] = [](ScenarioConfig& c, std::string_view v) { c.noise_qd = one_double(v); };
    t["sim.push_duration"] = [](ScenarioConfig& c, std::string_view v) { c.push_duration = one_double(v); };

    t["balance.z_max"] = [](ScenarioConfig& c, std::string_view v) { c.balance.z_max = one_double(v); };
    t["balance.m_tot"] = [](ScenarioConfig& c, std::string_view v) { c.balance.m_tot = one_double(v); };
    t["balance.edge"] = [](ScenarioConfig& c, std::string_view v) {
      const auto s = trim(v);
      if (s == "width") {
        c.balance.edge = EdgeDimension::kFootWidth;
      } else if (s == "length") {
        c.balance.edge = EdgeDimension::kFootLength;
      } else {
        throw BadValue{"expected 'width' or 'length'"};
      }
    };

    t["criteria.xy_tolerance"] = [](ScenarioConfig& c, std::string_view v) { c.criteria.xy_tolerance = one_double(v); };
    t["criteria.angle_tolerance_deg"] = [](ScenarioConfig& c, std::string_view v) {
      c.criteria.angle_tolerance_deg = one_double(v);
    };
    t["criteria.z_tracking_tolerance"] = [](ScenarioConfig& c, std::string_view v) {
      c.criteria.z_tracking_tolerance = one_double(v);
    };
    t["criteria.settle_tolerance"] = [](ScenarioConfig& c, std::string_view v) {
      c.criteria.settle_tolerance = one_double(v);
    };
    t["criteria.settle_time"] = [](ScenarioConfig& c, std::string_view v) { c.criteria.settle_time = one_double(v); };

    t["output.trace"] = [](ScenarioConfig& c, std::string_view v) { c.trace_path = std::string(trim(v)); };
    t["output.summary"] = [](ScenarioConfig& c, std::string_view v) { c.summary_path = std::string(trim(v)); };

    t["events.event"] = [](ScenarioConfig& c, std::string_view v) { c.events.push_back(parse_event(v)); };
    return t;
  }();
  return table;
}

}  // namespace

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::kCommKill: return "comm_kill";
    case EventKind::kCommRestore: return "comm_restore";
    case EventKind::kPushX: return "push_x";
    case EventKind::kPushY: return "push_y";
    case EventKind::kAssist: return "assist";
    case EventKind::kOperatorZ: return "operator_z";
    case EventKind::kOperatorTheta: return "operator_theta";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  robot.validate();
  channel.validate();
  op.validate();
  if (!(duration >= 0.0)) throw ValidationError("sim.duration must be non-negative");
  if (!(dt > 0.0)) throw ValidationError("sim.dt must be positive");
  const double ratio = channel.period / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
    throw ValidationError("channel.period must be a whole multiple of sim.dt");
  }
  if (!(push_duration > 0.0)) throw ValidationError("sim.push_duration must be positive");
  if (noise_q < 0.0 || noise_qd < 0.0) throw ValidationError("sensor noise must be non-negative");
  if ((gains.k0.diagonal().array() < 0.0).any() || (gains.b0.diagonal().array() < 0.0).any()) {
    throw ValidationError("gains.k0 and gains.b0 must be non-negative");
  }
  if ((gains.kp.diagonal().array() < 0.0).any() || (gains.bp.diagonal().array() < 0.0).any()) {
    throw ValidationError("gains.kp and gains.bp must be non-negative");
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t < events[i - 1].t) throw ValidationError("events must be sorted by time");
  }
  for (const Event& e : events) {
    if ((e.kind == EventKind::kOperatorZ || e.kind == EventKind::kOperatorTheta) &&
        !(e.duration > 0.0)) {
      throw ValidationError("operator move events need a positive duration");
    }
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  // Parsing starts from the library defaults, not from the squat scenario.
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, std::string(line), "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(line_no, "", "empty section name");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    }
    const std::string_view raw_key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (raw_key.empty()) throw ConfigError(line_no, "", "missing key");
    const std::string key =
        section.empty() ? std::string(raw_key) : section + "." + std::string(raw_key);

    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line_no, key, "unknown key");
    if (key != "events.event" && !seen.insert(key).second) {
      throw ConfigError(line_no, key, "duplicate key");
    }
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    try {
      it->second(cfg, value);
    } catch (const BadValue& e) {
      throw ConfigError(line_no, key, e.message);
    }
    if (end == text.size()) break;
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(0, "", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ScenarioConfig default_squat_config() {
  ScenarioConfig cfg;
  cfg.op.z.reset(0.90);
  cfg.channel.kill_at = 10.0;
  cfg.events = {
      {1.0, EventKind::kOperatorZ, 0.70, 8.0},
      {12.0, EventKind::kPushY, 50.0, 0.0},
  };
  return cfg;
}

}  // namespace xrl
