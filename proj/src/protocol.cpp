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


#include "xrl/protocol.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace xrl {

namespace {

using nlohmann::json;

template <typename V>
json array_of(const V& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <typename V>
void read_array(const json& j, const char* key, V& out) {
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != static_cast<std::size_t>(out.size())) {
    throw ValidationError(std::string("field '") + key + "' has the wrong length");
  }
  for (int i = 0; i < out.size(); ++i) out[i] = a[i].get<double>();
}

json parse_object(std::string_view text, const char* type) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("message is not a JSON object");
  if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != kProtocolVersion) {
    throw ValidationError("unsupported protocol version (expected v = 1)");
  }
  if (!j.contains("type") || !j["type"].is_string() || j["type"].get<std::string>() != type) {
    throw ValidationError(std::string("expected a message of type '") + type + "'");
  }
  return j;
}

constexpr std::array<CommandKind, 9> kAllKinds = {
    CommandKind::kSetOperatorZ, CommandKind::kSetOperatorTheta, CommandKind::kSetAssistForce,
    CommandKind::kKillComms,    CommandKind::kRestoreComms,     CommandKind::kPushX,
    CommandKind::kPause,        CommandKind::kResume,           CommandKind::kReset,
};

}  // namespace

std::string encode_telemetry(const TelemetryFrame& f) {
  json j;
  j["v"] = kProtocolVersion;
  j["type"] = "telemetry";
  j["frame"] = f.frame;
  j["t"] = f.t;
  j["p"] = array_of(f.p);
  j["p_ref"] = array_of(f.p_ref);
  j["q"] = array_of(f.q);
  j["tau"] = array_of(f.tau);
  j["f_op"] = array_of(f.f_op);
  j["link_alive"] = f.link_alive;
  j["z_h"] = f.z_h;
  j["theta_h"] = f.theta_h;
  j["assist"] = f.assist;
  j["flags"] = {{"paused", f.paused},
                {"finished", f.finished},
                {"fell", f.fell},
                {"aborted", f.aborted},
                {"hessian_dropped", f.hessian_dropped},
                {"ik_failed", f.ik_failed},
                {"saturated", f.saturated}};
  j["verdict"] = f.verdict;
  return j.dump();
}

TelemetryFrame decode_telemetry(std::string_view text) {
  const json j = parse_object(text, "telemetry");
  TelemetryFrame f;
  try {
    f.frame = j.at("frame").get<std::uint64_t>();
    f.t = j.at("t").get<double>();
    read_array(j, "p", f.p);
    read_array(j, "p_ref", f.p_ref);
    read_array(j, "q", f.q);
    read_array(j, "tau", f.tau);
    read_array(j, "f_op", f.f_op);
    f.link_alive = j.at("link_alive").get<bool>();
    f.z_h = j.at("z_h").get<double>();
    f.theta_h = j.at("theta_h").get<double>();
    f.assist = j.at("assist").get<double>();
    const json& flags = j.at("flags");
    f.paused = flags.at("paused").get<bool>();
    f.finished = flags.at("finished").get<bool>();
    f.fell = flags.at("fell").get<bool>();
    f.aborted = flags.at("aborted").get<bool>();
    f.hessian_dropped = flags.at("hessian_dropped").get<bool>();
    f.ik_failed = flags.at("ik_failed").get<bool>();
    f.saturated = flags.at("saturated").get<bool>();
    f.verdict = j.at("verdict").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed telemetry: ") + e.what());
  }
  return f;
}

const char* command_name(CommandKind kind) {
  switch (kind) {
    case CommandKind::kSetOperatorZ: return "set_operator_z";
    case CommandKind::kSetOperatorTheta: return "set_operator_theta";
    case CommandKind::kSetAssistForce: return "set_assist_force";
    case CommandKind::kKillComms: return "kill_comms";
    case CommandKind::kRestoreComms: return "restore_comms";
    case CommandKind::kPushX: return "push_x";
    case CommandKind::kPause: return "pause";
    case CommandKind::kResume: return "resume";
    case CommandKind::kReset: return "reset";
  }
  return "?";
}

std::optional<ValueRange> command_range(CommandKind kind) {
  switch (kind) {
    case CommandKind::kSetOperatorZ: return ValueRange{0.3, 1.0, "m"};
    case CommandKind::kSetOperatorTheta: return ValueRange{-0.6, 0.6, "rad"};
    case CommandKind::kSetAssistForce: return ValueRange{0.0, 200.0, "N"};
    case CommandKind::kPushX: return ValueRange{-100.0, 100.0, "N*s"};
    default: return std::nullopt;
  }
}

std::string encode_command(const CommandMessage& c) {
  json j;
  j["v"] = kProtocolVersion;
  j["type"] = "command";
  j["kind"] = command_name(c.kind);
  j["value"] = c.value;
  j["client"] = c.client;
  j["seq"] = c.seq;
  return j.dump();
}

CommandMessage decode_command(std::string_view text, std::string* client, std::uint64_t* seq) {
  const json j = parse_object(text, "command");
  CommandMessage c;
  if (!j.contains("client") || !j["client"].is_string()) {
    throw ValidationError("command needs a string 'client'");
  }
  c.client = j["client"].get<std::string>();
  if (client) *client = c.client;
  if (!j.contains("seq") || !j["seq"].is_number_unsigned()) {
    throw ValidationError("command needs a non-negative integer 'seq'");
  }
  c.seq = j["seq"].get<std::uint64_t>();
  if (seq) *seq = c.seq;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError("command needs a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  bool found = false;
  for (CommandKind k : kAllKinds) {
    if (kind == command_name(k)) {
      c.kind = k;
      found = true;
    }
  }
  if (!found) throw ValidationError("unknown command kind '" + kind + "'");
  const auto range = command_range(c.kind);
  if (range) {
    if (!j.contains("value") || !j["value"].is_number()) {
      throw ValidationError(kind + " needs a numeric 'value'");
    }
    c.value = j["value"].get<double>();
    if (!std::isfinite(c.value) || c.value < range->lo || c.value > range->hi) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s value %g outside [%g, %g] %s", kind.c_str(), c.value,
                    range->lo, range->hi, range->unit);
      throw ValidationError(buf);
    }
  }
  return c;
}

std::string encode_ack(const Ack& a) {
  json j;
  j["v"] = kProtocolVersion;
  j["type"] = "ack";
  j["client"] = a.client;
  j["seq"] = a.seq;
  j["ok"] = a.ok;
  if (!a.ok) j["error"] = a.error;
  return j.dump();
}

Ack decode_ack(std::string_view text) {
  const json j = parse_object(text, "ack");
  Ack a;
  try {
    a.client = j.at("client").get<std::string>();
    a.seq = j.at("seq").get<std::uint64_t>();
    a.ok = j.at("ok").get<bool>();
    if (!a.ok) a.error = j.at("error").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ack: ") + e.what());
  }
  return a;
}

std::string encode_heartbeat(double t, bool paused, bool finished) {
  json j;
  j["v"] = kProtocolVersion;
  j["type"] = "heartbeat";
  j["t"] = t;
  j["paused"] = paused;
  j["finished"] = finished;
  return j.dump();
}

bool SequenceTracker::accept(const std::string& client, std::uint64_t seq) {
  const auto it = last_.find(client);
  if (it != last_.end() && seq <= it->second) return false;
  last_[client] = seq;
  return true;
}

void SequenceTracker::forget(const std::string& client) { last_.erase(client); }

}  // namespace xrl
