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


// JSON message schema shared by the bridge and its clients. Every message
// is one JSON object carrying "v" (schema version) and "type". See
// docs/bridge_protocol.md for the field-by-field description.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "xrl/types.hpp"

namespace xrl {

inline constexpr int kProtocolVersion = 1;

struct TelemetryFrame {
  std::uint64_t frame = 0;  // publisher's frame counter
  double t = 0.0;
  TaskPose p = TaskPose::Zero();
  TaskPose p_ref = TaskPose::Zero();
  JointVector q = JointVector::Zero();
  JointVector tau = JointVector::Zero();
  Wrench f_op = Wrench::Zero();
  bool link_alive = true;
  double z_h = 0.0;
  double theta_h = 0.0;
  double assist = 0.0;
  // Verdict flags.
  bool paused = false;
  bool finished = false;
  bool fell = false;
  bool aborted = false;
  bool hessian_dropped = false;
  bool ik_failed = false;
  bool saturated = false;
  std::string verdict;  // empty while running
};

std::string encode_telemetry(const TelemetryFrame& frame);
/// Throws ValidationError on malformed input or a version mismatch.
TelemetryFrame decode_telemetry(std::string_view text);

enum class CommandKind {
  kSetOperatorZ,
  kSetOperatorTheta,
  kSetAssistForce,
  kKillComms,
  kRestoreComms,
  kPushX,
  kPause,
  kResume,
  kReset,
};

const char* command_name(CommandKind kind);

struct CommandMessage {
  CommandKind kind = CommandKind::kPause;
  double value = 0.0;
  std::string client;
  std::uint64_t seq = 0;
};

/// Range of accepted values for a command kind; nullopt when the value is
/// ignored.
struct ValueRange {
  double lo;
  double hi;
  const char* unit;
};
std::optional<ValueRange> command_range(CommandKind kind);

std::string encode_command(const CommandMessage& command);

/// Parses and range-checks a command. Throws ValidationError with a message
/// fit to send back to the client; `client` and `seq` are filled in as far
/// as they could be read so the error can still be acknowledged.
CommandMessage decode_command(std::string_view text, std::string* client = nullptr,
                              std::uint64_t* seq = nullptr);

struct Ack {
  std::string client;
  std::uint64_t seq = 0;
  bool ok = true;
  std::string error;
};

std::string encode_ack(const Ack& ack);
Ack decode_ack(std::string_view text);

std::string encode_heartbeat(double t, bool paused, bool finished);

/// Per-client monotone sequence check.
class SequenceTracker {
 public:
  /// True when `seq` is greater than every sequence number seen from
  /// `client`; records it in that case.
  bool accept(const std::string& client, std::uint64_t seq);
  void forget(const std::string& client);

 private:
  std::map<std::string, std::uint64_t> last_;
};

}  // namespace xrl
