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


// The twelve independent joint servos and the lossy link that feeds them.
//
// The central controller publishes one ServoMessage per joint each period.
// A servo only ever sees its own messages and its own joint's (q, qd); on
// loss it keeps applying the last command it received, feedforward
// included. Cross-coupling torque is perishable and is dropped once it is
// older than two central periods.

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "xrl/controller.hpp"
#include "xrl/types.hpp"

namespace xrl {

struct ChannelConfig {
  double period = 0.01;  // s, central send interval
  double delay = 0.0;    // s
  double drop_prob = 0.0;
  std::optional<double> kill_at;  // s
  std::uint64_t seed = 1;

  /// Throws ValidationError unless period > 0, delay >= 0 and
  /// 0 <= drop_prob <= 1.
  void validate() const;
};

/// What crosses the link for one joint.
struct ServoMessage {
  int joint = 0;
  ServoCommand command;
  double tau_cross = 0.0;  // N*m
};

/// Splits a central output into per-joint messages.
std::vector<ServoMessage> split_output(const CentralOutput& output);

/// Delay/drop/kill model of the central-to-servo link. Drops are drawn per
/// message from a seeded generator, so runs are reproducible.
class Channel {
 public:
  explicit Channel(ChannelConfig config);

  /// Queues `outbox` (sent at time t) and returns every message whose
  /// delivery time is <= t. Pass nullptr on ticks where the central
  /// controller sent nothing. Once killed, the queue is flushed and nothing
  /// is delivered until restore().
  std::vector<ServoMessage> step(const std::vector<ServoMessage>* outbox, double t);

  /// Kills or restores the link immediately (operator commands).
  void kill();
  void restore();

  bool alive() const { return !killed_; }
  const ChannelConfig& config() const { return config_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  struct InFlight {
    double deliver_at;
    ServoMessage message;
  };

  double uniform();

  ChannelConfig config_;
  std::mt19937_64 rng_;
  std::deque<InFlight> queue_;
  bool killed_ = false;
  bool kill_fired_ = false;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
};

struct ServoState {
  ServoCommand command;  // zero-order hold
  bool has_command = false;
  double last_rx_time = -1.0;
  bool link_alive = false;
  double tau_cross = 0.0;
  double cross_stamp = -1.0;  // send time of tau_cross
};

struct ServoLimits {
  double tau_max = 115.6;       // N*m
  double cross_lifetime = 0.02; // s, two central periods
  double link_timeout = 0.02;   // s without a message before link_alive drops
};

struct ServoOutput {
  double tau = 0.0;
  bool saturated = false;
};

/// Installs a received message if it is newer than the held command.
void servo_receive(ServoState& state, const ServoMessage& message, double t);

/// tau = k (q_ref - q) + b (0 - qd) + tau_ff + tau_cross, clamped to
/// +-tau_max. tau_cross counts only while the link is alive and the cross
/// torque is younger than cross_lifetime.
ServoOutput servo_tick(ServoState& state, double q, double qd, double t,
                       const ServoLimits& limits);

/// Twelve servos driven in lockstep. Each servo touches only its own slot.
class ServoBank {
 public:
  explicit ServoBank(const RobotParams& params, double central_period);

  void receive(const std::vector<ServoMessage>& messages, double t);
  JointVector tick(const JointVector& q, const JointVector& qd, double t);

  const ServoState& state(int joint) const { return states_[joint]; }
  bool saturated(int joint) const { return saturated_[joint]; }
  std::uint64_t saturation_events() const { return saturation_events_; }

 private:
  std::array<ServoState, kNumJoints> states_{};
  std::array<ServoLimits, kNumJoints> limits_{};
  std::array<bool, kNumJoints> saturated_{};
  std::uint64_t saturation_events_ = 0;
};

}  // namespace xrl
