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


#include "xrl/servo_network.hpp"

#include <algorithm>
#include <cmath>

namespace xrl {

void ChannelConfig::validate() const {
  if (!(period > 0.0)) throw ValidationError("channel period must be positive");
  if (!(delay >= 0.0)) throw ValidationError("channel delay must be non-negative");
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
    throw ValidationError("channel drop probability must lie in [0, 1]");
  }
}

std::vector<ServoMessage> split_output(const CentralOutput& output) {
  std::vector<ServoMessage> out(kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) out[i] = {i, output.servo[i], output.tau_cross[i]};
  return out;
}

Channel::Channel(ChannelConfig config) : config_(config), rng_(config.seed) {
  config_.validate();
}

// 53 random bits; std::uniform_real_distribution is not specified
// bit-for-bit across standard libraries.
double Channel::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::vector<ServoMessage> Channel::step(const std::vector<ServoMessage>* outbox, double t) {
  if (config_.kill_at && !kill_fired_ && t >= *config_.kill_at) {
    kill_fired_ = true;
    kill();
  }
  if (outbox != nullptr) {
    for (const ServoMessage& m : *outbox) {
      // Draw even while killed so the sequence of draws does not depend on
      // link state.
      const bool drop = config_.drop_prob > 0.0 && uniform() < config_.drop_prob;
      if (killed_) continue;
      if (drop) {
        ++dropped_;
        continue;
      }
      queue_.push_back({t + config_.delay, m});
    }
  }
  std::vector<ServoMessage> ready;
  while (!queue_.empty() && queue_.front().deliver_at <= t) {
    ready.push_back(queue_.front().message);
    queue_.pop_front();
  }
  delivered_ += ready.size();
  return ready;
}

void Channel::kill() {
  killed_ = true;
  queue_.clear();
}

void Channel::restore() { killed_ = false; }

void servo_receive(ServoState& state, const ServoMessage& message, double t) {
  if (state.has_command && message.command.seq < state.command.seq) return;
  state.command = message.command;
  state.has_command = true;
  state.last_rx_time = t;
  state.tau_cross = message.tau_cross;
  state.cross_stamp = message.command.t;
}

ServoOutput servo_tick(ServoState& state, double q, double qd, double t,
                       const ServoLimits& limits) {
  ServoOutput out;
  state.link_alive = state.has_command && t - state.last_rx_time <= limits.link_timeout;
  if (!state.has_command) return out;
  const ServoCommand& c = state.command;
  double tau = c.k * (c.q_ref - q) - c.b * qd + c.tau_ff;
  if (state.link_alive && t - state.cross_stamp <= limits.cross_lifetime) tau += state.tau_cross;
  out.tau = std::clamp(tau, -limits.tau_max, limits.tau_max);
  out.saturated = out.tau != tau;
  return out;
}

ServoBank::ServoBank(const RobotParams& params, double central_period) {
  for (int i = 0; i < kNumJoints; ++i) {
    limits_[i].tau_max = params.tau_max(i);
    limits_[i].cross_lifetime = 2.0 * central_period;
    limits_[i].link_timeout = 2.0 * central_period;
  }
}

void ServoBank::receive(const std::vector<ServoMessage>& messages, double t) {
  for (const ServoMessage& m : messages) servo_receive(states_[m.joint], m, t);
}

JointVector ServoBank::tick(const JointVector& q, const JointVector& qd, double t) {
  JointVector tau;
  for (int i = 0; i < kNumJoints; ++i) {
    const ServoOutput o = servo_tick(states_[i], q[i], qd[i], t, limits_[i]);
    tau[i] = o.tau;
    saturated_[i] = o.saturated;
    if (o.saturated) ++saturation_events_;
  }
  return tau;
}

}  // namespace xrl
