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


#include "xrl/live.hpp"

#include <cmath>

namespace xrl {

LiveSession::LiveSession(ScenarioConfig config, std::ostream* trace)
    : config_(std::move(config)), trace_(trace) {
  ticks_per_frame_ = std::max(1, static_cast<int>(std::lround(kTelemetryPeriod / config_.dt)));
  ticks_per_period_ = std::max(1, static_cast<int>(std::lround(config_.channel.period / config_.dt)));
  restart();
}

void LiveSession::restart() {
  writer_.reset();
  sim_ = std::make_unique<Simulation>(config_);
  assist_ = config_.robot.f_assist;
  if (trace_ != nullptr) {
    writer_.emplace(*trace_);
    sim_->on_tick = [this](const TickRecord& r) { writer_->write(r); };
  }
}

Ack LiveSession::apply(const CommandMessage& c) {
  Ack ack{c.client, c.seq, true, {}};
  if (!sequences_.accept(c.client, c.seq)) {
    ack.ok = false;
    ack.error = "sequence number not greater than the last one from this client";
    return ack;
  }
  switch (c.kind) {
    case CommandKind::kSetOperatorZ:
      sim_->steer({Steering::Kind::kOperatorZ, c.value, 0.5});
      break;
    case CommandKind::kSetOperatorTheta:
      sim_->steer({Steering::Kind::kOperatorTheta, c.value, 0.5});
      break;
    case CommandKind::kSetAssistForce:
      sim_->steer({Steering::Kind::kAssist, c.value});
      assist_ = c.value;
      break;
    case CommandKind::kKillComms:
      sim_->steer({Steering::Kind::kKill});
      break;
    case CommandKind::kRestoreComms:
      sim_->steer({Steering::Kind::kRestore});
      break;
    case CommandKind::kPushX:
      sim_->steer({Steering::Kind::kPushX, c.value});
      break;
    case CommandKind::kPause:
      paused_ = true;
      break;
    case CommandKind::kResume:
      paused_ = false;
      break;
    case CommandKind::kReset:
      restart();
      paused_ = false;
      break;
  }
  return ack;
}

void LiveSession::run_period(std::vector<TelemetryFrame>* frames) {
  if (paused_) return;
  for (int i = 0; i < ticks_per_period_; ++i) {
    if (!sim_->advance()) break;
    if (frames != nullptr && sim_->last_record().tick % static_cast<std::uint64_t>(ticks_per_frame_) == 0) {
      frames->push_back(next_frame());
    }
  }
}

TelemetryFrame LiveSession::snapshot() const {
  const TickRecord& r = sim_->last_record();
  const RunSummary& s = sim_->summary();
  TelemetryFrame f;
  f.frame = frame_;
  f.t = r.t;
  f.p = r.p;
  f.p_ref = r.p_ref;
  f.q = r.q;
  f.tau = r.tau;
  f.f_op = r.f_op;
  f.link_alive = r.link_alive;
  f.z_h = r.z_h;
  f.theta_h = r.theta_h;
  f.assist = assist_;
  f.paused = paused_;
  f.finished = sim_->finished();
  f.fell = s.fell;
  f.aborted = s.aborted;
  f.hessian_dropped = r.central.hessian_dropped;
  f.ik_failed = r.central.ik_failed;
  f.saturated = r.saturated;
  if (sim_->finished()) f.verdict = verdict_name(s.verdict);
  return f;
}

TelemetryFrame LiveSession::next_frame() {
  ++frame_;
  return snapshot();
}

}  // namespace xrl
