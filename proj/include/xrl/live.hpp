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


// Interactive session: a Simulation advanced one central period at a time,
// steered by protocol commands and sampled into telemetry frames. Has no
// networking of its own so it can be driven from tests; the bridge adds the
// socket.

#pragma once

#include <iosfwd>
#include <memory>
#include <optional>

#include "xrl/config.hpp"
#include "xrl/protocol.hpp"
#include "xrl/scenario.hpp"

namespace xrl {

inline constexpr double kTelemetryPeriod = 0.05;  // s of simulated time (20 Hz)

class LiveSession {
 public:
  /// `trace` receives the CSV trace of the current run (restarted on reset).
  explicit LiveSession(ScenarioConfig config, std::ostream* trace = nullptr);

  /// Validates ordering, applies the command and returns the
  /// acknowledgement. Never throws for bad input.
  Ack apply(const CommandMessage& command);

  /// Advances one central period unless paused or finished. Frames that
  /// fall due are appended to `frames`.
  void run_period(std::vector<TelemetryFrame>* frames);

  bool paused() const { return paused_; }
  bool finished() const { return sim_->finished(); }
  double time() const { return sim_->time(); }
  const Simulation& simulation() const { return *sim_; }
  /// Current state, numbered like the last emitted frame.
  TelemetryFrame snapshot() const;
  /// Current state as a new frame, for publishing outside run_period.
  /// Frame numbers keep increasing across resets.
  TelemetryFrame next_frame();

 private:
  void restart();

  ScenarioConfig config_;
  std::ostream* trace_;
  std::unique_ptr<Simulation> sim_;
  std::optional<TraceWriter> writer_;
  SequenceTracker sequences_;
  bool paused_ = false;
  std::uint64_t frame_ = 0;
  int ticks_per_frame_ = 50;
  int ticks_per_period_ = 10;
  double assist_ = 0.0;
};

}  // namespace xrl
