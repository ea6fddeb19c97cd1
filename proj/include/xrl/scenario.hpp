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


// Fixed-step co-simulation of the central controller, the link, the twelve
// servos, the planted-feet dynamics and the harness-coupled operator.
//
// Physics and servos advance at 1/dt; the central controller runs every
// channel period. Everything is single-threaded and deterministic for a
// given config and seed.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xrl/config.hpp"
#include "xrl/controller.hpp"
#include "xrl/dynamics.hpp"
#include "xrl/servo_network.hpp"

namespace xrl {

/// Balanced standing pose (COM over the ankle midpoint, zero roll and yaw)
/// at the given COM height and torso pitch.
SimState balanced_state(const RobotParams& params, double z_com, double pitch = 0.0);

/// Everything recorded for one physics tick.
struct TickRecord {
  std::uint64_t tick = 0;
  double t = 0.0;
  Vec6 u = Vec6::Zero();
  Vec6 ud = Vec6::Zero();
  TaskPose p = TaskPose::Zero();
  Vec6 pd = Vec6::Zero();
  TaskPose p_ref = TaskPose::Zero();  // from the latest central tick
  JointVector q = JointVector::Zero();
  JointVector qd = JointVector::Zero();
  JointVector tau = JointVector::Zero();
  Wrench f_op = Wrench::Zero();
  Wrench f_push = Wrench::Zero();
  bool link_alive = true;
  bool saturated = false;  // any servo clamped this tick
  std::array<ServoCommand, kNumJoints> servo{};  // commands held by the servos
  double z_h = 0.0;
  double theta_h = 0.0;
  CentralStatus central;
  bool paused = false;
};

/// CSV trace: one header row, one row per tick, %.9g numbers.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out);
  void write(const TickRecord& r);

 private:
  std::ostream& out_;
};

std::string trace_header();

enum class Verdict { kStable, kUnstable };

const char* verdict_name(Verdict v);

struct RunSummary {
  Verdict verdict = Verdict::kStable;
  std::string reason;
  std::uint64_t ticks = 0;
  double t_end = 0.0;
  bool aborted = false;  // runtime error; `reason` holds the tick and message
  bool fell = false;

  double max_xy_dev_before_push = 0.0;  // m
  double max_xy_dev = 0.0;              // m, whole run
  double max_roll_deg = 0.0;
  double max_yaw_deg = 0.0;
  double max_z_tracking_error = 0.0;    // m, during operator moves
  bool z_tracked = true;
  bool killed = false;
  double max_post_kill_dev = 0.0;       // m, from the pre-disturbance pose
  bool settled = true;
  double settle_time = 0.0;             // s after the last post-kill push
  double max_open_loop_error = 0.0;     // max |S (p_ref - p_meas)|
  double max_open_loop_force = 0.0;     // max |S K_p (p_ref - p_meas)|
  double max_closure_gap = 0.0;         // m
  std::uint64_t central_ticks = 0;
  std::uint64_t hessian_dropped_ticks = 0;
  std::uint64_t ik_failures = 0;
  std::uint64_t saturation_events = 0;
  double wall_seconds = 0.0;

  // Thresholds from the config's criteria, echoed for the report.
  Criteria criteria;
  bool xy_ok() const { return max_xy_dev_before_push < criteria.xy_tolerance; }
  bool angles_ok() const {
    return max_roll_deg < criteria.angle_tolerance_deg && max_yaw_deg < criteria.angle_tolerance_deg;
  }
};

std::string format_summary(const RunSummary& s);
std::string summary_json(const RunSummary& s);

/// Steering commands applied between ticks (bridge and tests).
struct Steering {
  enum class Kind {
    kOperatorZ,
    kOperatorTheta,
    kAssist,
    kKill,
    kRestore,
    kPushX,
    kPushY,
  };
  Kind kind;
  double value = 0.0;
  double duration = 0.5;  // s, replanning horizon for operator moves
};

class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);

  /// Advances one physics tick. Returns false once the run is over (end of
  /// duration, fall or runtime error).
  bool advance();

  /// Applies a steering command at the current time.
  void steer(const Steering& command);

  bool finished() const { return finished_; }
  double time() const { return state_.t; }
  std::uint64_t tick() const { return tick_; }
  const SimState& state() const { return state_; }
  const TickRecord& last_record() const { return record_; }
  const ScenarioConfig& config() const { return config_; }
  const RunSummary& summary() const { return summary_; }
  /// Summary of the run so far; equals summary() once finished.
  RunSummary current_summary() const;

  /// Called with each completed tick record.
  std::function<void(const TickRecord&)> on_tick;

 private:
  void apply_event(const Event& e);
  void central_update(const JointVector& q, const JointVector& qd);
  void record_metrics(const TickRecord& r);
  void finish(const std::string& reason, bool aborted, bool fell);
  void finalize_summary();

  ScenarioConfig config_;
  ControllerConfig controller_config_;
  CentralController controller_;
  Channel channel_;
  ServoBank servos_;
  SimState state_;
  std::mt19937_64 noise_rng_;
  std::size_t next_event_ = 0;
  std::uint64_t tick_ = 0;
  std::uint64_t total_ticks_ = 0;
  int central_every_ = 10;
  bool finished_ = false;
  TickRecord record_;
  RunSummary summary_;

  // Push pulses in progress: force and end time.
  struct Pulse {
    Wrench force;
    double until;
  };
  std::vector<Pulse> pulses_;

  // Metric bookkeeping.
  std::optional<double> first_push_;
  std::optional<double> kill_time_;
  std::optional<double> last_disturbance_;
  Vec3 reference_com_ = Vec3::Zero();
  Vec3 rest_com_ = Vec3::Zero();
  bool rest_captured_ = false;
  std::optional<double> last_outside_band_;
  std::vector<std::pair<double, double>> operator_moves_;
};

/// Runs the whole scenario; writes the trace to `trace` when given.
RunSummary run_scenario(const ScenarioConfig& config, std::ostream* trace = nullptr);

}  // namespace xrl
