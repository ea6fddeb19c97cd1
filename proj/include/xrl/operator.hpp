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


// Simulated human operator coupled to the torso through the harness.
//
// The operator's intent is a height z_h(t) and pitch theta_h(t), each a
// chain of quintic segments, and the harness is a spring-damper between
// intent and the measured COM height / torso pitch. This is an idealized
// stand-in for arbitrary human forcing.

#pragma once

#include <array>
#include <vector>

#include "xrl/types.hpp"

namespace xrl {

struct TrajectoryPoint {
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
};

/// Quintic from (x0, v0, a0) at t0 to (x1, 0, 0) at t1.
class QuinticSegment {
 public:
  QuinticSegment(double t0, double t1, TrajectoryPoint start, double x1);

  TrajectoryPoint eval(double t) const;
  double t0() const { return t0_; }
  double t1() const { return t1_; }

 private:
  double t0_;
  double t1_;
  std::array<double, 6> c_{};  // in tau = t - t0
};

/// Piecewise quintic, held constant outside its segments. Replanning starts
/// a new segment from the state at the replanning time, so position,
/// velocity and acceleration stay continuous.
class IntentTrajectory {
 public:
  explicit IntentTrajectory(double initial = 0.0) : initial_(initial) {}

  TrajectoryPoint eval(double t) const;

  /// Appends a move to `target` over [t0, t0 + duration]. Any part of the
  /// plan after t0 is discarded.
  void plan(double t0, double duration, double target);

  double initial() const { return initial_; }
  void reset(double initial);

 private:
  double initial_;
  std::vector<QuinticSegment> segments_;
};

struct OperatorModel {
  IntentTrajectory z{0.90};      // m, COM height intent
  IntentTrajectory theta{0.0};   // rad, torso pitch intent
  double k_hz = 2000.0;          // N/m
  double b_hz = 200.0;           // N*s/m
  double k_htheta = 150.0;       // N*m/rad
  double b_htheta = 15.0;        // N*m*s/rad
  double max_force = 400.0;      // N
  double max_moment = 100.0;     // N*m
  // Part of the operator's weight resting on the harness (N, downward).
  // Matches the assist force at rest so the harness spring is unloaded.
  double rest_load = 0.0;

  /// Throws ValidationError on negative gains or limits.
  void validate() const;
};

/// Harness wrench on the torso: F_z = k_hz (z_h - z) + b_hz (zd_h - zd) -
/// rest_load clamped to +-max_force, and the analogous pitch moment clamped
/// to +-max_moment. Only the z and pitch rows are nonzero.
Wrench operator_wrench(double t, const TaskPose& p, const Vec6& pd, const OperatorModel& op);

}  // namespace xrl
