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


#include "xrl/operator.hpp"

#include <algorithm>

namespace xrl {

QuinticSegment::QuinticSegment(double t0, double t1, TrajectoryPoint s, double x1)
    : t0_(t0), t1_(t1) {
  const double T = t1 - t0;
  if (!(T > 0.0)) throw ValidationError("quintic segment needs a positive duration");
  const double d = x1 - s.x;
  c_[0] = s.x;
  c_[1] = s.v;
  c_[2] = 0.5 * s.a;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  c_[3] = (20.0 * d - (12.0 * s.v * T) - 3.0 * s.a * T2) / (2.0 * T3);
  c_[4] = (-30.0 * d + 16.0 * s.v * T + 3.0 * s.a * T2) / (2.0 * T4);
  c_[5] = (12.0 * d - 6.0 * s.v * T - s.a * T2) / (2.0 * T5);
}

TrajectoryPoint QuinticSegment::eval(double t) const {
  const double s = std::clamp(t, t0_, t1_) - t0_;
  TrajectoryPoint p;
  p.x = c_[0] + s * (c_[1] + s * (c_[2] + s * (c_[3] + s * (c_[4] + s * c_[5]))));
  p.v = c_[1] + s * (2.0 * c_[2] + s * (3.0 * c_[3] + s * (4.0 * c_[4] + s * 5.0 * c_[5])));
  p.a = 2.0 * c_[2] + s * (6.0 * c_[3] + s * (12.0 * c_[4] + s * 20.0 * c_[5]));
  if (t >= t1_) p.v = p.a = 0.0;
  return p;
}

TrajectoryPoint IntentTrajectory::eval(double t) const {
  // The segment in force is the last one that has started; segments hold
  // their end state once finished.
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (t >= it->t0()) return it->eval(t);
  }
  return {initial_, 0.0, 0.0};
}

void IntentTrajectory::plan(double t0, double duration, double target) {
  const TrajectoryPoint start = eval(t0);
  while (!segments_.empty() && segments_.back().t0() >= t0) segments_.pop_back();
  segments_.emplace_back(t0, t0 + duration, start, target);
}

void IntentTrajectory::reset(double initial) {
  initial_ = initial;
  segments_.clear();
}

void OperatorModel::validate() const {
  if (k_hz < 0.0 || b_hz < 0.0 || k_htheta < 0.0 || b_htheta < 0.0) {
    throw ValidationError("operator harness gains must be non-negative");
  }
  if (max_force < 0.0 || max_moment < 0.0) {
    throw ValidationError("operator force limits must be non-negative");
  }
}

Wrench operator_wrench(double t, const TaskPose& p, const Vec6& pd, const OperatorModel& op) {
  const TrajectoryPoint z = op.z.eval(t);
  const TrajectoryPoint th = op.theta.eval(t);
  Wrench w = Wrench::Zero();
  w[kZ] = std::clamp(op.k_hz * (z.x - p[kZ]) + op.b_hz * (z.v - pd[kZ]) - op.rest_load,
                     -op.max_force, op.max_force);
  w[kPitch] = std::clamp(op.k_htheta * (th.x - p[kPitch]) + op.b_htheta * (th.v - pd[kPitch]),
                         -op.max_moment, op.max_moment);
  return w;
}

}  // namespace xrl
