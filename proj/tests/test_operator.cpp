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


#include <doctest.h>

#include "xrl/operator.hpp"

using namespace xrl;

TEST_CASE("quintic meets its boundary conditions") {
  const QuinticSegment s(1.0, 3.0, {0.9, 0.1, -0.2}, 0.7);
  const TrajectoryPoint a = s.eval(1.0), b = s.eval(3.0);
  CHECK(a.x == doctest::Approx(0.9));
  CHECK(a.v == doctest::Approx(0.1));
  CHECK(a.a == doctest::Approx(-0.2));
  CHECK(b.x == doctest::Approx(0.7));
  CHECK(b.v == 0.0);
  CHECK(b.a == 0.0);
  CHECK(s.eval(10.0).x == doctest::Approx(0.7));
  CHECK(s.eval(0.0).x == doctest::Approx(0.9));
}

TEST_CASE("quintic derivatives are consistent") {
  const QuinticSegment s(0.0, 2.0, {0.0, 0.3, 0.5}, 1.0);
  const double h = 1e-6;
  for (double t : {0.3, 0.9, 1.7}) {
    CHECK(s.eval(t).v == doctest::Approx((s.eval(t + h).x - s.eval(t - h).x) / (2 * h)).epsilon(1e-6));
    CHECK(s.eval(t).a == doctest::Approx((s.eval(t + h).v - s.eval(t - h).v) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("rest-to-rest quintic is monotone and symmetric") {
  const QuinticSegment s(0.0, 8.0, {0.93, 0.0, 0.0}, 0.55);
  double last = 1.0;
  for (int i = 0; i <= 80; ++i) {
    const double x = s.eval(0.1 * i).x;
    CHECK(x <= last + 1e-15);
    last = x;
  }
  CHECK(s.eval(4.0).x == doctest::Approx(0.74));
}

TEST_CASE("quintic rejects an empty interval") {
  CHECK_THROWS_AS(QuinticSegment(1.0, 1.0, {}, 0.0), ValidationError);
}

TEST_CASE("replanning keeps position, velocity and acceleration continuous") {
  IntentTrajectory traj(0.9);
  traj.plan(1.0, 8.0, 0.55);
  const TrajectoryPoint before = traj.eval(4.0);
  traj.plan(4.0, 0.5, 0.8);
  const TrajectoryPoint after = traj.eval(4.0);
  CHECK(after.x == doctest::Approx(before.x));
  CHECK(after.v == doctest::Approx(before.v));
  CHECK(after.a == doctest::Approx(before.a));
  CHECK(traj.eval(4.5).x == doctest::Approx(0.8));
  CHECK(traj.eval(100.0).x == doctest::Approx(0.8));
  // Before the first segment the initial value holds.
  CHECK(traj.eval(0.5).x == 0.9);
}

TEST_CASE("replanning in the past discards the later plan") {
  IntentTrajectory traj(0.0);
  traj.plan(2.0, 1.0, 1.0);
  traj.plan(1.0, 1.0, -1.0);
  CHECK(traj.eval(5.0).x == doctest::Approx(-1.0));
  traj.reset(0.4);
  CHECK(traj.eval(5.0).x == 0.4);
}

TEST_CASE("harness wrench acts only in height and pitch") {
  OperatorModel op;
  TaskPose p = TaskPose::Zero();
  p[kZ] = 0.88;
  p[kPitch] = 0.05;
  Vec6 pd = Vec6::Zero();
  pd[kZ] = -0.1;
  const Wrench w = operator_wrench(0.0, p, pd, op);
  CHECK(w[kZ] == doctest::Approx(2000.0 * 0.02 + 200.0 * 0.1));
  CHECK(w[kPitch] == doctest::Approx(-150.0 * 0.05));
  for (int i : {kX, kY, kRoll, kYaw}) CHECK(w[i] == 0.0);
}

TEST_CASE("harness wrench is clamped and carries the rest load") {
  OperatorModel op;
  op.rest_load = 200.0;
  TaskPose p = TaskPose::Zero();
  p[kZ] = 0.90;
  CHECK(operator_wrench(0.0, p, Vec6::Zero(), op)[kZ] == doctest::Approx(-200.0));
  p[kZ] = 0.0;
  CHECK(operator_wrench(0.0, p, Vec6::Zero(), op)[kZ] == op.max_force);
  p[kPitch] = -3.0;
  CHECK(operator_wrench(0.0, p, Vec6::Zero(), op)[kPitch] == op.max_moment);
}

TEST_CASE("operator validation") {
  OperatorModel op;
  CHECK_NOTHROW(op.validate());
  op.k_hz = -1.0;
  CHECK_THROWS_AS(op.validate(), ValidationError);
  op = {};
  op.max_moment = -1.0;
  CHECK_THROWS_AS(op.validate(), ValidationError);
}
