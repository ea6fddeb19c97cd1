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


// Helpers shared by the unit tests.

#pragma once

#include <cmath>
#include <random>

#include "xrl/dynamics.hpp"
#include "xrl/params.hpp"
#include "xrl/scenario.hpp"
#include "xrl/types.hpp"

namespace xrl::testing {

/// Random on-manifold configuration: a balanced-ish torso pose perturbed
/// in all six coordinates, solved for both legs.
inline SimState random_state(std::mt19937_64& rng, const RobotParams& params = {}) {
  std::uniform_real_distribution<double> z(0.68, 0.90);
  std::uniform_real_distribution<double> small(-1.0, 1.0);
  const SimState base = balanced_state(params, z(rng));
  MinimalPose u = base.u;
  u[0] += 0.03 * small(rng);
  u[1] += 0.03 * small(rng);
  u[2] += 0.01 * small(rng);
  u[3] += 0.05 * small(rng);
  u[4] += 0.15 * small(rng);
  u[5] += 0.05 * small(rng);
  return make_state(u, Vec6::Zero(), base.q, params);
}

inline JointVector random_joints(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  JointVector q;
  for (int i = 0; i < kNumJoints; ++i) q[i] = d(rng);
  return q;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace xrl::testing
