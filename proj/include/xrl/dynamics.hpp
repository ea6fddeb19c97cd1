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

// Constrained rigid-body simulation of the closed chain with both feet
// planted, in minimal coordinates u = [torso center; torso 3-1-2 Euler].
//
// Mass model: m_torso at the torso center (plus the torso rotational
// inertia), m_act at each knee and ankle, massless links. Ankle modules
// never move and so never contribute kinetic energy.

#pragma once

#include "xrl/params.hpp"
#include "xrl/types.hpp"

namespace xrl {

using MinimalPose = Vec6;
using ClosureJacobian = Eigen::Matrix<double, kNumJoints, 6>;

/// Joint angles of both legs that place the torso at `u`. Each leg is solved
/// by Newton iteration from `seed`, so the branch nearest the seed is
/// returned. Throws OutOfReach when either hip is outside the leg's annulus
/// or the iteration fails to reach a residual of 1e-10.
JointVector leg_ik(const MinimalPose& u, const JointVector& seed, const RobotParams& params);

/// G = dq/du at a closure-consistent (q, u), by the implicit function
/// theorem applied to each leg.
ClosureJacobian closure_jacobian(const JointVector& q, const MinimalPose& u,
                                 const RobotParams& params);

/// Minimal pose whose task pose equals `target`, found by Newton iteration
/// on u with leg_ik inside. Used to build initial states.
MinimalPose pose_for_task(const TaskPose& target, const JointVector& seed,
                          const RobotParams& params, JointVector* q_out = nullptr);

struct SimState {
  MinimalPose u = MinimalPose::Zero();
  Vec6 ud = Vec6::Zero();
  double t = 0.0;
  JointVector q = JointVector::Zero();   // leg_ik(u)
  JointVector qd = JointVector::Zero();  // G * ud
};

/// Builds a consistent state; `seed` picks the leg branch.
SimState make_state(const MinimalPose& u, const Vec6& ud, const JointVector& seed,
                    const RobotParams& params, double t = 0.0);

/// Terms of M(u) u_dd + c(u, u_d) = Q.
struct DynamicsTerms {
  Mat6 mass;
  Vec6 bias;     // velocity-product terms
  Vec6 gravity;  // generalized gravity force
  ClosureJacobian closure;
};

/// Mass matrix, velocity-product and gravity terms at `state`. The
/// velocity-product term is evaluated as sum_i m_i J_i^T (d^2 r_i / ds^2)
/// along s -> u + s u_d (five-point stencil) plus the torso's rigid-body
/// rotational terms.
DynamicsTerms dynamics_terms(const SimState& state, const RobotParams& params);

/// Generalized force of a wrench applied at the torso center: force in
/// world frame (rows 0-2) and moment in world frame (rows 3-5).
Vec6 torso_wrench_force(const MinimalPose& u, const Wrench& wrench);

inline constexpr double kMaxMassCondition = 1e12;

/// u_dd from M u_dd = G^T tau + Q_grav + Q_ext - c. `external` is a
/// generalized force (see torso_wrench_force). Throws SingularMass when
/// cond(M) > 1e12.
Vec6 generalized_dynamics(const SimState& state, const JointVector& tau, const Vec6& external,
                          const RobotParams& params);

/// One semi-implicit Euler step: velocity first, then position with the new
/// velocity.
template <typename Accel>
void semi_implicit_euler(Vec6& position, Vec6& velocity, double dt, Accel&& accel) {
  velocity += dt * accel(position, velocity);
  position += dt * velocity;
}

SimState step(const SimState& state, const JointVector& tau, const Vec6& external, double dt,
              const RobotParams& params);

double kinetic_energy(const SimState& state, const RobotParams& params);

/// Gravity potential, zero at ground level.
double potential_energy(const SimState& state, const RobotParams& params);

}  // namespace xrl
