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

// Central controller of the hybrid open-loop / closed-loop architecture.
//
// The task space splits into a closed-loop subspace V_C, regulated around a
// robot-generated setpoint, and an open-loop subspace V_O (height and pitch)
// where the reference is overwritten with the measurement so the position
// loop produces no error there. The resulting task-space impedance is mapped
// to joint stiffness/damping, whose diagonals go to the independent joint
// servos; the off-diagonal remainder is sent as a cross-coupling torque.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "xrl/params.hpp"
#include "xrl/types.hpp"

namespace xrl {

/// Diagonal 0/1 selection S onto V_O and its complement I - S.
struct ProjectionPair {
  Mat6 s;
  Mat6 s_perp;

  /// `open_loop[i]` marks axis i as human-led.
  static ProjectionPair from_diagonal(const std::array<bool, kTaskDim>& open_loop);
  /// diag(0, 0, 1, 0, 1, 0): z and pitch are open-loop.
  static ProjectionPair xrl_default();
};

struct ProjectedPose {
  Vec6 closed;  // S_perp p
  Vec6 open;    // S p
};

ProjectedPose project(const TaskPose& p, const ProjectionPair& pair);

/// p_ref = p_c_cmd + S p_meas. Throws CommandInOpenLoopSubspace when the
/// command has a V_O component.
TaskPose build_reference(const TaskPose& p_c_cmd, const TaskPose& p_meas,
                         const ProjectionPair& pair);

struct IkOptions {
  double damping = 1e-6;
  double step_cap = 0.2;  // rad, per iteration and joint
  int max_iterations = 50;
  double tolerance = 1e-10;
};

/// Damped least-squares Newton iteration from `seed` toward
/// task_pose(q) = p_ref. Each update is the minimum-norm correction, so the
/// solution is the one nearest the seed. Throws NoConvergence.
JointVector inverse_kinematics(const TaskPose& p_ref, const JointVector& seed,
                               const RobotParams& params, const IkOptions& options = {});

/// F_O = (g m_total + F_assist) z_hat.
Wrench feedforward_wrench(const RobotParams& params);

/// tau_O = J^T F_O.
JointVector feedforward_torques(const TaskJacobian& jacobian, const Wrench& f_open);

/// F = K_p (p_ref - p) + B_p (pd_ref - pd) + F_O.
Wrench task_wrench(const TaskPose& p_ref, const TaskPose& p, const Vec6& pd_ref, const Vec6& pd,
                   const Mat6& kp, const Mat6& bp, const Wrench& f_open);

/// K_q = N K_0 + J^T K_p J - sum_i H_i F_i.
JointMatrix joint_stiffness(const TaskJacobian& jacobian, const TaskHessian& hessian,
                            const Wrench& wrench, const Mat6& kp, const JointMatrix& k0);

/// B_q = N B_0 + J^T B_p J.
JointMatrix joint_damping(const TaskJacobian& jacobian, const Mat6& bp, const JointMatrix& b0);

struct StiffnessRepair {
  JointMatrix k_q;
  double k0_scale = 1.0;
  bool hessian_dropped = false;
  bool indefinite = false;  // still indefinite after every repair step
};

/// joint_stiffness with the positive-definiteness repair: while the
/// symmetric part has an eigenvalue below -tolerance * ||K_q|| or a
/// non-positive diagonal entry, K_0 is doubled up to 8x; if that does not
/// help the Hessian term is dropped.
StiffnessRepair repaired_joint_stiffness(const TaskJacobian& jacobian, const TaskHessian& hessian,
                                         const Wrench& wrench, const Mat6& kp,
                                         const JointMatrix& k0);

struct GainConfig {
  Mat6 kp = Mat6::Zero();
  Mat6 bp = Mat6::Zero();
  JointMatrix k0 = JointMatrix::Zero();
  JointMatrix b0 = JointMatrix::Zero();

  /// K_p = diag(2810, 2810, 0, 500, 0, 1500),
  /// B_p = diag(600, 600, 0, 50, 0, 150), K_0 = 400 I, B_0 = 10 I.
  static GainConfig xrl_default();

  /// Gains with V_O rows and columns zeroed: S_perp K S_perp.
  GainConfig masked(const ProjectionPair& pair) const;
};

struct ServoCommand {
  double q_ref = 0.0;   // rad
  double k = 0.0;       // N*m/rad
  double b = 0.0;       // N*m*s/rad
  double tau_ff = 0.0;  // N*m
  std::uint64_t seq = 0;
  double t = 0.0;       // send time
};

struct CentralStatus {
  bool ik_failed = false;  // IK did not converge; output held
  bool hessian_dropped = false;
  bool gain_indefinite = false;
  double k0_scale = 1.0;
};

struct CentralOutput {
  std::array<ServoCommand, kNumJoints> servo{};
  JointVector tau_cross = JointVector::Zero();
  std::uint64_t seq = 0;
  double t = 0.0;

  // Diagnostics, not sent to the servos.
  TaskPose p_meas = TaskPose::Zero();
  TaskPose p_ref = TaskPose::Zero();
  Vec6 pd_ref = Vec6::Zero();
  JointVector q_ref = JointVector::Zero();
  JointVector qd_ref = JointVector::Zero();
  JointVector tau_open = JointVector::Zero();
  JointMatrix k_q = JointMatrix::Zero();
  JointMatrix b_q = JointMatrix::Zero();
  Wrench wrench = Wrench::Zero();  // task wrench of the PD + feedforward law
  CentralStatus status;

  /// K_q (q_ref - q) + B_q (qd_ref - qd) + tau_O.
  JointVector total_torque(const JointVector& q, const JointVector& qd) const;
};

struct ControllerConfig {
  RobotParams params;
  ProjectionPair projection = ProjectionPair::xrl_default();
  GainConfig gains = GainConfig::xrl_default();
  TaskPose setpoint = TaskPose::Zero();  // V_C command (x, y, roll, yaw)
  IkOptions ik;
};

struct SensorReading {
  JointVector q = JointVector::Zero();
  JointVector qd = JointVector::Zero();
  double t = 0.0;
};

/// One central update: measured task pose, reference construction, IK,
/// gain mapping and the diagonal/cross-coupled split. `previous` is returned
/// (re-stamped, status.ik_failed set) when IK fails and a previous output
/// exists; otherwise the failure propagates.
CentralOutput central_tick(const SensorReading& sensors, const ControllerConfig& config,
                           const CentralOutput* previous, std::uint64_t seq);

/// Holds the last output across ticks.
class CentralController {
 public:
  explicit CentralController(ControllerConfig config);

  const CentralOutput& tick(const SensorReading& sensors);
  const std::optional<CentralOutput>& last() const { return last_; }
  const ControllerConfig& config() const { return config_; }
  ControllerConfig& mutable_config() { return config_; }
  void reset();

 private:
  ControllerConfig config_;
  std::optional<CentralOutput> last_;
  std::uint64_t seq_ = 0;
};

}  // namespace xrl
