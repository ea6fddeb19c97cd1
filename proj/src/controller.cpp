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

#include "xrl/controller.hpp"

#include <cmath>

#include "xrl/differential.hpp"
#include "xrl/model.hpp"

namespace xrl {

namespace {

constexpr double kIndefiniteTolerance = 1e-9;
constexpr double kMaxK0Scale = 8.0;

bool acceptable_stiffness(const JointMatrix& k) {
  if ((k.diagonal().array() <= 0.0).any()) return false;
  const JointMatrix sym = 0.5 * (k + k.transpose());
  const Eigen::SelfAdjointEigenSolver<JointMatrix> eig(sym, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  return eig.eigenvalues().minCoeff() >= -kIndefiniteTolerance * scale;
}

}  // namespace

ProjectionPair ProjectionPair::from_diagonal(const std::array<bool, kTaskDim>& open_loop) {
  ProjectionPair pair;
  pair.s.setZero();
  for (int i = 0; i < kTaskDim; ++i) pair.s(i, i) = open_loop[i] ? 1.0 : 0.0;
  pair.s_perp = Mat6::Identity() - pair.s;
  return pair;
}

ProjectionPair ProjectionPair::xrl_default() {
  return from_diagonal({false, false, true, false, true, false});
}

ProjectedPose project(const TaskPose& p, const ProjectionPair& pair) {
  return {pair.s_perp * p, pair.s * p};
}

TaskPose build_reference(const TaskPose& p_c_cmd, const TaskPose& p_meas,
                         const ProjectionPair& pair) {
  if (!(pair.s * p_c_cmd).isZero(0.0)) {
    throw CommandInOpenLoopSubspace("closed-loop command has a component in the open-loop subspace");
  }
  return p_c_cmd + pair.s * p_meas;
}

JointVector inverse_kinematics(const TaskPose& p_ref, const JointVector& seed,
                               const RobotParams& params, const IkOptions& options) {
  JointVector q = seed;
  double residual = 0.0;
  for (int it = 0; it <= options.max_iterations; ++it) {
    Vec6 e;
    try {
      e = p_ref - task_pose(q, params);
    } catch (const GimbalLock&) {
      break;
    }
    residual = e.norm();
    if (residual <= options.tolerance) return q;
    if (it == options.max_iterations) break;
    const TaskJacobian jac = jacobian(q, params);
    const Mat6 gram =
        jac * jac.transpose() + options.damping * options.damping * Mat6::Identity();
    JointVector dq = jac.transpose() * gram.ldlt().solve(e);
    const double largest = dq.cwiseAbs().maxCoeff();
    if (largest > options.step_cap) dq *= options.step_cap / largest;
    q += dq;
  }
  throw NoConvergence("inverse kinematics did not converge", residual);
}

Wrench feedforward_wrench(const RobotParams& params) {
  Wrench f = Wrench::Zero();
  f[kZ] = params.g * params.m_total() + params.f_assist;
  return f;
}

JointVector feedforward_torques(const TaskJacobian& jac, const Wrench& f_open) {
  return jac.transpose() * f_open;
}

Wrench task_wrench(const TaskPose& p_ref, const TaskPose& p, const Vec6& pd_ref, const Vec6& pd,
                   const Mat6& kp, const Mat6& bp, const Wrench& f_open) {
  return kp * (p_ref - p) + bp * (pd_ref - pd) + f_open;
}

JointMatrix joint_stiffness(const TaskJacobian& jac, const TaskHessian& hes, const Wrench& wrench,
                            const Mat6& kp, const JointMatrix& k0) {
  return nullspace_projector(jac) * k0 + jac.transpose() * kp * jac - hes.contract(wrench);
}

JointMatrix joint_damping(const TaskJacobian& jac, const Mat6& bp, const JointMatrix& b0) {
  return nullspace_projector(jac) * b0 + jac.transpose() * bp * jac;
}

StiffnessRepair repaired_joint_stiffness(const TaskJacobian& jac, const TaskHessian& hes,
                                         const Wrench& wrench, const Mat6& kp,
                                         const JointMatrix& k0) {
  StiffnessRepair out;
  const JointMatrix n = nullspace_projector(jac);
  const JointMatrix task = jac.transpose() * kp * jac;
  const JointMatrix geometric = hes.contract(wrench);
  for (double scale = 1.0; scale <= kMaxK0Scale; scale *= 2.0) {
    out.k_q = n * (scale * k0) + task - geometric;
    out.k0_scale = scale;
    if (acceptable_stiffness(out.k_q)) return out;
  }
  out.hessian_dropped = true;
  out.k0_scale = 1.0;
  out.k_q = n * k0 + task;
  out.indefinite = !acceptable_stiffness(out.k_q);
  return out;
}

GainConfig GainConfig::xrl_default() {
  GainConfig g;
  // x/y stiffness applies tau_max at the support edge. Roll and yaw are
  // tuned so the diagonal-only servos keep both under 2 deg through a
  // 50 N*s side push after the link is cut.
  g.kp.diagonal() << 2810.0, 2810.0, 0.0, 500.0, 0.0, 1500.0;
  g.bp.diagonal() << 600.0, 600.0, 0.0, 50.0, 0.0, 150.0;
  g.k0 = 400.0 * JointMatrix::Identity();
  g.b0 = 10.0 * JointMatrix::Identity();
  return g;
}

GainConfig GainConfig::masked(const ProjectionPair& pair) const {
  GainConfig g = *this;
  g.kp = pair.s_perp * kp * pair.s_perp;
  g.bp = pair.s_perp * bp * pair.s_perp;
  return g;
}

JointVector CentralOutput::total_torque(const JointVector& q, const JointVector& qd) const {
  return k_q * (q_ref - q) + b_q * (qd_ref - qd) + tau_open;
}

CentralOutput central_tick(const SensorReading& sensors, const ControllerConfig& config,
                           const CentralOutput* previous, std::uint64_t seq) {
  const RobotParams& params = config.params;
  const ProjectionPair& pair = config.projection;
  const GainConfig gains = config.gains.masked(pair);

  CentralOutput out;
  out.seq = seq;
  out.t = sensors.t;

  const TaskJacobian jac = jacobian(sensors.q, params);
  out.p_meas = task_pose(sensors.q, params);
  const Vec6 pd = jac * sensors.qd;
  out.p_ref = build_reference(config.setpoint, out.p_meas, pair);
  // Velocity analog of the reference construction; the V_C setpoint is
  // constant.
  out.pd_ref = pair.s * pd;

  try {
    out.q_ref = inverse_kinematics(out.p_ref, sensors.q, params, config.ik);
  } catch (const NoConvergence&) {
    if (previous == nullptr) throw;
    CentralOutput held = *previous;
    held.seq = seq;
    held.t = sensors.t;
    for (auto& cmd : held.servo) {
      cmd.seq = seq;
      cmd.t = sensors.t;
    }
    held.status.ik_failed = true;
    return held;
  }

  // Minimum-norm velocity correction from the measured joint rates.
  out.qd_ref = sensors.qd + damped_pinv(jac, config.ik.damping) * (out.pd_ref - pd);

  const Wrench f_open = feedforward_wrench(params);
  out.tau_open = feedforward_torques(jac, f_open);
  out.wrench = task_wrench(out.p_ref, out.p_meas, out.pd_ref, pd, gains.kp, gains.bp, f_open);

  const TaskHessian hes = hessian(sensors.q, params);
  const StiffnessRepair stiffness =
      repaired_joint_stiffness(jac, hes, out.wrench, gains.kp, gains.k0);
  out.k_q = stiffness.k_q;
  out.b_q = joint_damping(jac, gains.bp, gains.b0);
  out.status.hessian_dropped = stiffness.hessian_dropped;
  out.status.gain_indefinite = stiffness.indefinite;
  out.status.k0_scale = stiffness.k0_scale;

  // Diagonal terms go to the servos. Everything else, including the
  // antisymmetric part of K_q and the diagonal damping's reference-velocity
  // term (servos are setpoint servos), travels as cross torque.
  const JointVector k_diag = out.k_q.diagonal();
  const JointVector b_diag = out.b_q.diagonal();
  const JointMatrix k_off = out.k_q - JointMatrix(k_diag.asDiagonal());
  const JointMatrix b_off = out.b_q - JointMatrix(b_diag.asDiagonal());
  out.tau_cross = k_off * (out.q_ref - sensors.q) + b_off * (out.qd_ref - sensors.qd) +
                  b_diag.cwiseProduct(out.qd_ref);

  for (int i = 0; i < kNumJoints; ++i) {
    out.servo[i] = ServoCommand{out.q_ref[i], k_diag[i], b_diag[i], out.tau_open[i], seq, sensors.t};
  }
  return out;
}

CentralController::CentralController(ControllerConfig config) : config_(std::move(config)) {}

const CentralOutput& CentralController::tick(const SensorReading& sensors) {
  CentralOutput next = central_tick(sensors, config_, last_ ? &*last_ : nullptr, ++seq_);
  last_ = std::move(next);
  return *last_;
}

void CentralController::reset() {
  last_.reset();
  seq_ = 0;
}

}  // namespace xrl
