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

#include "xrl/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "xrl/differential.hpp"
#include "xrl/model.hpp"

namespace xrl {

namespace {

constexpr int kLegIterations = 40;
constexpr double kLegTolerance = 1e-14;
constexpr double kLegAccept = 1e-10;
constexpr double kLegStepCap = 0.5;

Vec3 hip_to_center(Side side, const RobotParams& params) {
  const double half = 0.5 * params.w_hip;
  return side == Side::kRight ? Vec3(0.0, half, 0.0) : Vec3(0.0, -half, 0.0);
}

Vec6 leg_residual(const LegChain& c, const Vec3& target_pos, const Mat3& target_rot) {
  Vec6 e;
  e.head<3>() = target_pos - c.torso;
  const Eigen::AngleAxisd aa(target_rot * c.rotation.transpose());
  e.tail<3>() = aa.angle() * aa.axis();
  return e;
}

Vec6 solve_leg(Side side, const Vec3& target_pos, const Mat3& target_rot, Vec6 angles,
               const RobotParams& params) {
  const Vec3 hip = target_pos - target_rot * hip_to_center(side, params);
  const double reach = (hip - ankle_position(side, params)).norm();
  if (reach > params.l1 + params.l2 || reach < std::abs(params.l2 - params.l1)) {
    std::ostringstream os;
    os << (side == Side::kRight ? "right" : "left") << " hip at distance " << reach
       << " m from its ankle is outside the leg's reach";
    throw OutOfReach(os.str());
  }

  double residual = 0.0;
  for (int it = 0; it < kLegIterations; ++it) {
    const Vec6 e = leg_residual(leg_chain(side, angles, params), target_pos, target_rot);
    residual = e.norm();
    if (residual <= kLegTolerance) return angles;
    const Mat6 jac = leg_torso_jacobian(side, angles, params);
    const Eigen::PartialPivLU<Mat6> lu(jac);
    if (!(std::abs(lu.determinant()) > 1e-12)) break;
    Vec6 delta = lu.solve(e);
    const double largest = delta.cwiseAbs().maxCoeff();
    if (largest > kLegStepCap) delta *= kLegStepCap / largest;
    angles += delta;
  }
  // Newton stalls at roundoff level slightly above the tight tolerance.
  residual = leg_residual(leg_chain(side, angles, params), target_pos, target_rot).norm();
  if (residual <= kLegAccept) return angles;
  std::ostringstream os;
  os << (side == Side::kRight ? "right" : "left") << " leg closure failed (residual "
     << residual << ")";
  throw OutOfReach(os.str());
}

// Jacobian of a knee position with respect to its leg's six joints.
Eigen::Matrix<double, 3, 6> knee_jacobian(const Vec6& a, const LegChain& c) {
  Eigen::Matrix<double, 3, 6> jac = Eigen::Matrix<double, 3, 6>::Zero();
  const Vec3 arm = c.knee - c.ankle;
  jac.col(0) = Vec3::UnitX().cross(arm);
  jac.col(1) = (rot_x(a[0]) * Vec3::UnitY()).cross(arm);
  return jac;
}

// Body-frame angular velocity per Euler rate.
Mat3 body_rate_matrix(const Vec3& euler) {
  return euler_to_rotation(euler).transpose() * euler_rate_matrix(euler);
}

struct KneePoints {
  Vec3 right;
  Vec3 left;
};

KneePoints knees_at(const JointVector& q, const RobotParams& params) {
  return {leg_chain(Side::kRight, leg_angles(q, Side::kRight), params).knee,
          leg_chain(Side::kLeft, leg_angles(q, Side::kLeft), params).knee};
}

struct PointJacobians {
  Eigen::Matrix<double, 3, 6> right;
  Eigen::Matrix<double, 3, 6> left;
};

PointJacobians knee_jacobians_u(const JointVector& q, const ClosureJacobian& g,
                                const RobotParams& params) {
  PointJacobians out;
  for (Side side : {Side::kRight, Side::kLeft}) {
    const Vec6 a = leg_angles(q, side);
    const LegChain c = leg_chain(side, a, params);
    const Eigen::Matrix<double, 3, 6> jk =
        knee_jacobian(a, c) * g.block<6, 6>(leg_offset(side), 0);
    (side == Side::kRight ? out.right : out.left) = jk;
  }
  return out;
}

Mat6 assemble_mass(const MinimalPose& u, const PointJacobians& knees, const RobotParams& params) {
  Mat6 m = Mat6::Zero();
  m.block<3, 3>(0, 0) = params.m_torso() * Mat3::Identity();
  m += params.m_act * (knees.right.transpose() * knees.right + knees.left.transpose() * knees.left);
  const Mat3 eb = body_rate_matrix(u.tail<3>());
  m.block<3, 3>(3, 3) += eb.transpose() * params.torso_inertia.asDiagonal() * eb;
  return m;
}

}  // namespace

JointVector leg_ik(const MinimalPose& u, const JointVector& seed, const RobotParams& params) {
  const Vec3 pos = u.head<3>();
  const Mat3 rot = euler_to_rotation(u.tail<3>());
  JointVector q;
  for (Side side : {Side::kRight, Side::kLeft}) {
    q.segment<6>(leg_offset(side)) = solve_leg(side, pos, rot, leg_angles(seed, side), params);
  }
  return q;
}

ClosureJacobian closure_jacobian(const JointVector& q, const MinimalPose& u,
                                 const RobotParams& params) {
  Mat6 frame_rate = Mat6::Identity();
  frame_rate.block<3, 3>(3, 3) = euler_rate_matrix(u.tail<3>());
  ClosureJacobian g;
  for (Side side : {Side::kRight, Side::kLeft}) {
    const Mat6 jac = leg_torso_jacobian(side, leg_angles(q, side), params);
    g.block<6, 6>(leg_offset(side), 0) = jac.partialPivLu().solve(frame_rate);
  }
  return g;
}

MinimalPose pose_for_task(const TaskPose& target, const JointVector& seed,
                          const RobotParams& params, JointVector* q_out) {
  // Start from the torso pose the seed implies.
  const FrameSet f = blended_frames(seed, params);
  MinimalPose u;
  u.head<3>() = f.torso;
  u.tail<3>() = torso_euler(f.r_torso);
  JointVector q = leg_ik(u, seed, params);
  double residual = 0.0;
  for (int it = 0; it < 50; ++it) {
    const Vec6 e = target - task_pose(q, params);
    residual = e.norm();
    if (residual <= 1e-12) {
      if (q_out) *q_out = q;
      return u;
    }
    const Mat6 p = serial::jacobian(q, params) * closure_jacobian(q, u, params);
    Vec6 du = p.partialPivLu().solve(e);
    const double largest = du.cwiseAbs().maxCoeff();
    if (largest > 0.05) du *= 0.05 / largest;
    u += du;
    q = leg_ik(u, q, params);
  }
  throw NoConvergence("pose_for_task did not converge", residual);
}

SimState make_state(const MinimalPose& u, const Vec6& ud, const JointVector& seed,
                    const RobotParams& params, double t) {
  SimState s;
  s.u = u;
  s.ud = ud;
  s.t = t;
  s.q = leg_ik(u, seed, params);
  s.qd = closure_jacobian(s.q, u, params) * ud;
  return s;
}

DynamicsTerms dynamics_terms(const SimState& s, const RobotParams& params) {
  DynamicsTerms out;
  out.closure = closure_jacobian(s.q, s.u, params);
  const PointJacobians knees = knee_jacobians_u(s.q, out.closure, params);
  out.mass = assemble_mass(s.u, knees, params);

  Vec6 gz = Vec6::Zero();
  gz[2] = params.m_torso();
  gz += params.m_act * (knees.right.row(2) + knees.left.row(2)).transpose();
  out.gravity = -params.g * gz;

  out.bias.setZero();
  const double speed = s.ud.norm();
  if (speed > 1e-12) {
    // Second derivative of each knee along the current velocity direction.
    const double h = 1e-3 / speed;
    auto knees_along = [&](double sgn) { return knees_at(leg_ik(s.u + sgn * h * s.ud, s.q, params), params); };
    const KneePoints k0 = knees_at(s.q, params);
    const KneePoints kp1 = knees_along(1.0), km1 = knees_along(-1.0);
    const KneePoints kp2 = knees_along(2.0), km2 = knees_along(-2.0);
    auto second = [&](const Vec3& p2, const Vec3& p1, const Vec3& c, const Vec3& m1, const Vec3& m2) {
      return Vec3((-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h));
    };
    const Vec3 acc_r = second(kp2.right, kp1.right, k0.right, km1.right, km2.right);
    const Vec3 acc_l = second(kp2.left, kp1.left, k0.left, km1.left, km2.left);
    out.bias += params.m_act * (knees.right.transpose() * acc_r + knees.left.transpose() * acc_l);

    // Torso rotation: E_b^T (I dE_b/dt e_dot + w x I w).
    const Vec3 e = s.u.tail<3>();
    const Vec3 ed = s.ud.tail<3>();
    const double he = 1e-6;
    const Vec3 ebd_ed =
        (body_rate_matrix(e + he * ed) - body_rate_matrix(e - he * ed)) * ed / (2.0 * he);
    const Mat3 eb = body_rate_matrix(e);
    const Vec3 w = eb * ed;
    const Vec3 iw = params.torso_inertia.asDiagonal() * w;
    out.bias.tail<3>() +=
        eb.transpose() * (params.torso_inertia.asDiagonal() * ebd_ed + w.cross(iw));
  }
  return out;
}

Vec6 torso_wrench_force(const MinimalPose& u, const Wrench& wrench) {
  Vec6 out;
  out.head<3>() = wrench.head<3>();
  out.tail<3>() = euler_rate_matrix(u.tail<3>()).transpose() * wrench.tail<3>();
  return out;
}

Vec6 generalized_dynamics(const SimState& s, const JointVector& tau, const Vec6& external,
                          const RobotParams& params) {
  const DynamicsTerms d = dynamics_terms(s, params);
  const Eigen::SelfAdjointEigenSolver<Mat6> eig(d.mass, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxMassCondition)) throw SingularMass(cond);
  const Vec6 force = d.closure.transpose() * tau + d.gravity + external - d.bias;
  return d.mass.ldlt().solve(force);
}

SimState step(const SimState& s, const JointVector& tau, const Vec6& external, double dt,
              const RobotParams& params) {
  SimState next = s;
  semi_implicit_euler(next.u, next.ud, dt, [&](const Vec6&, const Vec6&) {
    return generalized_dynamics(s, tau, external, params);
  });
  next.t = s.t + dt;
  next.q = leg_ik(next.u, s.q, params);
  next.qd = closure_jacobian(next.q, next.u, params) * next.ud;
  return next;
}

double kinetic_energy(const SimState& s, const RobotParams& params) {
  const ClosureJacobian g = closure_jacobian(s.q, s.u, params);
  const Mat6 m = assemble_mass(s.u, knee_jacobians_u(s.q, g, params), params);
  return 0.5 * s.ud.dot(m * s.ud);
}

double potential_energy(const SimState& s, const RobotParams& params) {
  const KneePoints k = knees_at(s.q, params);
  return params.g * (params.m_torso() * s.u[2] + params.m_act * (k.right.z() + k.left.z()));
}

}  // namespace xrl
