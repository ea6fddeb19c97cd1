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

// Kinematics and mass model of the two-leg closed chain with both feet
// planted. Every function here is pure.

#pragma once

#include "xrl/params.hpp"
#include "xrl/types.hpp"

namespace xrl {

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Rotation of one 2-DOF joint module: frontal about x, then sagittal
/// about the rotated y.
inline Mat3 rot_xy(double phi, double theta) { return rot_x(phi) * rot_y(theta); }

/// Torso orientation from 3-1-2 Euler angles euler = (phi, theta, psi):
/// R = R_z(psi) R_x(phi) R_y(theta), yaw first, then roll, then pitch.
Mat3 euler_to_rotation(const Vec3& euler);

/// Inverse of euler_to_rotation. Throws GimbalLock when |R(2,1)| = |sin phi| is within
/// 1e-9 of one.
Vec3 torso_euler(const Mat3& rotation);

/// Maps 3-1-2 Euler rates (phi, theta, psi) to world angular velocity.
Mat3 euler_rate_matrix(const Vec3& euler);

/// Frames of one leg evaluated from its own six joint angles.
struct LegChain {
  Vec3 ankle;
  Vec3 knee;
  Vec3 hip;
  Vec3 torso;     // torso center reached through this leg
  Mat3 rotation;  // torso orientation reached through this leg
};

Vec3 ankle_position(Side side, const RobotParams& params);

/// `angles` holds (phi_a, theta_a, phi_k, theta_k, phi_h, theta_h).
LegChain leg_chain(Side side, const Vec6& angles, const RobotParams& params);

inline Vec6 leg_angles(const JointVector& q, Side side) {
  return q.segment<6>(leg_offset(side));
}

/// Geometric Jacobian of the torso frame reached through one leg:
/// rows 0-2 linear velocity of the torso center, rows 3-5 world angular
/// velocity, per unit rate of the leg's six joints.
Mat6 leg_torso_jacobian(Side side, const Vec6& angles, const RobotParams& params);

struct FrameSet {
  Vec3 ankle_r;
  Vec3 ankle_l;
  Vec3 knee_r;
  Vec3 knee_l;
  Vec3 torso;
  Mat3 r_torso;
};

/// Symmetric extension of the closed-chain kinematics to any q: the torso
/// center is the midpoint of the two hips, each placed by its own leg, and
/// the orientation is the geodesic midpoint of the two legs' torso
/// rotations. On the constraint manifold this is the exact torso pose.
/// Never throws.
FrameSet blended_frames(const JointVector& q, const RobotParams& params);

inline constexpr double kClosureTolerance = 1e-6;

/// Forward kinematics of the closed chain. Throws ClosureViolation when the
/// two legs disagree on the torso pose by more than `tolerance` (m or rad).
FrameSet forward_kinematics(const JointVector& q, const RobotParams& params,
                            double tolerance = kClosureTolerance);

/// Position and rotation gaps between the two legs' torso estimates.
std::pair<double, double> closure_gap(const JointVector& q, const RobotParams& params);

/// Mass-weighted mean of the torso point and the four knee/ankle modules.
Vec3 com_position(const JointVector& q, const RobotParams& params);
Vec3 com_position(const FrameSet& frames, const RobotParams& params);

/// [x_com, y_com, z_com, phi, theta, psi].
TaskPose task_pose(const JointVector& q, const RobotParams& params);

/// Damped pseudoinverse J^T (J J^T + lambda^2 I)^-1.
Eigen::Matrix<double, kNumJoints, kTaskDim> damped_pinv(const TaskJacobian& jacobian,
                                                        double lambda = 1e-6);

/// N = I - J^+ J with the damped pseudoinverse.
JointMatrix nullspace_projector(const TaskJacobian& jacobian, double lambda = 1e-6);

}  // namespace xrl
