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

#include "xrl/model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

namespace xrl {

namespace {

constexpr const char* kJointNames[kNumJoints] = {
    "ankle_phi_r", "ankle_theta_r", "knee_phi_r", "knee_theta_r",
    "hip_phi_r",   "hip_theta_r",   "ankle_phi_l", "ankle_theta_l",
    "knee_phi_l",  "knee_theta_l",  "hip_phi_l",   "hip_theta_l"};

// Lateral offset from a hip to the torso center, in the torso frame.
Vec3 hip_to_center(Side side, const RobotParams& params) {
  const double half = 0.5 * params.w_hip;
  return side == Side::kRight ? Vec3(0.0, half, 0.0) : Vec3(0.0, -half, 0.0);
}

Eigen::Quaterniond module_quat(double phi, double theta) {
  return Eigen::Quaterniond(Eigen::AngleAxisd(phi, Vec3::UnitX())) *
         Eigen::Quaterniond(Eigen::AngleAxisd(theta, Vec3::UnitY()));
}

Eigen::Quaterniond leg_quat(const Vec6& a) {
  return module_quat(a[0], a[1]) * module_quat(a[2], a[3]) * module_quat(a[4], a[5]);
}

}  // namespace

const char* joint_name(int index) {
  return (index >= 0 && index < kNumJoints) ? kJointNames[index] : "?";
}

JointMatrix TaskHessian::contract(const Vec6& weights) const {
  JointMatrix out = JointMatrix::Zero();
  for (int i = 0; i < kTaskDim; ++i) out += slices[i] * weights[i];
  return out;
}

ClosureViolation::ClosureViolation(double position_gap, double rotation_gap)
    : Error([&] {
        std::ostringstream os;
        os << "closure violation: legs disagree on torso pose by " << position_gap
           << " m / " << rotation_gap << " rad";
        return os.str();
      }()),
      position_gap(position_gap),
      rotation_gap(rotation_gap) {}

SingularMass::SingularMass(double condition)
    : Error("mass matrix ill-conditioned (cond = " + std::to_string(condition) + ")"),
      condition(condition) {}

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : Error([&] {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        if (!key.empty()) os << key << ": ";
        os << message;
        return os.str();
      }()),
      line(line),
      key(std::move(key)) {}

double RobotParams::tau_max(int index) const {
  switch ((index % 6) / 2) {
    case 0:
      return tau_ankle_max;
    case 1:
      return tau_knee_max;
    default:
      return tau_hip_max;
  }
}

void RobotParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("invalid robot parameter: ") + what);
  };
  require(m_act >= 0 && m_batt >= 0 && m_pl >= 0, "masses must be >= 0");
  require(l1 > 0 && l2 > 0 && w_hip > 0 && w_base > 0 && l_foot > 0 && w_foot > 0,
          "lengths must be > 0");
  require(g > 0, "g must be > 0");
  require(tau_ankle_max >= 0 && tau_knee_max >= 0 && tau_hip_max >= 0,
          "torque limits must be >= 0");
  require((torso_inertia.array() >= 0).all(), "torso inertia must be >= 0");
}

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 euler_to_rotation(const Vec3& e) { return rot_z(e[2]) * rot_x(e[0]) * rot_y(e[1]); }

// The published decomposition is written for the passive matrix R^T, so the
// indices here are transposed.
Vec3 torso_euler(const Mat3& r) {
  const double s_phi = r(2, 1);
  if (std::abs(s_phi) >= 1.0 - 1e-9) {
    throw GimbalLock("torso roll at +-pi/2: 3-1-2 decomposition undefined");
  }
  return Vec3(std::asin(s_phi), std::atan2(-r(2, 0), r(2, 2)), std::atan2(-r(0, 1), r(1, 1)));
}

Mat3 euler_rate_matrix(const Vec3& e) {
  const Mat3 rz = rot_z(e[2]);
  Mat3 m;
  m.col(0) = rz * Vec3::UnitX();
  m.col(1) = rz * rot_x(e[0]) * Vec3::UnitY();
  m.col(2) = Vec3::UnitZ();
  return m;
}

Vec3 ankle_position(Side side, const RobotParams& params) {
  const double half = 0.5 * params.w_base;
  return side == Side::kRight ? Vec3(0.0, -half, 0.0) : Vec3(0.0, half, 0.0);
}

LegChain leg_chain(Side side, const Vec6& a, const RobotParams& params) {
  LegChain c;
  c.ankle = ankle_position(side, params);
  const Mat3 r_ankle = rot_xy(a[0], a[1]);
  const Mat3 r_knee = r_ankle * rot_xy(a[2], a[3]);
  c.rotation = r_knee * rot_xy(a[4], a[5]);
  c.knee = c.ankle + r_ankle * Vec3(0.0, 0.0, params.l2);
  c.hip = c.knee + r_knee * Vec3(0.0, 0.0, params.l1);
  c.torso = c.hip + c.rotation * hip_to_center(side, params);
  return c;
}

Mat6 leg_torso_jacobian(Side side, const Vec6& a, const RobotParams& params) {
  const LegChain c = leg_chain(side, a, params);
  const Mat3 r_ankle = rot_xy(a[0], a[1]);
  const Mat3 r_knee = r_ankle * rot_xy(a[2], a[3]);
  const std::array<Vec3, 6> axes = {
      Vec3::UnitX(),
      rot_x(a[0]) * Vec3::UnitY(),
      r_ankle * Vec3::UnitX(),
      r_ankle * rot_x(a[2]) * Vec3::UnitY(),
      r_knee * Vec3::UnitX(),
      r_knee * rot_x(a[4]) * Vec3::UnitY(),
  };
  const std::array<Vec3, 6> origins = {c.ankle, c.ankle, c.knee, c.knee, c.hip, c.hip};
  Mat6 jac;
  for (int j = 0; j < 6; ++j) {
    jac.block<3, 1>(0, j) = axes[j].cross(c.torso - origins[j]);
    jac.block<3, 1>(3, j) = axes[j];
  }
  return jac;
}

FrameSet blended_frames(const JointVector& q, const RobotParams& params) {
  const Vec6 right = leg_angles(q, Side::kRight);
  const Vec6 left = leg_angles(q, Side::kLeft);
  const LegChain r = leg_chain(Side::kRight, right, params);
  const LegChain l = leg_chain(Side::kLeft, left, params);

  Eigen::Quaterniond qr = leg_quat(right);
  Eigen::Quaterniond ql = leg_quat(left);
  if (qr.dot(ql) < 0.0) ql.coeffs() = -ql.coeffs();
  Eigen::Quaterniond mid;
  mid.coeffs() = (qr.coeffs() + ql.coeffs()).normalized();

  FrameSet f;
  f.ankle_r = r.ankle;
  f.ankle_l = l.ankle;
  f.knee_r = r.knee;
  f.knee_l = l.knee;
  // Each leg places its own hip; the torso center is their midpoint.
  f.torso = 0.5 * (r.hip + l.hip);
  f.r_torso = mid.toRotationMatrix();
  return f;
}

std::pair<double, double> closure_gap(const JointVector& q, const RobotParams& params) {
  const LegChain r = leg_chain(Side::kRight, leg_angles(q, Side::kRight), params);
  const LegChain l = leg_chain(Side::kLeft, leg_angles(q, Side::kLeft), params);
  const double pos = (r.torso - l.torso).norm();
  const double rot = Eigen::AngleAxisd(r.rotation.transpose() * l.rotation).angle();
  return {pos, rot};
}

FrameSet forward_kinematics(const JointVector& q, const RobotParams& params, double tolerance) {
  const auto [pos, rot] = closure_gap(q, params);
  if (pos > tolerance || rot > tolerance) throw ClosureViolation(pos, rot);
  return blended_frames(q, params);
}

Vec3 com_position(const FrameSet& f, const RobotParams& params) {
  const double m_torso = params.m_torso();
  const double m_total = params.m_total();
  const Vec3 modules = f.knee_l + f.knee_r + f.ankle_l + f.ankle_r;
  return (f.torso * m_torso + modules * params.m_act) / m_total;
}

Vec3 com_position(const JointVector& q, const RobotParams& params) {
  return com_position(blended_frames(q, params), params);
}

TaskPose task_pose(const JointVector& q, const RobotParams& params) {
  const FrameSet f = blended_frames(q, params);
  TaskPose p;
  p.head<3>() = com_position(f, params);
  p.tail<3>() = torso_euler(f.r_torso);
  return p;
}

Eigen::Matrix<double, kNumJoints, kTaskDim> damped_pinv(const TaskJacobian& jac, double lambda) {
  const Mat6 gram = jac * jac.transpose() + lambda * lambda * Mat6::Identity();
  // gram is symmetric positive definite for lambda > 0.
  return jac.transpose() * gram.ldlt().solve(Mat6::Identity());
}

JointMatrix nullspace_projector(const TaskJacobian& jac, double lambda) {
  if (jac.isZero(0.0)) return JointMatrix::Identity();
  return JointMatrix::Identity() - damped_pinv(jac, lambda) * jac;
}

}  // namespace xrl
