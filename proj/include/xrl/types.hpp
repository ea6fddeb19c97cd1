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

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xrl {

inline constexpr int kNumJoints = 12;
inline constexpr int kTaskDim = 6;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using JointMatrix = Eigen::Matrix<double, kNumJoints, kNumJoints>;
using TaskJacobian = Eigen::Matrix<double, kTaskDim, kNumJoints>;
using TaskPose = Vec6;
using Wrench = Vec6;

// Joint order: right leg then left leg; ankle, knee, hip; frontal (phi)
// before sagittal (theta) within each 2-DOF module.
enum Joint : int {
  kAnklePhiR = 0,
  kAnkleThetaR,
  kKneePhiR,
  kKneeThetaR,
  kHipPhiR,
  kHipThetaR,
  kAnklePhiL,
  kAnkleThetaL,
  kKneePhiL,
  kKneeThetaL,
  kHipPhiL,
  kHipThetaL,
};

// Task pose order: COM position then torso 3-1-2 Euler angles.
enum TaskAxis : int { kX = 0, kY, kZ, kRoll, kPitch, kYaw };

enum class Side { kRight, kLeft };

inline constexpr int leg_offset(Side side) { return side == Side::kRight ? 0 : 6; }

const char* joint_name(int index);

/// Second partials of each task coordinate: slice i is d^2 p_i / dq dq.
struct TaskHessian {
  std::array<JointMatrix, kTaskDim> slices;

  /// Sum_i slices[i] * weights[i].
  JointMatrix contract(const Vec6& weights) const;
};

// Error hierarchy. Everything the library throws derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClosureViolation : public Error {
 public:
  ClosureViolation(double position_gap, double rotation_gap);
  double position_gap;
  double rotation_gap;
};

class GimbalLock : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

class OutOfReach : public Error {
 public:
  using Error::Error;
};

class SingularMass : public Error {
 public:
  SingularMass(double condition);
  double condition;
};

class CommandInOpenLoopSubspace : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line;  // 0 when not tied to a line
  std::string key;
};

}  // namespace xrl
