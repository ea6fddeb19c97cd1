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

#include "xrl/types.hpp"

namespace xrl {

/// Geometry and mass properties of the XRL prototype. Defaults are the
/// prototype values with maximum payload.
struct RobotParams {
  double m_act = 8.73;    // kg, one 2-DOF joint module
  double m_batt = 0.9;    // kg, one battery
  double m_pl = 20.4;     // kg, payload
  double l1 = 0.2667;     // m, proximal link (knee to hip)
  double l2 = 1.0290;     // m, distal link (ankle to knee)
  double w_hip = 0.7747;  // m, hip-to-hip distance
  double w_base = 0.6922; // m, ankle-to-ankle distance
  double l_foot = 0.254;  // m
  double w_foot = 0.127;  // m
  double g = 9.81;        // m/s^2
  double tau_ankle_max = 115.6;  // N*m
  double tau_knee_max = 115.6;   // N*m
  double tau_hip_max = 115.6;    // N*m
  double f_assist = 200.0;       // N

  // Principal moments of the torso link about its center (body frame).
  // The COM model lumps the torso into a point; these only enter the
  // rotational dynamics. Hip modules at +-w_hip/2 plus a payload box.
  Vec3 torso_inertia{3.3, 0.55, 3.0};  // kg*m^2

  double m_torso() const { return 2.0 * m_act + 2.0 * m_batt + m_pl; }
  double m_total() const { return m_torso() + 4.0 * m_act; }

  /// Torque limit of joint `index` in the 12-joint order.
  double tau_max(int index) const;

  /// Throws ValidationError when a mass is negative or a length is not
  /// positive.
  void validate() const;
};

}  // namespace xrl
