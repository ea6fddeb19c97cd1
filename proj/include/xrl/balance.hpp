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


// Static balance margins of the planted two-leg stance: how far the upper
// body may lean before the ankles saturate or the COM leaves the foot, and
// the minimum ankle and body stiffness that recovers from the foot edge.

#pragma once

#include <string>

#include "xrl/params.hpp"

namespace xrl {

/// Which foot dimension bounds the lean toward the support edge. The
/// published 2.81 degree figure corresponds to the foot width.
enum class EdgeDimension { kFootWidth, kFootLength };

struct BalanceOptions {
  double z_max = 0.0;  // m; <= 0 selects l1 + l2
  double m_tot = 0.0;  // kg; <= 0 selects m_torso + 2 m_act (knees, no ankles)
  EdgeDimension edge = EdgeDimension::kFootWidth;
};

struct LeanLimit {
  double angle = 0.0;               // rad
  bool torque_dominates = false;    // arcsin argument above one
};

/// theta_max = asin(2 tau_ankle_max / (m_tot g z_max)); pi/2 with the flag
/// set when the ankles could hold any lean.
LeanLimit max_lean_angle(const RobotParams& params, double z_max, double m_tot);

/// theta_edge = atan(d / (2 z_max)) with d the selected foot dimension.
double edge_lean_angle(const RobotParams& params, double z_max,
                       EdgeDimension edge = EdgeDimension::kFootWidth);

/// tau = (m_tot g z_max / 2) sin(theta_edge), per ankle.
double edge_torque(const RobotParams& params, double z_max, double m_tot, double theta_edge);

struct MinStiffness {
  double k_ankle = 0.0;  // N*m/rad
  double k_x = 0.0;      // N/m
};

/// K_ank = tau_edge / theta_edge, K_x = 2 K_ank / z_max^2. Throws
/// DivisionByZero when theta_edge is zero (unless tau_edge is also zero, in
/// which case both stiffnesses are zero).
MinStiffness min_stiffnesses(double tau_edge, double theta_edge, double z_max);

struct BalanceReport {
  double z_max = 0.0;
  double m_tot = 0.0;
  double m_total = 0.0;  // full robot, for comparison
  double tau_ankle_max = 0.0;
  double theta_max = 0.0;
  bool torque_dominates = false;
  double theta_edge = 0.0;
  double tau_ank_edge = 0.0;
  double k_ank_min = 0.0;
  double k_x_min = 0.0;
  // Stiffness needed when the full ankle torque is reached at the edge.
  double k_ank_at_tau_max = 0.0;
  double k_x_at_tau_max = 0.0;
  // Same analysis with the full robot mass.
  double tau_ank_edge_full = 0.0;
  double k_x_min_full = 0.0;
  bool recoverable = false;  // tau_ank_edge < tau_ankle_max
};

BalanceReport balance_report(const RobotParams& params, const BalanceOptions& options = {});

std::string format_report(const BalanceReport& report);
std::string report_json(const BalanceReport& report);

}  // namespace xrl
