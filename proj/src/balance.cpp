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


#include "xrl/balance.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

namespace xrl {

LeanLimit max_lean_angle(const RobotParams& params, double z_max, double m_tot) {
  const double denom = m_tot * params.g * z_max;
  const double arg = denom > 0.0 ? 2.0 * params.tau_ankle_max / denom : INFINITY;
  if (arg > 1.0) return {std::numbers::pi / 2.0, true};
  return {std::asin(arg), false};
}

double edge_lean_angle(const RobotParams& params, double z_max, EdgeDimension edge) {
  const double d = edge == EdgeDimension::kFootWidth ? params.w_foot : params.l_foot;
  return std::atan(d / (2.0 * z_max));
}

double edge_torque(const RobotParams& params, double z_max, double m_tot, double theta_edge) {
  return 0.5 * m_tot * params.g * z_max * std::sin(theta_edge);
}

MinStiffness min_stiffnesses(double tau_edge, double theta_edge, double z_max) {
  if (tau_edge == 0.0) return {};
  if (theta_edge == 0.0) throw DivisionByZero("edge lean angle is zero");
  MinStiffness s;
  s.k_ankle = tau_edge / theta_edge;
  s.k_x = 2.0 * s.k_ankle / (z_max * z_max);
  return s;
}

BalanceReport balance_report(const RobotParams& params, const BalanceOptions& options) {
  BalanceReport r;
  r.z_max = options.z_max > 0.0 ? options.z_max : params.l1 + params.l2;
  r.m_tot = options.m_tot > 0.0 ? options.m_tot : params.m_torso() + 2.0 * params.m_act;
  r.m_total = params.m_total();
  r.tau_ankle_max = params.tau_ankle_max;
  const LeanLimit lean = max_lean_angle(params, r.z_max, r.m_tot);
  r.theta_max = lean.angle;
  r.torque_dominates = lean.torque_dominates;
  r.theta_edge = edge_lean_angle(params, r.z_max, options.edge);
  r.tau_ank_edge = edge_torque(params, r.z_max, r.m_tot, r.theta_edge);
  const MinStiffness s = min_stiffnesses(r.tau_ank_edge, r.theta_edge, r.z_max);
  r.k_ank_min = s.k_ankle;
  r.k_x_min = s.k_x;
  const MinStiffness at_max = min_stiffnesses(params.tau_ankle_max, r.theta_edge, r.z_max);
  r.k_ank_at_tau_max = at_max.k_ankle;
  r.k_x_at_tau_max = at_max.k_x;
  r.tau_ank_edge_full = edge_torque(params, r.z_max, r.m_total, r.theta_edge);
  r.k_x_min_full = min_stiffnesses(r.tau_ank_edge_full, r.theta_edge, r.z_max).k_x;
  r.recoverable = r.tau_ank_edge < params.tau_ankle_max;
  return r;
}

std::string format_report(const BalanceReport& r) {
  const double deg = 180.0 / std::numbers::pi;
  std::string out;
  char line[160];
  auto add = [&](const char* label, double value, const char* unit) {
    std::snprintf(line, sizeof line, "%-28s %12.4f %s\n", label, value, unit);
    out += line;
  };
  add("z_max", r.z_max, "m");
  add("m_tot", r.m_tot, "kg");
  add("tau_ankle_max", r.tau_ankle_max, "N*m");
  add("theta_max", r.theta_max, "rad");
  add("theta_max", r.theta_max * deg, "deg");
  add("theta_edge", r.theta_edge, "rad");
  add("theta_edge", r.theta_edge * deg, "deg");
  add("tau_ank_edge", r.tau_ank_edge, "N*m");
  add("K_ank_min", r.k_ank_min, "N*m/rad");
  add("K_x_min", r.k_x_min, "N/m");
  add("K_ank at tau_ankle_max", r.k_ank_at_tau_max, "N*m/rad");
  add("K_x at tau_ankle_max", r.k_x_at_tau_max, "N/m");
  add("m_total (full robot)", r.m_total, "kg");
  add("tau_ank_edge (full robot)", r.tau_ank_edge_full, "N*m");
  add("K_x_min (full robot)", r.k_x_min_full, "N/m");
  if (r.torque_dominates) out += "note: ankle torque exceeds the gravity moment at any lean\n";
  out += r.recoverable ? "verdict: recoverable (tau_ank_edge < tau_ankle_max)\n"
                       : "verdict: NOT recoverable (tau_ank_edge >= tau_ankle_max)\n";
  return out;
}

std::string report_json(const BalanceReport& r) {
  nlohmann::ordered_json j;
  j["z_max"] = r.z_max;
  j["m_tot"] = r.m_tot;
  j["m_total"] = r.m_total;
  j["tau_ankle_max"] = r.tau_ankle_max;
  j["theta_max"] = r.theta_max;
  j["torque_dominates"] = r.torque_dominates;
  j["theta_edge"] = r.theta_edge;
  j["tau_ank_edge"] = r.tau_ank_edge;
  j["k_ank_min"] = r.k_ank_min;
  j["k_x_min"] = r.k_x_min;
  j["k_ank_at_tau_max"] = r.k_ank_at_tau_max;
  j["k_x_at_tau_max"] = r.k_x_at_tau_max;
  j["tau_ank_edge_full"] = r.tau_ank_edge_full;
  j["k_x_min_full"] = r.k_x_min_full;
  j["recoverable"] = r.recoverable;
  return j.dump(2);
}

}  // namespace xrl
