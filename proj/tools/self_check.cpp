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


#include "self_check.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>

#include "xrl/config.hpp"
#include "xrl/controller.hpp"
#include "xrl/differential.hpp"
#include "xrl/dynamics.hpp"
#include "xrl/model.hpp"
#include "xrl/scenario.hpp"
#include "xrl/servo_network.hpp"

namespace xrl::tools {

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

JointVector perturbed(const JointVector& q, double scale) {
  JointVector d;
  for (int i = 0; i < kNumJoints; ++i) d[i] = scale * std::sin(1.7 * i + 0.3);
  return q + d;
}

Outcome closure() {
  const RobotParams params;
  const SimState s = balanced_state(params, 0.80, 0.1);
  const auto [pos, rot] = closure_gap(s.q, params);
  return {pos < 1e-8 && rot < 1e-8, fmt("gap %.2e m, %.2e rad", pos, rot)};
}

Outcome parallel_kernels() {
  const RobotParams params;
  const JointVector q = balanced_state(params, 0.85).q;
  const bool jac = jacobian(q, params) == serial::jacobian(q, params);
  const TaskHessian a = hessian(q, params), b = serial::hessian(q, params);
  bool hes = true;
  for (int i = 0; i < kTaskDim; ++i) hes = hes && a.slices[i] == b.slices[i];
  return {jac && hes, fmt("%.0f OpenMP threads, bitwise equal", kernel_threads())};
}

Outcome projectors() {
  const RobotParams params;
  const ProjectionPair pair = ProjectionPair::xrl_default();
  const bool idem = pair.s * pair.s == pair.s && pair.s + pair.s_perp == Mat6::Identity();
  const TaskJacobian jac = jacobian(balanced_state(params, 0.75).q, params);
  const double ratio = (jac * nullspace_projector(jac)).norm() / jac.norm();
  return {idem && ratio <= 1e-8, fmt("|J N| / |J| = %.2e", ratio)};
}

Outcome virtual_disconnection() {
  const RobotParams params;
  ControllerConfig config;
  config.params = params;
  const SimState s = balanced_state(params, 0.85);
  const CentralOutput out = central_tick({perturbed(s.q, 0.01), JointVector::Zero(), 0.0}, config,
                                         nullptr, 1);
  const Vec6 err = config.projection.s * (out.p_ref - out.p_meas);
  return {err.isZero(0.0), fmt("max |S (p_ref - p)| = %.1e", err.cwiseAbs().maxCoeff())};
}

Outcome zero_error_torque() {
  const RobotParams params;
  ControllerConfig config;
  config.params = params;
  const SimState s = balanced_state(params, 0.85);
  const CentralOutput out = central_tick({s.q, JointVector::Zero(), 0.0}, config, nullptr, 1);
  const JointVector tau = out.total_torque(out.q_ref, out.qd_ref);
  const double err = (tau - out.tau_open).cwiseAbs().maxCoeff();
  return {err == 0.0, fmt("max |tau - J^T F_O| = %.1e N*m", err)};
}

Outcome servo_sum() {
  const RobotParams params;
  ControllerConfig config;
  config.params = params;
  const SimState s = balanced_state(params, 0.85);
  const JointVector q = perturbed(s.q, 0.002);
  const JointVector qd = perturbed(JointVector::Zero(), 0.01);
  const CentralOutput out = central_tick({q, qd, 0.0}, config, nullptr, 1);
  ServoBank bank(params, 0.01);
  bank.receive(split_output(out), 0.0);
  const JointVector tau = bank.tick(q, qd, 0.0);
  const double err = (tau - out.total_torque(q, qd)).cwiseAbs().maxCoeff();
  return {err <= 1e-9, fmt("max |sum servo - central| = %.1e N*m", err)};
}

Outcome static_equilibrium() {
  const RobotParams params;
  const SimState s = balanced_state(params, 0.85);
  Wrench f = Wrench::Zero();
  f[kZ] = params.g * params.m_total();
  const JointVector tau = jacobian(s.q, params).transpose() * f;
  const double acc = generalized_dynamics(s, tau, Vec6::Zero(), params).norm();
  return {acc <= 1e-3, fmt("|u_dd| = %.2e", acc)};
}

Outcome empty_config() {
  const ScenarioConfig c = parse_config("");
  c.validate();
  const RobotParams d;
  return {c.robot.l1 == d.l1 && c.robot.m_pl == d.m_pl && c.events.empty(), "defaults"};
}

}  // namespace

int run_self_check(std::ostream& out) {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"closure of balanced pose", closure},
      {"parallel kernels match serial", parallel_kernels},
      {"projector and nullspace identities", projectors},
      {"virtual loop disconnection", virtual_disconnection},
      {"zero-error torque is feedforward", zero_error_torque},
      {"servo torques sum to central law", servo_sum},
      {"feedforward static equilibrium", static_equilibrium},
      {"empty config gives defaults", empty_config},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.ok) ++failures;
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-38s %s\n", o.ok ? "PASS" : "FAIL", name,
                  o.detail.c_str());
    out << line;
  }
  return failures;
}

}  // namespace xrl::tools
