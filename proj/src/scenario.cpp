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


#include "xrl/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "xrl/differential.hpp"
#include "xrl/model.hpp"
#include "xrl/operator.hpp"

namespace xrl {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Fall thresholds: past these the stance is lost for any practical purpose.
constexpr double kFallXY = 0.3;         // m
constexpr double kFallZ = 0.3;          // m
constexpr double kFallRollYaw = 0.5;    // rad
constexpr double kFallPitch = 1.0;      // rad

JointVector standing_seed() {
  // Knees forward, legs slightly splayed; picks the natural squat branch.
  JointVector q = JointVector::Zero();
  for (Side side : {Side::kRight, Side::kLeft}) {
    const int o = leg_offset(side);
    const double s = side == Side::kRight ? 1.0 : -1.0;
    q[o + 0] = 0.03 * s;
    q[o + 1] = 0.25;
    q[o + 3] = -0.5;
    q[o + 4] = -0.03 * s;
    q[o + 5] = 0.25;
  }
  return q;
}

void put(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

SimState balanced_state(const RobotParams& params, double z_com, double pitch) {
  TaskPose target = TaskPose::Zero();
  target[kZ] = z_com;
  target[kPitch] = pitch;
  JointVector q;
  const MinimalPose u = pose_for_task(target, standing_seed(), params, &q);
  return make_state(u, Vec6::Zero(), q, params);
}

std::string trace_header() {
  std::string h = "t";
  const char* u_names[] = {"x", "y", "z", "roll", "pitch", "yaw"};
  for (const char* n : u_names) h += std::string(",u_") + n;
  for (const char* n : u_names) h += std::string(",ud_") + n;
  const char* p_names[] = {"x_com", "y_com", "z_com", "roll", "pitch", "yaw"};
  for (const char* n : p_names) h += std::string(",p_") + n;
  for (const char* n : p_names) h += std::string(",pref_") + n;
  for (int i = 0; i < kNumJoints; ++i) h += std::string(",q_") + joint_name(i);
  for (int i = 0; i < kNumJoints; ++i) h += std::string(",tau_") + joint_name(i);
  const char* w_names[] = {"fx", "fy", "fz", "mx", "my", "mz"};
  for (const char* n : w_names) h += std::string(",fop_") + n;
  h += ",push_fx,push_fy,link_alive,z_h,theta_h";
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string j = joint_name(i);
    h += ",qref_" + j + ",k_" + j + ",b_" + j + ",tauff_" + j;
  }
  h += ",hessian_dropped,ik_failed";
  return h;
}

TraceWriter::TraceWriter(std::ostream& out) : out_(out) { out_ << trace_header() << '\n'; }

void TraceWriter::write(const TickRecord& r) {
  std::string line;
  line.reserve(2048);
  put(line, r.t);
  auto vec = [&](const auto& v) {
    for (int i = 0; i < v.size(); ++i) {
      line += ',';
      put(line, v[i]);
    }
  };
  vec(r.u);
  vec(r.ud);
  vec(r.p);
  vec(r.p_ref);
  vec(r.q);
  vec(r.tau);
  vec(r.f_op);
  line += ',';
  put(line, r.f_push[kX]);
  line += ',';
  put(line, r.f_push[kY]);
  line += r.link_alive ? ",1," : ",0,";
  put(line, r.z_h);
  line += ',';
  put(line, r.theta_h);
  for (const ServoCommand& c : r.servo) {
    for (double v : {c.q_ref, c.k, c.b, c.tau_ff}) {
      line += ',';
      put(line, v);
    }
  }
  line += r.central.hessian_dropped ? ",1" : ",0";
  line += r.central.ik_failed ? ",1\n" : ",0\n";
  out_ << line;
}

const char* verdict_name(Verdict v) { return v == Verdict::kStable ? "STABLE" : "UNSTABLE"; }

Simulation::Simulation(ScenarioConfig config)
    : config_(std::move(config)),
      controller_([&] {
        config_.validate();
        ControllerConfig c;
        c.params = config_.robot;
        c.projection = ProjectionPair::from_diagonal(config_.open_loop);
        c.gains = config_.gains;
        c.setpoint = config_.setpoint;
        c.ik = config_.ik;
        return c;
      }()),
      channel_(config_.channel),
      servos_(config_.robot, config_.channel.period),
      noise_rng_(config_.seed) {
  controller_config_ = controller_.config();
  summary_.criteria = config_.criteria;
  total_ticks_ = static_cast<std::uint64_t>(std::llround(config_.duration / config_.dt));
  central_every_ = static_cast<int>(std::lround(config_.channel.period / config_.dt));
  if (config_.rest_load_follows_assist) config_.op.rest_load = config_.robot.f_assist;

  state_ = balanced_state(config_.robot, config_.op.z.initial(), config_.op.theta.initial());
  const TaskPose p0 = task_pose(state_.q, config_.robot);
  reference_com_ = p0.head<3>();

  for (const Event& e : config_.events) {
    if (e.kind == EventKind::kOperatorZ) operator_moves_.emplace_back(e.t, e.t + e.duration);
    if ((e.kind == EventKind::kPushX || e.kind == EventKind::kPushY) && !first_push_) {
      first_push_ = e.t;
    }
  }

  // The servos hold a command before anything moves.
  const CentralOutput& initial = controller_.tick({state_.q, state_.qd, 0.0});
  servos_.receive(split_output(initial), 0.0);
  record_.t = 0.0;
  if (total_ticks_ == 0) finalize_summary();
}

void Simulation::steer(const Steering& c) {
  const double t = state_.t;
  switch (c.kind) {
    case Steering::Kind::kOperatorZ:
      config_.op.z.plan(t, c.duration, c.value);
      operator_moves_.emplace_back(t, t + c.duration);
      break;
    case Steering::Kind::kOperatorTheta:
      config_.op.theta.plan(t, c.duration, c.value);
      break;
    case Steering::Kind::kAssist:
      controller_.mutable_config().params.f_assist = c.value;
      if (config_.rest_load_follows_assist) config_.op.rest_load = c.value;
      break;
    case Steering::Kind::kKill:
      // Killed between ticks, so the per-tick edge check would miss it.
      if (channel_.alive() && !kill_time_) {
        kill_time_ = t;
        last_disturbance_ = t;
        rest_com_ = record_.p.head<3>();
        rest_captured_ = tick_ > 0;
      }
      channel_.kill();
      break;
    case Steering::Kind::kRestore:
      channel_.restore();
      break;
    case Steering::Kind::kPushX:
    case Steering::Kind::kPushY: {
      Wrench f = Wrench::Zero();
      f[c.kind == Steering::Kind::kPushX ? kX : kY] = c.value / config_.push_duration;
      pulses_.push_back({f, t + config_.push_duration});
      if (!first_push_ || *first_push_ > t) first_push_ = t;
      if (!channel_.alive()) {
        last_disturbance_ = t;
        rest_com_ = record_.p.head<3>();
        rest_captured_ = true;
        last_outside_band_.reset();
      }
      break;
    }
  }
}

void Simulation::apply_event(const Event& e) {
  switch (e.kind) {
    case EventKind::kCommKill:
      steer({Steering::Kind::kKill});
      break;
    case EventKind::kCommRestore:
      steer({Steering::Kind::kRestore});
      break;
    case EventKind::kPushX:
      steer({Steering::Kind::kPushX, e.value});
      break;
    case EventKind::kPushY:
      steer({Steering::Kind::kPushY, e.value});
      break;
    case EventKind::kAssist:
      steer({Steering::Kind::kAssist, e.value});
      break;
    case EventKind::kOperatorZ:
      config_.op.z.plan(e.t, e.duration, e.value);
      break;
    case EventKind::kOperatorTheta:
      config_.op.theta.plan(e.t, e.duration, e.value);
      break;
  }
}

void Simulation::central_update(const JointVector& q, const JointVector& qd) {
  const CentralOutput& out = controller_.tick({q, qd, state_.t});
  ++summary_.central_ticks;
  if (out.status.hessian_dropped) ++summary_.hessian_dropped_ticks;
  if (out.status.ik_failed) ++summary_.ik_failures;
  const Mat6& s = controller_.config().projection.s;
  summary_.max_open_loop_error =
      std::max(summary_.max_open_loop_error, (s * (out.p_ref - out.p_meas)).cwiseAbs().maxCoeff());
  const Wrench closed = out.wrench - feedforward_wrench(controller_.config().params);
  summary_.max_open_loop_force =
      std::max(summary_.max_open_loop_force, (s * closed).cwiseAbs().maxCoeff());
  const std::vector<ServoMessage> outbox = split_output(out);
  servos_.receive(channel_.step(&outbox, state_.t), state_.t);
  record_.p_ref = out.p_ref;
  record_.central = out.status;
}

bool Simulation::advance() {
  if (finished_) return false;
  if (tick_ >= total_ticks_) {
    finalize_summary();
    return false;
  }
  const double t = static_cast<double>(tick_) * config_.dt;
  state_.t = t;
  try {
    while (next_event_ < config_.events.size() && config_.events[next_event_].t <= t + 1e-9) {
      apply_event(config_.events[next_event_++]);
    }
    const bool was_alive = channel_.alive();

    JointVector q = state_.q;
    JointVector qd = state_.qd;
    if (config_.noise_q > 0.0 || config_.noise_qd > 0.0) {
      auto uniform = [&] { return 2.0 * (static_cast<double>(noise_rng_() >> 11) * 0x1.0p-53) - 1.0; };
      for (int i = 0; i < kNumJoints; ++i) {
        q[i] += config_.noise_q * uniform();
        qd[i] += config_.noise_qd * uniform();
      }
    }

    if (tick_ % static_cast<std::uint64_t>(central_every_) == 0) {
      central_update(q, qd);
    } else {
      servos_.receive(channel_.step(nullptr, t), t);
    }
    if (was_alive && !channel_.alive() && !kill_time_) {
      kill_time_ = t;
      last_disturbance_ = t;
      rest_com_ = record_.p.head<3>();
      rest_captured_ = tick_ > 0;
    }

    const JointVector tau = servos_.tick(q, qd, t);
    const TaskPose p = task_pose(state_.q, config_.robot);
    const TaskJacobian jac = jacobian(state_.q, config_.robot);
    const Vec6 pd = jac * state_.qd;
    const Wrench f_op = operator_wrench(t, p, pd, config_.op);
    Wrench f_push = Wrench::Zero();
    for (const Pulse& pulse : pulses_) {
      if (t < pulse.until - 1e-9) f_push += pulse.force;
    }

    record_.tick = tick_;
    record_.t = t;
    record_.u = state_.u;
    record_.ud = state_.ud;
    record_.p = p;
    record_.pd = pd;
    record_.q = state_.q;
    record_.qd = state_.qd;
    record_.tau = tau;
    record_.f_op = f_op;
    record_.f_push = f_push;
    record_.link_alive = channel_.alive();
    record_.saturated = false;
    for (int i = 0; i < kNumJoints; ++i) {
      record_.servo[i] = servos_.state(i).command;
      record_.saturated = record_.saturated || servos_.saturated(i);
    }
    record_.z_h = config_.op.z.eval(t).x;
    record_.theta_h = config_.op.theta.eval(t).x;
    if (!rest_captured_ && kill_time_) {
      rest_com_ = p.head<3>();
      rest_captured_ = true;
    }
    record_metrics(record_);
    summary_.saturation_events = servos_.saturation_events();
    if (on_tick) on_tick(record_);
    if (finished_) return false;

    // The harness spring is measured on the task coordinates (z_COM, pitch)
    // and acts along them; pushes land on the torso.
    const Mat6 task_map = jac * closure_jacobian(state_.q, state_.u, config_.robot);
    const Vec6 external = task_map.transpose() * f_op + torso_wrench_force(state_.u, f_push);
    state_ = step(state_, tau, external, config_.dt, config_.robot);
  } catch (const Error& e) {
    std::ostringstream os;
    os << "runtime error at tick " << tick_ << " (t = " << t << " s): " << e.what();
    finish(os.str(), true, false);
    return false;
  }
  ++tick_;
  state_.t = static_cast<double>(tick_) * config_.dt;
  return true;
}

void Simulation::record_metrics(const TickRecord& r) {
  RunSummary& s = summary_;
  const Vec3 com = r.p.head<3>();
  const double dev = std::max(std::abs(com.x() - reference_com_.x()),
                              std::abs(com.y() - reference_com_.y()));
  s.max_xy_dev = std::max(s.max_xy_dev, dev);
  if (!first_push_ || r.t < *first_push_) {
    s.max_xy_dev_before_push = std::max(s.max_xy_dev_before_push, dev);
  }
  s.max_roll_deg = std::max(s.max_roll_deg, std::abs(r.p[kRoll]) * kRadToDeg);
  s.max_yaw_deg = std::max(s.max_yaw_deg, std::abs(r.p[kYaw]) * kRadToDeg);
  for (const auto& [begin, end] : operator_moves_) {
    if (r.t >= begin && r.t <= end) {
      s.max_z_tracking_error = std::max(s.max_z_tracking_error, std::abs(r.p[kZ] - r.z_h));
    }
  }
  s.max_closure_gap = std::max(s.max_closure_gap, closure_gap(r.q, config_.robot).first);
  if (kill_time_ && rest_captured_) {
    const double off = (com - rest_com_).norm();
    s.max_post_kill_dev = std::max(s.max_post_kill_dev, off);
    if (off >= config_.criteria.settle_tolerance) last_outside_band_ = r.t;
  }

  if (dev > kFallXY || r.p[kZ] < kFallZ || std::abs(r.p[kRoll]) > kFallRollYaw ||
      std::abs(r.p[kYaw]) > kFallRollYaw || std::abs(r.p[kPitch]) > kFallPitch) {
    std::ostringstream os;
    os << "fell at tick " << r.tick << " (t = " << r.t << " s)";
    finish(os.str(), false, true);
  }
}

void Simulation::finish(const std::string& reason, bool aborted, bool fell) {
  summary_.reason = reason;
  summary_.aborted = aborted;
  summary_.fell = fell;
  finalize_summary();
}

void Simulation::finalize_summary() {
  if (finished_) return;
  summary_ = current_summary();
  finished_ = true;
}

RunSummary Simulation::current_summary() const {
  if (finished_) return summary_;
  RunSummary s = summary_;
  s.ticks = tick_;
  s.t_end = static_cast<double>(tick_) * config_.dt;
  s.z_tracked = s.max_z_tracking_error < config_.criteria.z_tracking_tolerance;
  s.killed = kill_time_.has_value();
  if (s.killed && last_disturbance_) {
    const double deadline = *last_disturbance_ + config_.criteria.settle_time;
    s.settle_time = last_outside_band_ ? *last_outside_band_ - *last_disturbance_ : 0.0;
    s.settled = !last_outside_band_ || *last_outside_band_ < deadline;
    // Still outside the band at the end of the run means it never settled.
    if (last_outside_band_ && s.t_end - *last_outside_band_ <= config_.dt * 1.5) s.settled = false;
  }
  if (s.aborted || s.fell) {
    s.verdict = Verdict::kUnstable;
  } else if (!s.settled) {
    s.verdict = Verdict::kUnstable;
    s.reason = "did not return within the settle band after the last disturbance";
  } else {
    s.verdict = Verdict::kStable;
  }
  return s;
}

std::string format_summary(const RunSummary& s) {
  std::string out;
  char line[200];
  auto add = [&](const char* label, double value, const char* unit) {
    std::snprintf(line, sizeof line, "%-34s %12.6g %s\n", label, value, unit);
    out += line;
  };
  auto check = [&](const char* label, bool ok) {
    std::snprintf(line, sizeof line, "%-34s %12s\n", label, ok ? "PASS" : "FAIL");
    out += line;
  };
  std::snprintf(line, sizeof line, "verdict: %s\n", verdict_name(s.verdict));
  out += line;
  if (!s.reason.empty()) out += "reason: " + s.reason + "\n";
  add("simulated time", s.t_end, "s");
  add("physics ticks", static_cast<double>(s.ticks), "");
  add("central ticks", static_cast<double>(s.central_ticks), "");
  add("max x/y COM deviation before push", s.max_xy_dev_before_push, "m");
  add("max x/y COM deviation (whole run)", s.max_xy_dev, "m");
  add("max |roll|", s.max_roll_deg, "deg");
  add("max |yaw|", s.max_yaw_deg, "deg");
  add("max |z_COM - z_h| while leading", s.max_z_tracking_error, "m");
  add("max COM offset after kill", s.max_post_kill_dev, "m");
  add("settle time after last push", s.settle_time, "s");
  add("max |S (p_ref - p_meas)|", s.max_open_loop_error, "");
  add("max |S F_closed|", s.max_open_loop_force, "");
  add("max closure gap", s.max_closure_gap, "m");
  add("ticks without Hessian term", static_cast<double>(s.hessian_dropped_ticks), "");
  add("IK failures (held output)", static_cast<double>(s.ik_failures), "");
  add("torque saturation events", static_cast<double>(s.saturation_events), "");
  add("wall time", s.wall_seconds, "s");
  check("x/y deviation before push", s.xy_ok());
  check("roll/yaw within limit", s.angles_ok());
  check("z tracks operator", s.z_tracked);
  if (s.killed) check("settles after kill/push", s.settled);
  return out;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(s.verdict);
  j["reason"] = s.reason;
  j["aborted"] = s.aborted;
  j["fell"] = s.fell;
  j["t_end"] = s.t_end;
  j["ticks"] = s.ticks;
  j["central_ticks"] = s.central_ticks;
  j["max_xy_dev_before_push"] = s.max_xy_dev_before_push;
  j["max_xy_dev"] = s.max_xy_dev;
  j["max_roll_deg"] = s.max_roll_deg;
  j["max_yaw_deg"] = s.max_yaw_deg;
  j["max_z_tracking_error"] = s.max_z_tracking_error;
  j["z_tracked"] = s.z_tracked;
  j["killed"] = s.killed;
  j["max_post_kill_dev"] = s.max_post_kill_dev;
  j["settled"] = s.settled;
  j["settle_time"] = s.settle_time;
  j["max_open_loop_error"] = s.max_open_loop_error;
  j["max_open_loop_force"] = s.max_open_loop_force;
  j["max_closure_gap"] = s.max_closure_gap;
  j["hessian_dropped_ticks"] = s.hessian_dropped_ticks;
  j["ik_failures"] = s.ik_failures;
  j["saturation_events"] = s.saturation_events;
  j["wall_seconds"] = s.wall_seconds;
  j["xy_ok"] = s.xy_ok();
  j["angles_ok"] = s.angles_ok();
  return j.dump(2);
}

RunSummary run_scenario(const ScenarioConfig& config, std::ostream* trace) {
  const auto start = std::chrono::steady_clock::now();
  Simulation sim(config);
  std::optional<TraceWriter> writer;
  if (trace != nullptr) {
    writer.emplace(*trace);
    sim.on_tick = [&](const TickRecord& r) { writer->write(r); };
  }
  while (sim.advance()) {
  }
  RunSummary s = sim.summary();
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

}  // namespace xrl
