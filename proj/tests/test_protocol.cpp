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


#include <doctest.h>

#include <random>

#include <json.hpp>

#include "xrl/protocol.hpp"

using namespace xrl;

TEST_CASE("telemetry round-trips") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  TelemetryFrame f;
  f.frame = 123456789;
  f.t = 12.345678901234;
  for (int i = 0; i < 6; ++i) {
    f.p[i] = d(rng);
    f.p_ref[i] = d(rng);
    f.f_op[i] = d(rng);
  }
  for (int i = 0; i < kNumJoints; ++i) {
    f.q[i] = d(rng);
    f.tau[i] = d(rng);
  }
  f.link_alive = false;
  f.z_h = 0.7;
  f.theta_h = -0.1;
  f.assist = 150.0;
  f.fell = true;
  f.hessian_dropped = true;
  f.verdict = "UNSTABLE";
  const TelemetryFrame g = decode_telemetry(encode_telemetry(f));
  CHECK(g.frame == f.frame);
  CHECK(std::abs(g.t - f.t) <= 1e-9);
  CHECK((g.p - f.p).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((g.p_ref - f.p_ref).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((g.q - f.q).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((g.tau - f.tau).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((g.f_op - f.f_op).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK_FALSE(g.link_alive);
  CHECK(g.fell);
  CHECK(g.hessian_dropped);
  CHECK_FALSE(g.paused);
  CHECK(g.verdict == "UNSTABLE");
  CHECK(g.assist == 150.0);
}

TEST_CASE("telemetry carries the schema version") {
  const auto j = nlohmann::json::parse(encode_telemetry({}));
  CHECK(j.at("v") == 1);
  CHECK(j.at("type") == "telemetry");
  CHECK(j.at("q").size() == 12);
  auto bad = j;
  bad["v"] = 2;
  CHECK_THROWS_AS(decode_telemetry(bad.dump()), ValidationError);
  bad = j;
  bad["p"] = {1, 2, 3};
  CHECK_THROWS_AS(decode_telemetry(bad.dump()), ValidationError);
  CHECK_THROWS_AS(decode_telemetry("not json"), ValidationError);
}

TEST_CASE("commands round-trip") {
  for (CommandKind k : {CommandKind::kSetOperatorZ, CommandKind::kKillComms, CommandKind::kReset,
                        CommandKind::kPushX, CommandKind::kSetAssistForce}) {
    CommandMessage c{k, command_range(k) ? command_range(k)->lo : 0.0, "console-1", 42};
    const CommandMessage d = decode_command(encode_command(c));
    CHECK(d.kind == c.kind);
    CHECK(d.value == c.value);
    CHECK(d.client == c.client);
    CHECK(d.seq == c.seq);
  }
}

TEST_CASE("out-of-range operator height is rejected") {
  std::string client;
  std::uint64_t seq = 0;
  const std::string text = encode_command({CommandKind::kSetOperatorZ, 5.0, "ui", 9});
  try {
    decode_command(text, &client, &seq);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("outside") != std::string::npos);
  }
  CHECK(client == "ui");
  CHECK(seq == 9);
  CHECK_NOTHROW(decode_command(encode_command({CommandKind::kSetOperatorZ, 0.55, "ui", 10})));
}

TEST_CASE("command ranges") {
  CHECK(command_range(CommandKind::kSetOperatorZ)->lo == 0.3);
  CHECK(command_range(CommandKind::kSetOperatorZ)->hi == 1.0);
  CHECK_FALSE(command_range(CommandKind::kPause).has_value());
  CHECK_THROWS_AS(decode_command(encode_command({CommandKind::kSetOperatorTheta, 0.7, "a", 1})),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(encode_command({CommandKind::kSetAssistForce, -1, "a", 1})),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(encode_command({CommandKind::kPushX, 101, "a", 1})),
                  ValidationError);
}

TEST_CASE("malformed commands") {
  CHECK_THROWS_AS(decode_command(R"({"v":1,"type":"command","kind":"fly","client":"a","seq":1})"),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(R"({"v":1,"type":"command","kind":"pause","seq":1})"),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(R"({"v":1,"type":"command","kind":"pause","client":"a","seq":-1})"),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(R"({"v":1,"type":"ack","kind":"pause","client":"a","seq":1})"),
                  ValidationError);
  CHECK_THROWS_AS(decode_command(R"({"type":"command","kind":"pause","client":"a","seq":1})"),
                  ValidationError);
  CHECK_THROWS_AS(
      decode_command(R"({"v":1,"type":"command","kind":"set_operator_z","client":"a","seq":1})"),
      ValidationError);
  CHECK_THROWS_AS(decode_command("[1,2]"), ValidationError);
  CHECK_NOTHROW(decode_command(R"({"v":1,"type":"command","kind":"pause","client":"a","seq":1})"));
}

TEST_CASE("acks and heartbeats") {
  const Ack a = decode_ack(encode_ack({"ui", 3, false, "nope"}));
  CHECK(a.client == "ui");
  CHECK(a.seq == 3);
  CHECK_FALSE(a.ok);
  CHECK(a.error == "nope");
  CHECK(decode_ack(encode_ack({"ui", 4, true, {}})).ok);
  const auto h = nlohmann::json::parse(encode_heartbeat(1.5, true, false));
  CHECK(h.at("type") == "heartbeat");
  CHECK(h.at("paused") == true);
  CHECK(h.at("v") == 1);
}

TEST_CASE("sequence numbers must increase per client") {
  SequenceTracker t;
  CHECK(t.accept("a", 1));
  CHECK(t.accept("a", 2));
  CHECK_FALSE(t.accept("a", 2));
  CHECK_FALSE(t.accept("a", 1));
  CHECK(t.accept("b", 1));
  CHECK(t.accept("a", 10));
  t.forget("a");
  CHECK(t.accept("a", 1));
}
