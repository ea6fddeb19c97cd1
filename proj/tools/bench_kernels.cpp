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


// Serial vs OpenMP finite-difference kernels, plus one full control tick
// for scale. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "xrl/controller.hpp"
#include "xrl/differential.hpp"
#include "xrl/scenario.hpp"

namespace {

using namespace xrl;

const RobotParams kParams;
const JointVector kQ = balanced_state(kParams, 0.80, 0.05).q;

void BM_JacobianSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::jacobian(kQ, kParams));
}
BENCHMARK(BM_JacobianSerial);

void BM_JacobianParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(kQ, kParams));
  state.counters["threads"] = kernel_threads();
}
BENCHMARK(BM_JacobianParallel);

void BM_HessianSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::hessian(kQ, kParams));
}
BENCHMARK(BM_HessianSerial);

void BM_HessianParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hessian(kQ, kParams));
  state.counters["threads"] = kernel_threads();
}
BENCHMARK(BM_HessianParallel);

void BM_CentralTick(benchmark::State& state) {
  ControllerConfig config;
  config.params = kParams;
  const SensorReading sensors{kQ, JointVector::Zero(), 0.0};
  std::uint64_t seq = 0;
  for (auto _ : state) benchmark::DoNotOptimize(central_tick(sensors, config, nullptr, ++seq));
}
BENCHMARK(BM_CentralTick);

}  // namespace

BENCHMARK_MAIN();
