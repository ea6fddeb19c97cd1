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

// Finite-difference Jacobian and Hessian of the task pose.
//
// Columns are independent, so the default entry points fan them out with
// OpenMP. The serial namespace holds the reference implementation the tests
// compare against; both produce bit-identical results because every column
// is evaluated by the same code on the same inputs.

#pragma once

#include "xrl/params.hpp"
#include "xrl/types.hpp"

namespace xrl {

enum class Stencil {
  kCentral,    // (f(x+h) - f(x-h)) / 2h
  kFivePoint,  // fourth-order central
};

struct DiffOptions {
  double step;
  Stencil stencil;
};

// Fourth-order stencil with a wide step: truncation and roundoff both sit
// near 1e-12, which keeps the Hessian's mixed partials symmetric well below
// 1e-6. A plain central difference at 1e-6 leaves ~1e-5 asymmetry.
inline constexpr DiffOptions kJacobianDiff{1e-3, Stencil::kFivePoint};
inline constexpr double kHessianStep = 1e-5;

TaskJacobian jacobian(const JointVector& q, const RobotParams& params,
                      DiffOptions diff = kJacobianDiff);

/// Central differences of the Jacobian with step `step`; the inner Jacobian
/// uses `inner`.
TaskHessian hessian(const JointVector& q, const RobotParams& params,
                    double step = kHessianStep, DiffOptions inner = kJacobianDiff);

namespace serial {

TaskJacobian jacobian(const JointVector& q, const RobotParams& params,
                      DiffOptions diff = kJacobianDiff);

TaskHessian hessian(const JointVector& q, const RobotParams& params,
                    double step = kHessianStep, DiffOptions inner = kJacobianDiff);

}  // namespace serial

/// Number of OpenMP threads the parallel kernels will use (1 when built
/// without OpenMP).
int kernel_threads();

}  // namespace xrl
