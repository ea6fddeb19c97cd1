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

#include "xrl/differential.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "xrl/model.hpp"

namespace xrl {

namespace {

Vec6 jacobian_column(const JointVector& q, const RobotParams& params, int j, DiffOptions d) {
  auto at = [&](double offset) {
    JointVector x = q;
    x[j] += offset;
    return task_pose(x, params);
  };
  const double h = d.step;
  if (d.stencil == Stencil::kCentral) {
    return (at(h) - at(-h)) / (2.0 * h);
  }
  return (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

void hessian_column(const JointVector& q, const RobotParams& params, int k, double h,
                    DiffOptions inner, TaskHessian& out) {
  JointVector plus = q, minus = q;
  plus[k] += h;
  minus[k] -= h;
  const TaskJacobian diff =
      (serial::jacobian(plus, params, inner) - serial::jacobian(minus, params, inner)) / (2.0 * h);
  // slices[i](j, k) = d/dq_k (dp_i/dq_j)
  for (int i = 0; i < kTaskDim; ++i) out.slices[i].col(k) = diff.row(i).transpose();
}

}  // namespace

namespace serial {

TaskJacobian jacobian(const JointVector& q, const RobotParams& params, DiffOptions diff) {
  TaskJacobian jac;
  for (int j = 0; j < kNumJoints; ++j) jac.col(j) = jacobian_column(q, params, j, diff);
  return jac;
}

TaskHessian hessian(const JointVector& q, const RobotParams& params, double step,
                    DiffOptions inner) {
  TaskHessian hes;
  for (int k = 0; k < kNumJoints; ++k) hessian_column(q, params, k, step, inner, hes);
  return hes;
}

}  // namespace serial

TaskJacobian jacobian(const JointVector& q, const RobotParams& params, DiffOptions diff) {
  TaskJacobian jac;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < kNumJoints; ++j) jac.col(j) = jacobian_column(q, params, j, diff);
  return jac;
}

TaskHessian hessian(const JointVector& q, const RobotParams& params, double step,
                    DiffOptions inner) {
  TaskHessian hes;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < kNumJoints; ++k) hessian_column(q, params, k, step, inner, hes);
  return hes;
}

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace xrl
