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

#include "helpers.hpp"
#include "xrl/differential.hpp"
#include "xrl/dynamics.hpp"
#include "xrl/model.hpp"

using namespace xrl;

TEST_CASE("Jacobian agrees across steps and stencils") {
  const RobotParams p;
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const JointVector q = testing::random_state(rng, p).q;
    const TaskJacobian coarse = jacobian(q, p, {1e-4, Stencil::kCentral});
    const TaskJacobian fine = jacobian(q, p, {1e-6, Stencil::kCentral});
    const TaskJacobian ref = jacobian(q, p);
    CHECK((coarse - fine).norm() <= 1e-4 * fine.norm());
    CHECK((ref - coarse).norm() <= 1e-6 * ref.norm());
  }
}

TEST_CASE("Jacobian restricted to the manifold matches motion along u") {
  // d p / d u through the closed chain equals J G, and p moves with u.
  const RobotParams p;
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const SimState s = testing::random_state(rng, p);
    const Eigen::Matrix<double, 6, 6> jg = jacobian(s.q, p) * closure_jacobian(s.q, s.u, p);
    Mat6 fd;
    const double h = 1e-5;
    for (int k = 0; k < 6; ++k) {
      Vec6 du = Vec6::Zero();
      du[k] = h;
      fd.col(k) = (task_pose(leg_ik(s.u + du, s.q, p), p) - task_pose(leg_ik(s.u - du, s.q, p), p)) /
                  (2 * h);
    }
    CHECK((jg - fd).norm() < 1e-7 * fd.norm());
  }
}

TEST_CASE("straight legs: vertical force loads no sagittal ankle or knee joint") {
  const RobotParams p;
  const TaskJacobian jac = jacobian(JointVector::Zero(), p);
  Wrench f = Wrench::Zero();
  f[kZ] = 1.0;
  const JointVector tau = jac.transpose() * f;
  for (int j : {kAnkleThetaR, kKneeThetaR, kAnkleThetaL, kKneeThetaL}) CHECK(std::abs(tau[j]) < 1e-9);
  // Sagittal ankle joints move the COM forward.
  CHECK(std::abs(jac(kX, kAnkleThetaR)) > 0.1);
  CHECK(std::abs(jac(kX, kAnkleThetaL)) > 0.1);
}

TEST_CASE("Hessian slices are symmetric and match a wider difference") {
  const RobotParams p;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const JointVector q = testing::random_state(rng, p).q;
    const TaskHessian h = hessian(q, p);
    const TaskHessian wide = hessian(q, p, 1e-4);
    for (int i = 0; i < kTaskDim; ++i) {
      CHECK((h.slices[i] - h.slices[i].transpose()).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((h.slices[i] - wide.slices[i]).norm() < 1e-5 * std::max(1.0, h.slices[i].norm()));
    }
  }
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
  const RobotParams p;
  std::mt19937_64 rng(24);
  const JointVector q = testing::random_state(rng, p).q;
  CHECK(jacobian(q, p) == serial::jacobian(q, p));
  const TaskHessian a = hessian(q, p), b = serial::hessian(q, p);
  for (int i = 0; i < kTaskDim; ++i) CHECK(a.slices[i] == b.slices[i]);
  CHECK(kernel_threads() >= 1);
}

TEST_CASE("Hessian contraction is linear") {
  const RobotParams p;
  const JointVector q = balanced_state(p, 0.8).q;
  const TaskHessian h = hessian(q, p);
  CHECK(h.contract(Vec6::Zero()) == JointMatrix::Zero());
  Vec6 a, b;
  a << 1, -2, 3, 0.5, 0, 1;
  b << 0, 4, 1, -1, 2, 0;
  CHECK((h.contract(a + 2 * b) - h.contract(a) - 2 * h.contract(b)).norm() < 1e-9);
}

TEST_CASE("nullspace projector identities") {
  const RobotParams p;
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const TaskJacobian jac = jacobian(testing::random_state(rng, p).q, p);
    const JointMatrix n = nullspace_projector(jac);
    CHECK((jac * n).norm() <= 1e-8 * jac.norm());
    CHECK((n * n - n).norm() <= 1e-8);
    CHECK((n - n.transpose()).norm() <= 1e-8);
  }
}
