// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

namespace cfmimo::detail {

// Feasibility of a common SINR target t for the statistical-CSI downlink, in
// per-AP-normalized amplitudes x_mk = sqrt(gamma_mk) zeta_mk:
//
//   sum_m a_mk x_mk >= sqrt(t) * || (sqrt(b2_mk) r_m)_m , 1 ||    for every UE k
//   || x_m ||_2 <= r_m <= 1                                         for every AP m
//
// with a = sqrt(rho gamma) and b2 = rho beta. The auxiliary r_m bounds the
// transmit amplitude of AP m; it is tight at any solution that matters.
struct ConeProblem {
    Eigen::MatrixXd a;   // M x K
    Eigen::MatrixXd b2;  // M x K
};

enum class Verdict { feasible, infeasible, stalled };

struct FeasibilityResult {
    Verdict verdict = Verdict::stalled;
    Eigen::MatrixXd x;  // M x K, meaningful when feasible
    int newton_steps = 0;
};

// Barrier method on: maximize s subject to the cone system with the signal
// side shifted by -s. Reports feasible as soon as an iterate has s > 0 and
// infeasible once the central-path bound s + nu/mu drops below zero.
// `start` must satisfy ||start_m|| < 1 for every AP.
FeasibilityResult test_target(const ConeProblem& problem, double target, const Eigen::MatrixXd& start);

}  // namespace cfmimo::detail
