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

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfmimo {

/// Downlink power-control coefficients eta (M x K). A valid set satisfies
/// eta >= 0 and sum_k eta_mk gamma_mk <= 1 at every AP.
struct PowerCoefficients {
    Eigen::MatrixXd eta;
};

struct MaxMinSettings {
    double bisection_tol = 1e-2;   // relative gap (t_hi - t_lo) / t_hi
    int max_bisection_iters = 40;
    double feasibility_tol = 1e-6;

    void validate() const;
};

struct MaxMinSolution {
    PowerCoefficients power;
    double target_lo = 0.0;  // certified achievable min-SINR
    double target_hi = 0.0;  // proven upper bound on the optimum
    int bisection_iters = 0;
    int newton_steps = 0;
};

/// Raised when the max-min search cannot certify a result. Carries the last
/// certified-feasible coefficients so callers can report partial output.
class OptimizationFailure : public std::runtime_error {
public:
    OptimizationFailure(const std::string& what, PowerCoefficients last_feasible, double achieved)
        : std::runtime_error(what), last_feasible_(std::move(last_feasible)), achieved_(achieved)
    {
    }

    const PowerCoefficients& last_feasible() const { return last_feasible_; }
    double achieved_min_sinr() const { return achieved_; }

private:
    PowerCoefficients last_feasible_;
    double achieved_;
};

struct PowerValidation {
    bool ok = true;
    double worst = 0.0;  // max_m sum_k eta_mk gamma_mk
};

/// Full power at every AP, split equally: eta_mk = 1 / sum_k' gamma_mk'.
/// APs whose gamma row is all zero transmit nothing.
PowerCoefficients uniform_power(const Eigen::MatrixXd& gamma);

/// Statistical-CSI SINR per UE:
///   rho (sum_m sqrt(eta_mk) gamma_mk)^2 / (rho sum_k' varsigma_kk' + 1)
/// with varsigma_kk' = sum_m eta_mk' beta_mk gamma_mk'.
Eigen::VectorXd sinr_scsi(const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                          const Eigen::MatrixXd& gamma, double rho_d);

/// Max-min fairness power control over the statistical-CSI SINR.
///
/// Bisects on the common SINR target t. Each target is tested with a
/// log-barrier interior-point method on the second-order cone system in the
/// amplitude variables zeta_mk = sqrt(eta_mk). The returned coefficients
/// are rebalanced so every UE sits at the certified target t_lo.
///
/// Throws OptimizationFailure if the bisection does not reach the relative
/// tolerance within max_bisection_iters or the inner solver stalls.
MaxMinSolution solve_maxmin(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma, double rho_d,
                            const MaxMinSettings& settings = {});

inline PowerCoefficients maxmin_power(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma,
                                      double rho_d, const MaxMinSettings& settings = {})
{
    return solve_maxmin(beta, gamma, rho_d, settings).power;
}

/// Per-AP constraint check: ok iff every sum_k eta_mk gamma_mk <= 1 + tol and eta >= 0.
PowerValidation validate_power(const PowerCoefficients& power, const Eigen::MatrixXd& gamma,
                               double feasibility_tol = 1e-6);

}  // namespace cfmimo
