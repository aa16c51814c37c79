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

#include "cfmimo/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "socp_feasibility.hpp"

namespace cfmimo {

namespace {

void check_shapes(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma)
{
    if (beta.rows() != gamma.rows() || beta.cols() != gamma.cols())
        throw std::invalid_argument("beta and gamma must have the same shape");
}

// Per-UE min over k of two valid upper bounds on any achievable SINR:
//   rho (sum_m sqrt(gamma_mk))^2   (amplitudes at most one, no interference)
//   sum_m gamma_mk / beta_mk       (Cauchy-Schwarz against the self term)
double sinr_upper_bound(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma, double rho_d)
{
    double bound = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < gamma.cols(); ++k) {
        const double coherent = gamma.col(k).cwiseSqrt().sum();
        double ratio = 0.0;
        for (Eigen::Index m = 0; m < gamma.rows(); ++m)
            if (beta(m, k) > 0.0)
                ratio += gamma(m, k) / beta(m, k);
        bound = std::min(bound, std::min(rho_d * coherent * coherent, ratio));
    }
    return bound;
}

PowerCoefficients from_amplitudes(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gamma)
{
    PowerCoefficients p;
    p.eta = Eigen::MatrixXd::Zero(gamma.rows(), gamma.cols());
    for (Eigen::Index m = 0; m < gamma.rows(); ++m)
        for (Eigen::Index k = 0; k < gamma.cols(); ++k)
            if (gamma(m, k) > 0.0)
                p.eta(m, k) = x(m, k) * x(m, k) / gamma(m, k);
    return p;
}

// Scales UE columns down until every SINR sits at `target`. Lowering one UE's
// power only reduces interference to the others, so the sweep is monotone.
void balance_to_target(PowerCoefficients& power, const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma,
                       double rho_d, double target, double rel_tol)
{
    const Eigen::Index M = gamma.rows();
    const Eigen::Index K = gamma.cols();
    Eigen::MatrixXd& eta = power.eta;
    Eigen::VectorXd load = (eta.cwiseProduct(gamma)).rowwise().sum();

    for (int sweep = 0; sweep < 2000; ++sweep) {
        double worst_excess = 0.0;
        for (Eigen::Index k = 0; k < K; ++k) {
            double amp = 0.0;
            double own = 0.0;
            double other = 0.0;
            for (Eigen::Index m = 0; m < M; ++m) {
                const double eg = eta(m, k) * gamma(m, k);
                amp += std::sqrt(eta(m, k)) * gamma(m, k);
                own += beta(m, k) * eg;
                other += beta(m, k) * (load[m] - eg);
            }
            const double signal = rho_d * amp * amp;
            const double fixed = rho_d * other + 1.0;
            const double self = rho_d * own;
            const double sinr = signal / (fixed + self);
            worst_excess = std::max(worst_excess, sinr / target - 1.0);
            if (sinr <= target || signal - target * self <= 0.0)
                continue;
            // signal c / (fixed + self c) = target
            const double c = std::min(1.0, target * fixed / (signal - target * self));
            for (Eigen::Index m = 0; m < M; ++m) {
                const double before = eta(m, k) * gamma(m, k);
                eta(m, k) *= c;
                load[m] += eta(m, k) * gamma(m, k) - before;
            }
        }
        if (worst_excess <= rel_tol)
            break;
    }
}

}  // namespace

void MaxMinSettings::validate() const
{
    if (!(bisection_tol > 0.0) || !(feasibility_tol > 0.0))
        throw std::invalid_argument("max-min tolerances must be positive");
    if (max_bisection_iters < 1)
        throw std::invalid_argument("max_bisection_iters must be >= 1");
}

PowerCoefficients uniform_power(const Eigen::MatrixXd& gamma)
{
    if ((gamma.array() < 0.0).any())
        throw std::invalid_argument("uniform_power: gamma must be non-negative");
    PowerCoefficients p;
    p.eta = Eigen::MatrixXd::Zero(gamma.rows(), gamma.cols());
    for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
        const double total = gamma.row(m).sum();
        if (total > 0.0)
            p.eta.row(m).setConstant(1.0 / total);
    }
    return p;
}

Eigen::VectorXd sinr_scsi(const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                          const Eigen::MatrixXd& gamma, double rho_d)
{
    check_shapes(beta, gamma);
    if (power.eta.rows() != gamma.rows() || power.eta.cols() != gamma.cols())
        throw std::invalid_argument("sinr_scsi: eta shape mismatch");

    // sum_k' varsigma_kk' = sum_m beta_mk * (sum_k' eta_mk' gamma_mk')
    const Eigen::VectorXd load = power.eta.cwiseProduct(gamma).rowwise().sum();
    const Eigen::VectorXd interference = beta.transpose() * load;
    const Eigen::VectorXd amp = (power.eta.cwiseSqrt().cwiseProduct(gamma)).colwise().sum().transpose();
    return (rho_d * amp.array().square() / (rho_d * interference.array() + 1.0)).matrix();
}

PowerValidation validate_power(const PowerCoefficients& power, const Eigen::MatrixXd& gamma,
                               double feasibility_tol)
{
    if (power.eta.rows() != gamma.rows() || power.eta.cols() != gamma.cols())
        throw std::invalid_argument("validate_power: eta shape mismatch");
    PowerValidation v;
    v.worst = power.eta.size() ? power.eta.cwiseProduct(gamma).rowwise().sum().maxCoeff() : 0.0;
    v.ok = v.worst <= 1.0 + feasibility_tol && (power.eta.array() >= 0.0).all();
    return v;
}

MaxMinSolution solve_maxmin(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma, double rho_d,
                            const MaxMinSettings& settings)
{
    check_shapes(beta, gamma);
    settings.validate();
    if (gamma.cols() < 1 || gamma.rows() < 1)
        throw std::invalid_argument("solve_maxmin: need at least one AP and one UE");
    if (!(rho_d > 0.0))
        throw std::invalid_argument("solve_maxmin: rho_d must be positive");
    if ((beta.array() < 0.0).any() || (gamma.array() < 0.0).any())
        throw std::invalid_argument("solve_maxmin: beta and gamma must be non-negative");

    MaxMinSolution sol;
    const PowerCoefficients start = uniform_power(gamma);
    Eigen::MatrixXd certified = start.eta.cwiseProduct(gamma).cwiseSqrt();
    sol.target_lo = sinr_scsi(start, beta, gamma, rho_d).minCoeff();
    sol.target_hi = std::max(sinr_upper_bound(beta, gamma, rho_d), sol.target_lo);

    if (!(sol.target_lo > 0.0)) {
        // some UE is unreachable; every target above zero is infeasible
        sol.power = start;
        sol.target_hi = 0.0;
        return sol;
    }

    detail::ConeProblem problem{(rho_d * gamma).cwiseSqrt(), rho_d * beta};

    while ((sol.target_hi - sol.target_lo) / sol.target_hi > settings.bisection_tol) {
        if (sol.bisection_iters >= settings.max_bisection_iters)
            throw OptimizationFailure("max-min bisection did not reach tolerance within " +
                                          std::to_string(settings.max_bisection_iters) + " iterations",
                                      from_amplitudes(certified, gamma), sol.target_lo);
        ++sol.bisection_iters;

        const double target = std::sqrt(sol.target_lo * sol.target_hi);
        const auto res = detail::test_target(problem, target, 0.95 * certified);
        sol.newton_steps += res.newton_steps;

        switch (res.verdict) {
        case detail::Verdict::feasible: {
            const Eigen::MatrixXd x = res.x.cwiseAbs();
            const PowerCoefficients candidate = from_amplitudes(x, gamma);
            const double achieved = sinr_scsi(candidate, beta, gamma, rho_d).minCoeff();
            const auto check = validate_power(candidate, gamma, settings.feasibility_tol);
            if (!check.ok || achieved < target * (1.0 - 1e-9))
                throw OptimizationFailure("max-min feasibility step returned an invalid point",
                                          from_amplitudes(certified, gamma), sol.target_lo);
            certified = x;
            sol.target_lo = achieved;
            sol.target_hi = std::max(sol.target_hi, achieved);
            break;
        }
        case detail::Verdict::infeasible:
            sol.target_hi = target;
            break;
        case detail::Verdict::stalled:
            throw OptimizationFailure("max-min feasibility solver stalled at target " + std::to_string(target),
                                      from_amplitudes(certified, gamma), sol.target_lo);
        }
    }

    sol.power = from_amplitudes(certified, gamma);
    balance_to_target(sol.power, beta, gamma, rho_d, sol.target_lo, 1e-3 * settings.bisection_tol);
    return sol;
}

}  // namespace cfmimo
