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

#include "cfmimo/power_control.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

/// TDD frame of `tau` symbols: uplink pilots, downlink pilots, then equal
/// downlink and uplink data parts.
struct FrameConfig {
    int tau = 200;
    int tau_up = 50;
    int tau_dp = 0;

    int tau_p() const { return tau_up + tau_dp; }
    double tau_data() const { return 0.5 * (tau - tau_p()); }  // per direction

    /// Requires tau > 0, non-negative pilot lengths and tau_p <= tau.
    void validate() const;
};

/// varsigma(k, k') = sum_m eta_mk' beta_mk gamma_mk', K x K.
struct InterferenceTerms {
    Eigen::MatrixXd varsigma;
};

/// Mean and variance of the downlink estimate of the effective gain a_kk,
/// modelled as circularly-symmetric complex Gaussian around a real mean.
struct AhatStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

InterferenceTerms interference_terms(const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                                     const Eigen::MatrixXd& gamma);

/// log2(1 + SINR_k) with the statistical-CSI SINR.
Eigen::VectorXd rate_scsi(const PowerCoefficients& power, const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma,
                          double rho_d);

/// m_k = sum_m sqrt(eta_mk) gamma_mk, sigma_k^2 = c varsigma_kk^2 / (c varsigma_kk + 1), c = tau_dp rho_dp.
AhatStats ahat_stats(const PowerCoefficients& power, const Eigen::MatrixXd& gamma, const Eigen::VectorXd& varsigma_kk,
                     double tau_dp, double rho_dp);

/// Denominator of the rate with side information:
///   rho_d varsigma_kk / (c varsigma_kk + 1) + rho_d sum_{k' != k} varsigma_kk' + 1.
Eigen::VectorXd icsi_denominator(const InterferenceTerms& terms, double rho_d, double tau_dp, double rho_dp);

/// E{ log2(1 + rho_d |ahat|^2 / D_k) } by 2-D Gauss-Hermite quadrature with
/// `order` nodes per axis. Throws std::invalid_argument for order < 2.
Eigen::VectorXd rate_icsi(const AhatStats& ahat, const InterferenceTerms& terms, double rho_d, double tau_dp,
                          double rho_dp, int order = 24);

/// Monte-Carlo estimate of the same expectation. Each draw samples a_kk
/// around its mean with variance varsigma_kk, adds unit pilot noise and
/// forms the linear MMSE estimate.
Eigen::VectorXd rate_icsi_mc(const AhatStats& ahat, const InterferenceTerms& terms, double rho_d, double tau_dp,
                             double rho_dp, int draws, Rng& rng);

/// ChD_k = 1 - sum_m beta_mk^2 / (sum_m beta_mk)^2 for i.i.d. Rayleigh fading.
/// Throws std::invalid_argument on an all-zero or negative column.
Eigen::VectorXd channel_hardening_degree(const Eigen::MatrixXd& beta);

/// T_k = (B / 2) (1 - tau_p / tau) R_k in bits/s.
Eigen::VectorXd net_throughput(const Eigen::VectorXd& rate, const FrameConfig& frame, double bandwidth_hz);

}  // namespace cfmimo
