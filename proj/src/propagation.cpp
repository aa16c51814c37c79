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

#include "cfmimo/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo {

void PropagationParams::validate() const
{
    if (!(carrier_mhz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    if (!(h_ap_m > 0.0) || !(h_ue_m > 0.0))
        throw std::invalid_argument("antenna heights must be positive");
    if (!(d0_m > 0.0) || !(d0_m < d1_m))
        throw std::invalid_argument("breakpoints must satisfy 0 < d0 < d1");
    if (!(shadowing_db >= 0.0))
        throw std::invalid_argument("shadowing std must be non-negative");
    if (!(log_distance_unit_m > 0.0))
        throw std::invalid_argument("log distance unit must be positive");
}

void RadioConfig::validate() const
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    if (!(ap_data_power_w > 0.0) || !(ap_pilot_power_w > 0.0) || !(ue_data_power_w > 0.0) ||
        !(ue_pilot_power_w > 0.0))
        throw std::invalid_argument("radiated powers must be positive");
}

double RadioConfig::noise_power_w() const { return noise_power(bandwidth_hz, noise_figure_db); }

namespace {

double normalized(double power_w, double gain_dbi, double noise_w)
{
    return power_w * std::pow(10.0, gain_dbi / 10.0) / noise_w;
}

}  // namespace

double RadioConfig::rho_d() const { return normalized(ap_data_power_w, antenna_gain_dbi, noise_power_w()); }
double RadioConfig::rho_dp() const { return normalized(ap_pilot_power_w, antenna_gain_dbi, noise_power_w()); }
double RadioConfig::rho_u() const { return normalized(ue_data_power_w, antenna_gain_dbi, noise_power_w()); }
double RadioConfig::rho_up() const { return normalized(ue_pilot_power_w, antenna_gain_dbi, noise_power_w()); }

double cost231_constant(const PropagationParams& p)
{
    if (!(p.carrier_mhz > 0.0) || !(p.h_ap_m > 0.0))
        throw std::invalid_argument("cost231_constant: frequency and AP height must be positive");
    const double lf = std::log10(p.carrier_mhz);
    return 46.3 + 33.9 * lf - (1.1 * lf - 0.7) * p.h_ue_m - 13.82 * std::log10(p.h_ap_m) +
           (1.56 * lf - 0.8);
}

double path_loss_db(double distance_m, double loss_constant_db, const PropagationParams& p)
{
    if (!(distance_m >= 0.0))
        throw std::invalid_argument("path_loss_db: distance must be non-negative");
    const double unit = p.log_distance_unit_m;
    const double lg_d1 = std::log10(p.d1_m / unit);
    if (distance_m > p.d1_m)
        return -loss_constant_db - 35.0 * std::log10(distance_m / unit);
    if (distance_m > p.d0_m)
        return -loss_constant_db - 15.0 * lg_d1 - 20.0 * std::log10(distance_m / unit);
    return -loss_constant_db - 15.0 * lg_d1 - 20.0 * std::log10(p.d0_m / unit);
}

Eigen::MatrixXd large_scale_fading(const Deployment& dep, const PropagationParams& params,
                                   double loss_constant_db, Rng& rng)
{
    params.validate();
    const Eigen::MatrixXd dist = distance_matrix(dep);
    std::normal_distribution<double> z(0.0, 1.0);

    Eigen::MatrixXd beta(dist.rows(), dist.cols());
    // row-major draw order: AP m, then UE k
    for (Eigen::Index m = 0; m < dist.rows(); ++m)
        for (Eigen::Index k = 0; k < dist.cols(); ++k) {
            const double pl_db = path_loss_db(dist(m, k), loss_constant_db, params);
            const double shadow_db = params.shadowing_db > 0.0 ? params.shadowing_db * z(rng) : 0.0;
            beta(m, k) = std::pow(10.0, (pl_db + shadow_db) / 10.0);
        }
    return beta;
}

double noise_power(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be positive");
    return bandwidth_hz * kBoltzmann * kNoiseTemperature * std::pow(10.0, noise_figure_db / 10.0);
}

Eigen::MatrixXd estimate_quality(const Eigen::MatrixXd& beta, double tau_up, double rho_up)
{
    if (!(tau_up >= 1.0))
        throw std::invalid_argument("estimate_quality: tau_up must be >= 1");
    if (!(rho_up > 0.0))
        throw std::invalid_argument("estimate_quality: rho_up must be positive");
    const double c = tau_up * rho_up;
    return beta.unaryExpr([c](double b) { return c * b * b / (c * b + 1.0); });
}

Eigen::MatrixXcd draw_small_scale(const Eigen::MatrixXd& beta, Rng& rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd g(beta.rows(), beta.cols());
    for (Eigen::Index m = 0; m < beta.rows(); ++m)
        for (Eigen::Index k = 0; k < beta.cols(); ++k) {
            const double re = n(rng);
            const double im = n(rng);
            g(m, k) = std::sqrt(beta(m, k)) * std::complex<double>(re, im);
        }
    return g;
}

}  // namespace cfmimo
