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

#include "cfmimo/geometry.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kNoiseTemperature = 290.0;   // K

/// Three-slope path loss on top of the Hata-COST231 constant.
struct PropagationParams {
    double carrier_mhz = 2000.0;
    double h_ap_m = 5.0;
    double h_ue_m = 1.65;
    double d0_m = 10.0;
    double d1_m = 50.0;
    double shadowing_db = 8.0;
    // Distance unit inside the log10 terms. Hata-COST231 is calibrated in km;
    // set to 1.0 to evaluate the logs directly in meters.
    double log_distance_unit_m = 1000.0;

    void validate() const;
};

struct RadioConfig {
    double bandwidth_hz = 20e6;
    double noise_figure_db = 9.0;
    double ap_data_power_w = 0.2;
    double ap_pilot_power_w = 0.2;
    double ue_data_power_w = 0.1;
    double ue_pilot_power_w = 0.1;
    double antenna_gain_dbi = 0.0;

    void validate() const;

    double noise_power_w() const;
    double rho_d() const;   // DL data
    double rho_dp() const;  // DL pilot
    double rho_u() const;   // UL data
    double rho_up() const;  // UL pilot
};

/// Linear-scale large-scale quantities, both M x K.
struct LargeScaleState {
    Eigen::MatrixXd beta;   // path gain incl. shadowing
    Eigen::MatrixXd gamma;  // variance of the MMSE uplink estimate, 0 <= gamma <= beta
};

/// Hata-COST231 constant L in dB.
double cost231_constant(const PropagationParams& params);

/// Three-slope path loss in dB (a negative number) at distance `distance_m`.
/// Exponent 3.5 beyond d1, 2 between d0 and d1, flat below d0.
double path_loss_db(double distance_m, double loss_constant_db, const PropagationParams& params);

/// beta_mk = 10^(PL_mk/10) * 10^(sigma_sh z_mk / 10), z i.i.d. N(0,1), torus distances.
Eigen::MatrixXd large_scale_fading(const Deployment& dep, const PropagationParams& params,
                                   double loss_constant_db, Rng& rng);

/// B * k_B * T0 * NF in watts.
double noise_power(double bandwidth_hz, double noise_figure_db);

/// gamma = tau_up rho_up beta^2 / (tau_up rho_up beta + 1), elementwise.
Eigen::MatrixXd estimate_quality(const Eigen::MatrixXd& beta, double tau_up, double rho_up);

/// g_mk = sqrt(beta_mk) h_mk with h_mk ~ CN(0, 1) i.i.d.
Eigen::MatrixXcd draw_small_scale(const Eigen::MatrixXd& beta, Rng& rng);

}  // namespace cfmimo
