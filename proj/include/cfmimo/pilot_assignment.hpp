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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/power_control.hpp"
#include "cfmimo/propagation.hpp"
#include "cfmimo/rates.hpp"

namespace cfmimo {

enum class UtilityVariant {
    chd_additive,
    chd_multiplicative,
    abs_rate,
    abs_throughput,
    rel_rate,
    rel_throughput,
    inverse_rate,
};

/// Short names used on the command line: chd_add, chd_mul, abs_rate, ...
std::string to_string(UtilityVariant v);
/// Throws std::invalid_argument for an unknown name.
UtilityVariant parse_utility_variant(const std::string& name);

/// Top-`budget` UEs, or every UE whose utility exceeds `threshold`.
/// A budget of -1 means "as many as there are downlink pilot symbols".
struct Selection {
    enum class Mode { budget, threshold };
    Mode mode = Mode::budget;
    int budget = -1;
    double threshold = 0.0;
};

struct UtilityConfig {
    UtilityVariant variant = UtilityVariant::abs_rate;
    double w = 0.0;
    // Per-UE priority and Doppler in [0, 1]; empty means alpha = 1 and D = 0.
    Eigen::VectorXd alpha;
    Eigen::VectorXd doppler;
    Selection selection;

    void validate(int num_ues) const;
};

/// Per-UE quantities a utility may consume. Throughput entries are only read
/// by the throughput variants and ChD only by the ChD variants.
struct UtilityInputs {
    Eigen::VectorXd chd;
    Eigen::VectorXd r_scsi;
    Eigen::VectorXd r_icsi;
    Eigen::VectorXd t_scsi;
    Eigen::VectorXd t_icsi;
};

struct PilotUtility {
    Eigen::VectorXd value;
    // Set where the variant divides by a zero rate; the value there is +inf.
    std::vector<bool> degenerate;
};

PilotUtility pilot_utility(const UtilityConfig& cfg, const UtilityInputs& in);

struct Assignment {
    std::vector<int> pilot_ues;  // in decreasing utility order

    bool contains(int k) const;
};

/// Ranks by decreasing utility with ties going to the lower UE index.
/// `capacity` is the number of orthogonal downlink pilots available.
Assignment select_ues(const Eigen::VectorXd& utility, const Selection& selection, int capacity);

enum class Scheme { scsi, icsi, ubpa };

std::string to_string(Scheme s);

/// scsi has no downlink pilots, icsi one per UE, ubpa between 1 and K.
struct SchemeSpec {
    Scheme kind = Scheme::scsi;
    FrameConfig frame;

    void validate(int num_ues) const;
};

struct RateReport {
    Scheme scheme = Scheme::scsi;
    int tau_p = 0;
    Eigen::VectorXd rate;        // bits/s/Hz
    Eigen::VectorXd throughput;  // bits/s
    // ubpa only
    Assignment assignment;
    PilotUtility utility;
};

struct SchemeOptions {
    int quadrature_order = 24;
};

/// Rates and net throughputs of one scheme on a fixed (eta, beta, gamma).
/// For ubpa every UE pays tau_p = tau_up + tau_dp, selected UEs get the
/// rate with side information and the rest the statistical-CSI rate.
RateReport evaluate_scheme(const SchemeSpec& spec, const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                           const Eigen::MatrixXd& gamma, const RadioConfig& radio, const UtilityConfig& cfg,
                           const SchemeOptions& options = {});

}  // namespace cfmimo
