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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/geometry.hpp"
#include "cfmimo/pilot_assignment.hpp"
#include "cfmimo/power_control.hpp"
#include "cfmimo/propagation.hpp"

namespace cfmimo {

enum class PowerMode { uniform, maxmin };

std::string to_string(PowerMode m);
PowerMode parse_power_mode(const std::string& name);

/// One simulated network. The defaults are the reference scenario: 200 APs
/// and 50 UEs on 1 km^2, 200-symbol frames, 2 GHz, 20 MHz.
struct ExperimentConfig {
    int M = 200;
    int K = 50;
    double side_m = 1000.0;
    int tau = 200;
    int tau_up = 50;
    int tau_dp = 25;
    // Orthogonal uplink pilots need at least one symbol per UE.
    bool orthogonal_ul_pilots = true;
    RadioConfig radio;
    PropagationParams propagation;
    UtilityConfig utility;
    PowerMode power_mode = PowerMode::maxmin;
    MaxMinSettings maxmin;
    int quadrature_order = 24;
    int realizations = 200;
    std::uint64_t seed = 1;
    int jobs = 1;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
    /// Only the deployment and propagation part; enough for channel hardening.
    void validate_geometry() const;

    FrameConfig frame(Scheme s) const;
};

/// Large-scale state and power control of one realization.
struct NetworkState {
    Deployment deployment;
    LargeScaleState large_scale;
    PowerCoefficients power;
    double min_sinr = 0.0;  // statistical-CSI min-SINR under `power`
};

/// Deterministic in (cfg.seed, index).
NetworkState draw_network(const ExperimentConfig& cfg, int index);

inline constexpr std::array<Scheme, 3> kSchemes = {Scheme::scsi, Scheme::icsi, Scheme::ubpa};

struct RealizationResult {
    int index = 0;
    std::array<RateReport, 3> reports;  // ordered as kSchemes
    Eigen::VectorXd chd;

    const RateReport& report(Scheme s) const { return reports[static_cast<std::size_t>(s)]; }
};

RealizationResult evaluate_network(const ExperimentConfig& cfg, int index, const NetworkState& net);
RealizationResult run_realization(const ExperimentConfig& cfg, int index);

/// Empirical CDF as sorted (value, F(value)) pairs with F = rank / n.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

/// Percentile with linear interpolation between order statistics, p in [0, 100].
double percentile(std::vector<double> samples, double p);

struct StatSummary {
    std::vector<double> samples;  // in realization order
    double mean = 0.0;
    double p5 = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
};

/// Throws std::invalid_argument on an empty sample set.
StatSummary summarize(std::vector<double> samples);

struct SchemeSummary {
    Scheme scheme = Scheme::scsi;
    StatSummary sum_throughput;   // bits/s, one sample per realization
    double avg_ue_throughput = 0.0;  // mean over realizations of sum / K
};

struct ExperimentResult {
    std::vector<RealizationResult> realizations;
    std::array<SchemeSummary, 3> schemes;  // ordered as kSchemes

    const SchemeSummary& summary(Scheme s) const { return schemes[static_cast<std::size_t>(s)]; }
};

/// Runs cfg.realizations independent realizations on up to cfg.jobs threads.
/// The result does not depend on the number of threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct ChdStudy {
    std::vector<double> samples;  // realization-major, then UE
    StatSummary summary;
    double collocated_reference = 0.0;  // 1 - 1/M
};

/// Channel hardening over cfg.realizations deployments; no power control involved.
ChdStudy chd_study(const ExperimentConfig& cfg);

struct MetricComparison {
    std::vector<UtilityVariant> variants;
    std::vector<StatSummary> ubpa_sum_throughput;  // one per variant
    std::vector<double> avg_ue_throughput;
};

/// ubPA sum throughput for each variant on shared realizations, so every
/// variant sees the same beta, gamma and eta.
MetricComparison compare_metrics(const ExperimentConfig& cfg, const std::vector<UtilityVariant>& variants);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace cfmimo
