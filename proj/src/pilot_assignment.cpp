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

#include "cfmimo/pilot_assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct VariantName {
    UtilityVariant variant;
    const char* name;
};

constexpr VariantName kVariantNames[] = {
    {UtilityVariant::chd_additive, "chd_add"},
    {UtilityVariant::chd_multiplicative, "chd_mul"},
    {UtilityVariant::abs_rate, "abs_rate"},
    {UtilityVariant::abs_throughput, "abs_throughput"},
    {UtilityVariant::rel_rate, "rel_rate"},
    {UtilityVariant::rel_throughput, "rel_throughput"},
    {UtilityVariant::inverse_rate, "inverse_rate"},
};

bool in_unit_interval(const Eigen::VectorXd& v)
{
    return (v.array() >= 0.0).all() && (v.array() <= 1.0).all();
}

const Eigen::VectorXd& require(const Eigen::VectorXd& v, Eigen::Index K, const char* what)
{
    if (v.size() != K)
        throw std::invalid_argument(std::string("pilot_utility: missing or mis-sized input ") + what);
    return v;
}

}  // namespace

std::string to_string(UtilityVariant v)
{
    for (const auto& e : kVariantNames)
        if (e.variant == v)
            return e.name;
    return "unknown";
}

UtilityVariant parse_utility_variant(const std::string& name)
{
    for (const auto& e : kVariantNames)
        if (name == e.name)
            return e.variant;
    throw std::invalid_argument("unknown utility metric '" + name + "'");
}

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::scsi:
        return "scsi";
    case Scheme::icsi:
        return "icsi";
    case Scheme::ubpa:
        return "ubpa";
    }
    return "unknown";
}

void UtilityConfig::validate(int num_ues) const
{
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("utility weight w must lie in [0, 1]");
    if (alpha.size() != 0 && (alpha.size() != num_ues || !in_unit_interval(alpha)))
        throw std::invalid_argument("alpha must hold K values in [0, 1]");
    if (doppler.size() != 0 && (doppler.size() != num_ues || !in_unit_interval(doppler)))
        throw std::invalid_argument("doppler must hold K values in [0, 1]");
    if (selection.mode == Selection::Mode::budget && selection.budget < -1)
        throw std::invalid_argument("pilot budget must be non-negative");
    if (selection.mode == Selection::Mode::threshold && std::isnan(selection.threshold))
        throw std::invalid_argument("utility threshold must be a number");
}

PilotUtility pilot_utility(const UtilityConfig& cfg, const UtilityInputs& in)
{
    Eigen::Index K = 0;
    switch (cfg.variant) {
    case UtilityVariant::chd_additive:
    case UtilityVariant::chd_multiplicative:
        K = in.chd.size();
        break;
    case UtilityVariant::abs_throughput:
    case UtilityVariant::rel_throughput:
        K = in.t_scsi.size();
        break;
    default:
        K = in.r_scsi.size();
        break;
    }
    cfg.validate(static_cast<int>(K));

    const Eigen::VectorXd alpha = cfg.alpha.size() ? cfg.alpha : Eigen::VectorXd::Ones(K);
    const Eigen::VectorXd doppler = cfg.doppler.size() ? cfg.doppler : Eigen::VectorXd::Zero(K);
    const double w = cfg.w;

    PilotUtility out;
    out.value.resize(K);
    out.degenerate.assign(static_cast<std::size_t>(K), false);

    auto ratio = [&](Eigen::Index k, double num, double den) {
        if (den == 0.0) {
            out.degenerate[static_cast<std::size_t>(k)] = true;
            return kInf;
        }
        return num / den;
    };

    for (Eigen::Index k = 0; k < K; ++k) {
        double channel = 0.0;
        switch (cfg.variant) {
        case UtilityVariant::chd_additive:
            out.value[k] = w * doppler[k] + (1.0 - w) * (1.0 - require(in.chd, K, "chd")[k]) + alpha[k];
            continue;
        case UtilityVariant::chd_multiplicative:
            channel = 1.0 - require(in.chd, K, "chd")[k];
            break;
        case UtilityVariant::abs_rate:
            channel = require(in.r_icsi, K, "r_icsi")[k] - in.r_scsi[k];
            break;
        case UtilityVariant::abs_throughput:
            channel = require(in.t_icsi, K, "t_icsi")[k] - in.t_scsi[k];
            break;
        case UtilityVariant::rel_rate: {
            const double ri = require(in.r_icsi, K, "r_icsi")[k];
            channel = ratio(k, ri - in.r_scsi[k], ri);
            break;
        }
        case UtilityVariant::rel_throughput: {
            const double ti = require(in.t_icsi, K, "t_icsi")[k];
            channel = ratio(k, ti - in.t_scsi[k], ti);
            break;
        }
        case UtilityVariant::inverse_rate:
            channel = ratio(k, 1.0, in.r_scsi[k]);
            break;
        }
        if (out.degenerate[static_cast<std::size_t>(k)]) {
            out.value[k] = kInf;
            continue;
        }
        out.value[k] = alpha[k] * (w * doppler[k] + (1.0 - w) * channel);
    }
    return out;
}

bool Assignment::contains(int k) const
{
    return std::find(pilot_ues.begin(), pilot_ues.end(), k) != pilot_ues.end();
}

Assignment select_ues(const Eigen::VectorXd& utility, const Selection& selection, int capacity)
{
    const int K = static_cast<int>(utility.size());
    if (capacity < 0)
        throw std::invalid_argument("select_ues: capacity must be non-negative");
    if (utility.array().isNaN().any())
        throw std::invalid_argument("select_ues: utility contains NaN");

    std::vector<int> order(static_cast<std::size_t>(K));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return utility[a] > utility[b]; });

    std::size_t take = 0;
    if (selection.mode == Selection::Mode::budget) {
        const int budget = selection.budget < 0 ? capacity : selection.budget;
        if (budget > capacity)
            throw std::invalid_argument("select_ues: budget exceeds the number of downlink pilots");
        if (budget > K)
            throw std::invalid_argument("select_ues: budget exceeds the number of UEs");
        take = static_cast<std::size_t>(budget);
    } else {
        while (take < order.size() && utility[order[take]] > selection.threshold)
            ++take;
        take = std::min(take, static_cast<std::size_t>(capacity));
    }
    order.resize(take);
    return {order};
}

void SchemeSpec::validate(int num_ues) const
{
    frame.validate();
    switch (kind) {
    case Scheme::scsi:
        if (frame.tau_dp != 0)
            throw std::invalid_argument("scsi scheme uses no downlink pilots");
        break;
    case Scheme::icsi:
        if (frame.tau_dp != num_ues)
            throw std::invalid_argument("icsi scheme needs one downlink pilot per UE");
        break;
    case Scheme::ubpa:
        if (frame.tau_dp <= 0)
            throw std::invalid_argument("ubpa scheme needs at least one downlink pilot");
        if (frame.tau_dp > num_ues)
            throw std::invalid_argument("ubpa scheme has more downlink pilots than UEs");
        break;
    }
}

RateReport evaluate_scheme(const SchemeSpec& spec, const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                           const Eigen::MatrixXd& gamma, const RadioConfig& radio, const UtilityConfig& cfg,
                           const SchemeOptions& options)
{
    const int K = static_cast<int>(gamma.cols());
    spec.validate(K);

    RateReport report;
    report.scheme = spec.kind;
    report.tau_p = spec.frame.tau_p();

    const double rho_d = radio.rho_d();
    const Eigen::VectorXd r_scsi = rate_scsi(power, beta, gamma, rho_d);
    if (spec.kind == Scheme::scsi) {
        report.rate = r_scsi;
        report.throughput = net_throughput(report.rate, spec.frame, radio.bandwidth_hz);
        return report;
    }

    const InterferenceTerms terms = interference_terms(power, beta, gamma);
    const double tau_dp = spec.frame.tau_dp;
    const AhatStats stats = ahat_stats(power, gamma, terms.varsigma.diagonal(), tau_dp, radio.rho_dp());
    const Eigen::VectorXd r_icsi = rate_icsi(stats, terms, rho_d, tau_dp, radio.rho_dp(), options.quadrature_order);
    if (spec.kind == Scheme::icsi) {
        report.rate = r_icsi;
        report.throughput = net_throughput(report.rate, spec.frame, radio.bandwidth_hz);
        return report;
    }

    // Throughput utilities compare the two pure schemes, each with its own overhead.
    UtilityInputs in;
    in.r_scsi = r_scsi;
    in.r_icsi = r_icsi;
    if (cfg.variant == UtilityVariant::chd_additive || cfg.variant == UtilityVariant::chd_multiplicative)
        in.chd = channel_hardening_degree(beta);
    if (cfg.variant == UtilityVariant::abs_throughput || cfg.variant == UtilityVariant::rel_throughput) {
        const FrameConfig f_scsi{spec.frame.tau, spec.frame.tau_up, 0};
        const FrameConfig f_icsi{spec.frame.tau, spec.frame.tau_up, K};
        in.t_scsi = net_throughput(r_scsi, f_scsi, radio.bandwidth_hz);
        in.t_icsi = net_throughput(r_icsi, f_icsi, radio.bandwidth_hz);
    }
    report.utility = pilot_utility(cfg, in);
    report.assignment = select_ues(report.utility.value, cfg.selection, spec.frame.tau_dp);

    report.rate = r_scsi;
    for (int k : report.assignment.pilot_ues)
        report.rate[k] = r_icsi[k];
    report.throughput = net_throughput(report.rate, spec.frame, radio.bandwidth_hz);
    return report;
}

}  // namespace cfmimo
