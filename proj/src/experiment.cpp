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

#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "cfmimo/rates.hpp"

namespace cfmimo {

std::string to_string(PowerMode m)
{
    return m == PowerMode::uniform ? "uniform" : "maxmin";
}

PowerMode parse_power_mode(const std::string& name)
{
    if (name == "uniform")
        return PowerMode::uniform;
    if (name == "maxmin")
        return PowerMode::maxmin;
    throw std::invalid_argument("unknown power mode '" + name + "'");
}

void ExperimentConfig::validate_geometry() const
{
    if (M < 1 || K < 1)
        throw std::invalid_argument("M and K must be >= 1");
    if (!(side_m > 0.0))
        throw std::invalid_argument("side must be positive");
    if (realizations < 1)
        throw std::invalid_argument("realizations must be >= 1");
    if (jobs < 1)
        throw std::invalid_argument("jobs must be >= 1");
    propagation.validate();
}

void ExperimentConfig::validate() const
{
    validate_geometry();
    if (M <= K)
        throw std::invalid_argument("need more APs than UEs (M > K)");
    radio.validate();
    maxmin.validate();
    if (tau < 1 || tau_up < 1)
        throw std::invalid_argument("tau and tau_up must be >= 1");
    if (orthogonal_ul_pilots && tau_up < K)
        throw std::invalid_argument("orthogonal uplink pilots need tau_up >= K");
    if (2 * (tau_up + K) > tau)
        throw std::invalid_argument("pilots of the full-CSI scheme (tau_up + K) exceed half the frame");
    if (tau_dp < 1 || tau_dp > K)
        throw std::invalid_argument("tau_dp must lie in [1, K]");
    if (quadrature_order < 2)
        throw std::invalid_argument("quadrature order must be >= 2");
    utility.validate(K);
    if (utility.selection.mode == Selection::Mode::budget && utility.selection.budget > tau_dp)
        throw std::invalid_argument("pilot budget exceeds tau_dp");
}

FrameConfig ExperimentConfig::frame(Scheme s) const
{
    switch (s) {
    case Scheme::scsi:
        return {tau, tau_up, 0};
    case Scheme::icsi:
        return {tau, tau_up, K};
    case Scheme::ubpa:
        return {tau, tau_up, tau_dp};
    }
    return {tau, tau_up, 0};
}

namespace {

Eigen::MatrixXd draw_beta(const ExperimentConfig& cfg, int index, Deployment& dep)
{
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(index));
    dep = deploy_uniform(cfg.M, cfg.K, cfg.side_m, rng);
    return large_scale_fading(dep, cfg.propagation, cost231_constant(cfg.propagation), rng);
}

double sum_of(const Eigen::VectorXd& v) { return v.sum(); }

}  // namespace

NetworkState draw_network(const ExperimentConfig& cfg, int index)
{
    cfg.validate();
    NetworkState net;
    net.large_scale.beta = draw_beta(cfg, index, net.deployment);
    net.large_scale.gamma = estimate_quality(net.large_scale.beta, cfg.tau_up, cfg.radio.rho_up());

    const double rho_d = cfg.radio.rho_d();
    if (cfg.power_mode == PowerMode::uniform)
        net.power = uniform_power(net.large_scale.gamma);
    else
        net.power = solve_maxmin(net.large_scale.beta, net.large_scale.gamma, rho_d, cfg.maxmin).power;
    net.min_sinr = sinr_scsi(net.power, net.large_scale.beta, net.large_scale.gamma, rho_d).minCoeff();
    return net;
}

RealizationResult evaluate_network(const ExperimentConfig& cfg, int index, const NetworkState& net)
{
    RealizationResult res;
    res.index = index;
    const SchemeOptions opts{cfg.quadrature_order};
    for (std::size_t i = 0; i < kSchemes.size(); ++i) {
        const SchemeSpec spec{kSchemes[i], cfg.frame(kSchemes[i])};
        res.reports[i] = evaluate_scheme(spec, net.power, net.large_scale.beta, net.large_scale.gamma, cfg.radio,
                                         cfg.utility, opts);
    }
    res.chd = channel_hardening_degree(net.large_scale.beta);
    return res;
}

RealizationResult run_realization(const ExperimentConfig& cfg, int index)
{
    return evaluate_network(cfg, index, draw_network(cfg, index));
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    return cdf;
}

double percentile(std::vector<double> samples, double p)
{
    if (samples.empty())
        throw std::invalid_argument("percentile: no samples");
    if (!(p >= 0.0 && p <= 100.0))
        throw std::invalid_argument("percentile: p must lie in [0, 100]");
    std::sort(samples.begin(), samples.end());
    const double h = (static_cast<double>(samples.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

StatSummary summarize(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("summarize: no samples");
    StatSummary s;
    double acc = 0.0;
    for (double v : samples)
        acc += v;
    s.mean = acc / static_cast<double>(samples.size());
    s.p5 = percentile(samples, 5.0);
    s.p50 = percentile(samples, 50.0);
    s.p90 = percentile(samples, 90.0);
    s.samples = std::move(samples);
    return s;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn)
{
    if (count <= 0)
        return;
    const int workers = std::max(1, std::min(jobs, count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (int i = next++; i < count && !failed; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
                failed = true;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult out;
    out.realizations.resize(static_cast<std::size_t>(cfg.realizations));
    parallel_for(cfg.realizations, cfg.jobs,
                 [&](int i) { out.realizations[static_cast<std::size_t>(i)] = run_realization(cfg, i); });

    for (std::size_t s = 0; s < kSchemes.size(); ++s) {
        std::vector<double> sums;
        sums.reserve(out.realizations.size());
        for (const auto& r : out.realizations)
            sums.push_back(sum_of(r.reports[s].throughput));
        out.schemes[s].scheme = kSchemes[s];
        out.schemes[s].sum_throughput = summarize(std::move(sums));
        out.schemes[s].avg_ue_throughput = out.schemes[s].sum_throughput.mean / cfg.K;
    }
    return out;
}

ChdStudy chd_study(const ExperimentConfig& cfg)
{
    cfg.validate_geometry();
    std::vector<Eigen::VectorXd> per(static_cast<std::size_t>(cfg.realizations));
    parallel_for(cfg.realizations, cfg.jobs, [&](int i) {
        Deployment dep;
        per[static_cast<std::size_t>(i)] = channel_hardening_degree(draw_beta(cfg, i, dep));
    });

    ChdStudy study;
    for (const auto& v : per)
        study.samples.insert(study.samples.end(), v.data(), v.data() + v.size());
    study.summary = summarize(study.samples);
    study.collocated_reference = 1.0 - 1.0 / cfg.M;
    return study;
}

MetricComparison compare_metrics(const ExperimentConfig& cfg, const std::vector<UtilityVariant>& variants)
{
    cfg.validate();
    if (variants.empty())
        throw std::invalid_argument("compare_metrics: no variants given");

    const std::size_t V = variants.size();
    const std::size_t R = static_cast<std::size_t>(cfg.realizations);
    std::vector<double> sums(V * R);
    const SchemeSpec spec{Scheme::ubpa, cfg.frame(Scheme::ubpa)};
    const SchemeOptions opts{cfg.quadrature_order};

    parallel_for(cfg.realizations, cfg.jobs, [&](int i) {
        const NetworkState net = draw_network(cfg, i);
        for (std::size_t v = 0; v < V; ++v) {
            UtilityConfig ucfg = cfg.utility;
            ucfg.variant = variants[v];
            const RateReport rep =
                evaluate_scheme(spec, net.power, net.large_scale.beta, net.large_scale.gamma, cfg.radio, ucfg, opts);
            sums[v * R + static_cast<std::size_t>(i)] = sum_of(rep.throughput);
        }
    });

    MetricComparison out;
    out.variants = variants;
    for (std::size_t v = 0; v < V; ++v) {
        StatSummary s = summarize(std::vector<double>(sums.begin() + static_cast<std::ptrdiff_t>(v * R),
                                                      sums.begin() + static_cast<std::ptrdiff_t>((v + 1) * R)));
        out.avg_ue_throughput.push_back(s.mean / cfg.K);
        out.ubpa_sum_throughput.push_back(std::move(s));
    }
    return out;
}

}  // namespace cfmimo
