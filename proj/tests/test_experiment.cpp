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

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cfmimo/experiment.hpp"
#include "oracles.hpp"

using namespace cfmimo;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.M = 24;
    c.K = 6;
    c.tau_up = 10;
    c.tau_dp = 3;
    c.realizations = 6;
    c.seed = 42;
    c.power_mode = PowerMode::uniform;
    return c;
}

}  // namespace

TEST_CASE("percentile uses linear interpolation between order statistics")
{
    CHECK(percentile({3.0, 1.0, 2.0, 4.0}, 50.0) == doctest::Approx(2.5));
    CHECK(percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 90.0) == doctest::Approx(4.6));
    CHECK(percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 5.0) == doctest::Approx(1.2));
    CHECK(percentile({7.0}, 33.0) == 7.0);
    CHECK(percentile({1.0, 9.0}, 0.0) == 1.0);
    CHECK(percentile({1.0, 9.0}, 100.0) == 9.0);
    CHECK_THROWS_AS(percentile({}, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile({1.0}, 101.0), std::invalid_argument);
}

TEST_CASE("percentile properties on random samples")
{
    oracle::Gen g(41);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> s(static_cast<std::size_t>(g.integer(1, 50)));
        for (auto& v : s)
            v = g.uniform(-5.0, 5.0);
        double prev = -1e300;
        for (double p = 0.0; p <= 100.0; p += 2.5) {
            const double q = percentile(s, p);
            CHECK(q >= prev);
            prev = q;
        }
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        CHECK(percentile(s, 0.0) == *lo);
        CHECK(percentile(s, 100.0) == *hi);
        std::vector<double> shuffled = s;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(percentile(shuffled, 37.0) == percentile(s, 37.0));
    }
}

TEST_CASE("empirical CDF")
{
    const auto cdf = empirical_cdf({0.3, 0.1, 0.2, 0.2});
    REQUIRE(cdf.size() == 4);
    CHECK(cdf[0].first == 0.1);
    CHECK(cdf[0].second == 0.25);
    CHECK(cdf[3].first == 0.3);
    CHECK(cdf[3].second == 1.0);
    CHECK_THROWS_AS(empirical_cdf({}), std::invalid_argument);

    const StatSummary s = summarize({1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(s.mean == 3.0);
    CHECK(s.p50 == 3.0);
    CHECK(s.p5 == doctest::Approx(1.2));
    CHECK(s.samples.front() == 1.0);
}

TEST_CASE("config validation")
{
    ExperimentConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    c.M = c.K;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_NOTHROW(c.validate_geometry());
    c = small_config();
    c.tau_up = c.K - 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.orthogonal_ul_pilots = false;
    CHECK_NOTHROW(c.validate());
    c = small_config();
    c.tau_dp = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.tau_dp = c.K + 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.tau = 2 * (c.tau_up + c.K) - 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.utility.selection.budget = c.tau_dp + 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_config();
    c.jobs = 0;
    CHECK_THROWS_AS(c.validate_geometry(), std::invalid_argument);

    c = small_config();
    CHECK(c.frame(Scheme::scsi).tau_p() == 10);
    CHECK(c.frame(Scheme::icsi).tau_p() == 16);
    CHECK(c.frame(Scheme::ubpa).tau_p() == 13);
    CHECK(parse_power_mode(to_string(PowerMode::maxmin)) == PowerMode::maxmin);
    CHECK_THROWS_AS(parse_power_mode("max"), std::invalid_argument);
}

TEST_CASE("realizations are reproducible and independent of job count")
{
    ExperimentConfig c = small_config();
    const ExperimentResult a = run_experiment(c);
    c.jobs = 3;
    const ExperimentResult b = run_experiment(c);
    REQUIRE(a.realizations.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.schemes[i].sum_throughput.samples == b.schemes[i].sum_throughput.samples);
        CHECK(a.schemes[i].avg_ue_throughput == b.schemes[i].avg_ue_throughput);
    }
    // realization i does not depend on how many others are run
    c.realizations = 2;
    const RealizationResult r = run_realization(c, 4);
    CHECK(r.report(Scheme::ubpa).throughput == a.realizations[4].report(Scheme::ubpa).throughput);

    c.seed = 43;
    CHECK(run_realization(c, 4).report(Scheme::scsi).throughput != r.report(Scheme::scsi).throughput);
}

TEST_CASE("summary aggregates per-realization sums")
{
    const ExperimentConfig c = small_config();
    const ExperimentResult res = run_experiment(c);
    for (Scheme s : kSchemes) {
        const SchemeSummary& sum = res.summary(s);
        CHECK(sum.scheme == s);
        double mean = 0.0;
        for (std::size_t i = 0; i < res.realizations.size(); ++i) {
            const double total = res.realizations[i].report(s).throughput.sum();
            CHECK(sum.sum_throughput.samples[i] == doctest::Approx(total).epsilon(1e-14));
            mean += total / res.realizations.size();
        }
        CHECK(sum.sum_throughput.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(sum.avg_ue_throughput == doctest::Approx(mean / c.K).epsilon(1e-12));
        CHECK(sum.sum_throughput.p5 <= sum.sum_throughput.p50);
        CHECK(sum.sum_throughput.p50 <= sum.sum_throughput.p90);
    }
}

TEST_CASE("network draw holds consistent large-scale state")
{
    ExperimentConfig c = small_config();
    c.power_mode = PowerMode::maxmin;
    const NetworkState net = draw_network(c, 1);
    CHECK(net.deployment.num_aps() == c.M);
    CHECK(net.deployment.num_ues() == c.K);
    CHECK((net.large_scale.gamma.array() <= net.large_scale.beta.array()).all());
    CHECK(validate_power(net.power, net.large_scale.gamma).ok);
    const Eigen::VectorXd s = sinr_scsi(net.power, net.large_scale.beta, net.large_scale.gamma, c.radio.rho_d());
    CHECK(net.min_sinr == doctest::Approx(s.minCoeff()).epsilon(1e-12));
    const double uniform =
        sinr_scsi(uniform_power(net.large_scale.gamma), net.large_scale.beta, net.large_scale.gamma, c.radio.rho_d())
            .minCoeff();
    CHECK(net.min_sinr >= uniform);
}

TEST_CASE("channel hardening study")
{
    ExperimentConfig c = small_config();
    c.M = 1;
    c.realizations = 3;
    ChdStudy one = chd_study(c);
    CHECK(one.samples.size() == 18);
    CHECK(std::all_of(one.samples.begin(), one.samples.end(), [](double v) { return v == 0.0; }));
    CHECK(one.collocated_reference == 0.0);

    c.M = 50;
    const ChdStudy s = chd_study(c);
    CHECK(s.collocated_reference == doctest::Approx(0.98));
    for (double v : s.samples) {
        CHECK(v >= 0.0);
        CHECK(v <= 0.98 + 1e-12);
    }
}

TEST_CASE("metric comparison shares networks across variants")
{
    const ExperimentConfig c = small_config();
    const MetricComparison m = compare_metrics(c, {UtilityVariant::abs_rate, UtilityVariant::abs_rate,
                                                   UtilityVariant::chd_multiplicative});
    REQUIRE(m.ubpa_sum_throughput.size() == 3);
    CHECK(m.ubpa_sum_throughput[0].samples == m.ubpa_sum_throughput[1].samples);
    const ExperimentResult res = run_experiment(c);
    CHECK(m.ubpa_sum_throughput[0].samples == res.summary(Scheme::ubpa).sum_throughput.samples);
}

TEST_CASE("parallel_for visits every index once and reports the first error")
{
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, 4, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits)
        CHECK(h.load() == 1);

    try {
        parallel_for(20, 3, [](int i) {
            if (i == 7 || i == 13)
                throw std::runtime_error("fail " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "fail 7");
    }
}
