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

#include <cmath>

#include "cfmimo/propagation.hpp"
#include "oracles.hpp"

using namespace cfmimo;

TEST_CASE("cost231 constant for the reference heights")
{
    PropagationParams p;
    const double lf = std::log10(2000.0);
    const double hand = 46.3 + 33.9 * lf - (1.1 * lf - 0.7) * 1.65 - 13.82 * std::log10(5.0) + (1.56 * lf - 0.8);
    CHECK(cost231_constant(p) == doctest::Approx(hand).epsilon(1e-14));
    CHECK(cost231_constant(p) == doctest::Approx(148.06).epsilon(1e-4));

    PropagationParams q;
    q.h_ue_m = 0.0;
    q.h_ap_m = 1.0;
    CHECK(cost231_constant(q) == doctest::Approx(46.3 + 33.9 * lf + (1.56 * lf - 0.8)).epsilon(1e-14));

    PropagationParams r = p;
    r.h_ap_m = 10.0;
    CHECK(cost231_constant(p) - cost231_constant(r) == doctest::Approx(13.82 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("three-slope path loss in meter log units")
{
    PropagationParams p;
    p.log_distance_unit_m = 1.0;
    const double L = 148.06;
    CHECK(path_loss_db(100.0, L, p) == doctest::Approx(-218.06).epsilon(1e-12));
    // flat below d0
    CHECK(path_loss_db(10.0, L, p) == path_loss_db(3.0, L, p));
    CHECK(path_loss_db(0.0, L, p) == path_loss_db(10.0, L, p));
    // continuity at d1
    CHECK(path_loss_db(50.0, L, p) == doctest::Approx(-L - 35.0 * std::log10(50.0)).epsilon(1e-14));
    CHECK(path_loss_db(std::nextafter(50.0, 100.0), L, p) == doctest::Approx(path_loss_db(50.0, L, p)).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(-1.0, L, p), std::invalid_argument);
}

TEST_CASE("path loss with km log units")
{
    PropagationParams p;
    const double L = cost231_constant(p);
    CHECK(path_loss_db(100.0, L, p) == doctest::Approx(-L - 35.0 * std::log10(0.1)).epsilon(1e-12));
    CHECK(path_loss_db(30.0, L, p) == doctest::Approx(-L - 15.0 * std::log10(0.05) - 20.0 * std::log10(0.03)).epsilon(1e-12));
}

TEST_CASE("path loss is continuous and non-increasing")
{
    for (double unit : {1.0, 1000.0}) {
        PropagationParams p;
        p.log_distance_unit_m = unit;
        double prev = path_loss_db(0.0, 140.0, p);
        for (double d = 0.5; d < 1500.0; d += 0.5) {
            const double v = path_loss_db(d, 140.0, p);
            CHECK(v <= prev + 1e-12);
            CHECK(prev - v <= 35.0 * std::log10(d / (d - 0.5)) + 1e-9);  // no jumps at the breakpoints
            prev = v;
        }
    }
}

TEST_CASE("parameter validation")
{
    PropagationParams p;
    CHECK_NOTHROW(p.validate());
    p.d0_m = 60.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.shadowing_db = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.carrier_mhz = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    RadioConfig r;
    CHECK_NOTHROW(r.validate());
    r.ap_data_power_w = 0.0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("noise power and normalized SNR")
{
    const double n = noise_power(20e6, 9.0);
    CHECK(n == doctest::Approx(20e6 * 1.380649e-23 * 290.0 * std::pow(10.0, 0.9)).epsilon(1e-14));
    CHECK(n == doctest::Approx(6.36e-13).epsilon(2e-3));
    CHECK(10.0 * std::log10(n / 1e-3) == doctest::Approx(-91.97).epsilon(1e-4));
    CHECK(noise_power(1.0, 0.0) == doctest::Approx(4.0e-21).epsilon(1e-3));
    CHECK_THROWS_AS(noise_power(0.0, 9.0), std::invalid_argument);

    RadioConfig r;
    CHECK(r.rho_d() == doctest::Approx(0.2 / n).epsilon(1e-14));
    CHECK(r.rho_d() == doctest::Approx(3.14e11).epsilon(2e-3));
    CHECK(r.rho_up() == doctest::Approx(0.1 / n).epsilon(1e-14));
}

TEST_CASE("large-scale fading without shadowing is the path loss")
{
    Rng rng = make_stream(4, 0);
    const Deployment dep = deploy_uniform(10, 3, 1000.0, rng);
    PropagationParams p;
    p.shadowing_db = 0.0;
    const double L = cost231_constant(p);
    Rng r1 = make_stream(9, 0);
    Rng r2 = make_stream(10, 0);
    const Eigen::MatrixXd b1 = large_scale_fading(dep, p, L, r1);
    const Eigen::MatrixXd b2 = large_scale_fading(dep, p, L, r2);
    for (int m = 0; m < 10; ++m)
        for (int k = 0; k < 3; ++k) {
            const double d = torus_distance(dep.aps[m], dep.ues[k], 1000.0);
            CHECK(b1(m, k) == doctest::Approx(std::pow(10.0, path_loss_db(d, L, p) / 10.0)).epsilon(1e-13));
            CHECK(b1(m, k) == b2(m, k));
        }
}

TEST_CASE("shadowing statistics")
{
    // all nodes at one spot so only the shadowing varies
    Deployment dep;
    dep.side = 1000.0;
    dep.aps.assign(100, Point{100.0, 100.0});
    dep.ues.assign(100, Point{400.0, 500.0});
    PropagationParams p;
    const double L = cost231_constant(p);
    const double pl = path_loss_db(torus_distance(dep.aps[0], dep.ues[0], 1000.0), L, p);
    Rng rng = make_stream(21, 0);
    const Eigen::MatrixXd beta = large_scale_fading(dep, p, L, rng);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < beta.size(); ++i) {
        const double dev = 10.0 * std::log10(beta.data()[i]) - pl;
        s1 += dev;
        s2 += dev * dev;
    }
    const double n = static_cast<double>(beta.size());
    const double mean = s1 / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    CHECK(std::abs(mean) < 4.0 * 8.0 / std::sqrt(n));
    CHECK(sd == doctest::Approx(8.0).epsilon(0.03));
    // co-located UEs still see different shadowing
    CHECK(beta(0, 0) != beta(0, 1));
}

TEST_CASE("estimate quality")
{
    Eigen::MatrixXd beta(1, 3);
    beta << 0.0, 1.0, 2.0;
    const Eigen::MatrixXd g = estimate_quality(beta, 1.0, 1.0);
    CHECK(g(0, 0) == 0.0);
    CHECK(g(0, 1) == doctest::Approx(0.5));
    CHECK(g(0, 2) == doctest::Approx(4.0 / 3.0));
    const Eigen::MatrixXd near_perfect = estimate_quality(beta, 1.0, 1e12);
    CHECK(near_perfect(0, 2) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS_AS(estimate_quality(beta, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_quality(beta, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("estimate quality bounds and monotonicity on random inputs")
{
    oracle::Gen g(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::MatrixXd beta = oracle::random_beta(g, 4, 3, 14.0);
        const double tau = g.integer(1, 100);
        const double rho = std::pow(10.0, g.uniform(0.0, 12.0));
        const Eigen::MatrixXd gm = estimate_quality(beta, tau, rho);
        const Eigen::MatrixXd more_tau = estimate_quality(beta, tau + 1, rho);
        const Eigen::MatrixXd more_rho = estimate_quality(beta, tau, rho * 1.5);
        const Eigen::MatrixXd more_beta = estimate_quality(beta * 1.1, tau, rho);
        for (int i = 0; i < beta.size(); ++i) {
            CHECK(gm.data()[i] < beta.data()[i]);
            CHECK(gm.data()[i] >= 0.0);
            CHECK(more_tau.data()[i] >= gm.data()[i]);
            CHECK(more_rho.data()[i] >= gm.data()[i]);
            CHECK(more_beta.data()[i] >= gm.data()[i]);
        }
    }
}

TEST_CASE("small-scale draws have the right second moments")
{
    Eigen::MatrixXd beta(1, 3);
    beta << 2.0, 0.5, 0.0;
    Rng rng = make_stream(8, 0);
    const int n = 100000;
    Eigen::Vector3d pw = Eigen::Vector3d::Zero();
    Eigen::Vector3d re2 = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXcd g = draw_small_scale(beta, rng);
        for (int k = 0; k < 3; ++k) {
            pw[k] += std::norm(g(0, k)) / n;
            re2[k] += g(0, k).real() * g(0, k).real() / n;
        }
    }
    CHECK(pw[0] == doctest::Approx(2.0).epsilon(0.02));
    CHECK(pw[1] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(pw[2] == 0.0);
    CHECK(re2[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(re2[1] == doctest::Approx(0.25).epsilon(0.02));
}
