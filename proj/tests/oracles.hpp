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

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code; formulas are re-derived with plain loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// xoshiro256** with splitmix64 seeding; small and fast for brute-force loops.
class Gen {
public:
    explicit Gen(std::uint64_t seed)
    {
        for (auto& w : s_) {
            seed += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = seed;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // (0, 1]
    double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    double exponential() { return -std::log(uniform()); }

    // Box-Muller pair
    std::pair<double, double> normal_pair()
    {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(a), r * std::sin(a)};
    }
    double normal() { return normal_pair().first; }

    // path-gain-like values spread over `decades` decades
    double log_uniform(double decades) { return std::pow(10.0, -decades * uniform()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

inline Eigen::MatrixXd random_beta(Gen& g, int M, int K, double decades = 3.0)
{
    Eigen::MatrixXd b(M, K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
            b(m, k) = g.log_uniform(decades);
    return b;
}

inline Eigen::MatrixXd gamma_of(const Eigen::MatrixXd& beta, double c)
{
    Eigen::MatrixXd out(beta.rows(), beta.cols());
    for (int m = 0; m < beta.rows(); ++m)
        for (int k = 0; k < beta.cols(); ++k)
            out(m, k) = c * beta(m, k) * beta(m, k) / (c * beta(m, k) + 1.0);
    return out;
}

// SINR of UE k with statistical CSI, written term by term.
inline std::vector<double> sinr_scsi(const Eigen::MatrixXd& eta, const Eigen::MatrixXd& beta,
                                     const Eigen::MatrixXd& gamma, double rho)
{
    const int M = static_cast<int>(beta.rows());
    const int K = static_cast<int>(beta.cols());
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        double amp = 0.0;
        for (int m = 0; m < M; ++m)
            amp += std::sqrt(eta(m, k)) * gamma(m, k);
        double interf = 0.0;
        for (int kp = 0; kp < K; ++kp)
            for (int m = 0; m < M; ++m)
                interf += eta(m, kp) * beta(m, k) * gamma(m, kp);
        out[static_cast<std::size_t>(k)] = rho * amp * amp / (rho * interf + 1.0);
    }
    return out;
}

inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// E[log2(1 + scale |a|^2)] for a ~ CN(mean, var) by composite Simpson on a
// square of +-9 standard deviations per real axis.
inline double expected_log_rate(double mean, double var, double scale, int n = 600)
{
    if (var == 0.0)
        return std::log2(1.0 + scale * mean * mean);
    const double sd = std::sqrt(var / 2.0);  // per real axis
    const double half = 9.0 * sd;
    const double h = 2.0 * half / n;
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    std::vector<double> dens(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        const double x = -half + i * h;
        w[static_cast<std::size_t>(i)] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        dens[static_cast<std::size_t>(i)] = std::exp(-0.5 * x * x / (sd * sd)) / (std::sqrt(2.0 * std::numbers::pi) * sd);
    }
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double re = mean - half + i * h;
        double row = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double im = -half + j * h;
            row += w[static_cast<std::size_t>(j)] * dens[static_cast<std::size_t>(j)] *
                   std::log2(1.0 + scale * (re * re + im * im));
        }
        acc += w[static_cast<std::size_t>(i)] * dens[static_cast<std::size_t>(i)] * row;
    }
    return acc * h * h / 9.0;
}

// 1 - Var/E^2 of sum_m |g_m|^2 from `draws` Rayleigh realizations;
// |g_m|^2 = beta_m * Exp(1).
inline double chd_monte_carlo(const std::vector<double>& beta, long draws, Gen& g)
{
    double s1 = 0.0;
    double s2 = 0.0;
    const double peak = *std::max_element(beta.begin(), beta.end());
    for (long d = 0; d < draws; ++d) {
        double total = 0.0;
        for (double b : beta)
            total += (b / peak) * g.exponential();
        s1 += total;
        s2 += total * total;
    }
    const double mean = s1 / draws;
    const double var = s2 / draws - mean * mean;
    return 1.0 - var / (mean * mean);
}

// Max-min SINR over a grid of per-AP power splits at full AP power, refined
// by coordinate search. Every point evaluated is feasible, so the result is a
// lower bound on the true optimum. Two UEs only.
inline double grid_maxmin_two_ues(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma, double rho,
                                  int points = 25)
{
    const int M = static_cast<int>(beta.rows());
    auto eval = [&](const std::vector<double>& split) {
        Eigen::MatrixXd eta(M, 2);
        for (int m = 0; m < M; ++m) {
            eta(m, 0) = split[static_cast<std::size_t>(m)] / gamma(m, 0);
            eta(m, 1) = (1.0 - split[static_cast<std::size_t>(m)]) / gamma(m, 1);
        }
        return min_of(sinr_scsi(eta, beta, gamma, rho));
    };

    std::vector<double> split(static_cast<std::size_t>(M), 0.0);
    std::vector<double> best_split = split;
    double best = -1.0;
    std::vector<int> idx(static_cast<std::size_t>(M), 0);
    while (true) {
        for (int m = 0; m < M; ++m)
            split[static_cast<std::size_t>(m)] = static_cast<double>(idx[static_cast<std::size_t>(m)]) / (points - 1);
        const double v = eval(split);
        if (v > best) {
            best = v;
            best_split = split;
        }
        int m = 0;
        while (m < M && ++idx[static_cast<std::size_t>(m)] == points)
            idx[static_cast<std::size_t>(m++)] = 0;
        if (m == M)
            break;
    }
    double step = 0.5 / (points - 1);
    while (step > 1e-6) {
        bool improved = false;
        for (int m = 0; m < M; ++m)
            for (double dir : {-1.0, 1.0}) {
                std::vector<double> trial = best_split;
                trial[static_cast<std::size_t>(m)] = std::clamp(trial[static_cast<std::size_t>(m)] + dir * step, 0.0, 1.0);
                const double v = eval(trial);
                if (v > best) {
                    best = v;
                    best_split = trial;
                    improved = true;
                }
            }
        if (!improved)
            step *= 0.5;
    }
    return best;
}

}  // namespace oracle
