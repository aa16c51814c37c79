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

#include "cfmimo/rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfmimo/quadrature.hpp"

namespace cfmimo {

namespace {

void check_power_shape(const PowerCoefficients& power, const Eigen::MatrixXd& gamma)
{
    if (power.eta.rows() != gamma.rows() || power.eta.cols() != gamma.cols())
        throw std::invalid_argument("eta and gamma must have the same shape");
}

void check_stats(const AhatStats& ahat, const InterferenceTerms& terms)
{
    const Eigen::Index K = terms.varsigma.rows();
    if (terms.varsigma.cols() != K || ahat.mean.size() != K || ahat.variance.size() != K)
        throw std::invalid_argument("estimate statistics and interference terms disagree on K");
}

}  // namespace

void FrameConfig::validate() const
{
    if (tau <= 0)
        throw std::invalid_argument("frame length must be positive");
    if (tau_up < 0 || tau_dp < 0)
        throw std::invalid_argument("pilot lengths must be non-negative");
    if (tau_p() > tau)
        throw std::invalid_argument("pilot overhead tau_p exceeds the frame length");
}

InterferenceTerms interference_terms(const PowerCoefficients& power, const Eigen::MatrixXd& beta,
                                     const Eigen::MatrixXd& gamma)
{
    check_power_shape(power, gamma);
    if (beta.rows() != gamma.rows() || beta.cols() != gamma.cols())
        throw std::invalid_argument("beta and gamma must have the same shape");
    return {beta.transpose() * power.eta.cwiseProduct(gamma)};
}

Eigen::VectorXd rate_scsi(const PowerCoefficients& power, const Eigen::MatrixXd& beta, const Eigen::MatrixXd& gamma,
                          double rho_d)
{
    return sinr_scsi(power, beta, gamma, rho_d).unaryExpr([](double s) { return std::log2(1.0 + s); });
}

AhatStats ahat_stats(const PowerCoefficients& power, const Eigen::MatrixXd& gamma, const Eigen::VectorXd& varsigma_kk,
                     double tau_dp, double rho_dp)
{
    check_power_shape(power, gamma);
    if (varsigma_kk.size() != gamma.cols())
        throw std::invalid_argument("ahat_stats: varsigma_kk must have K entries");
    if (!(tau_dp >= 0.0) || !(rho_dp >= 0.0))
        throw std::invalid_argument("ahat_stats: tau_dp and rho_dp must be non-negative");

    const double c = tau_dp * rho_dp;
    AhatStats s;
    s.mean = power.eta.cwiseSqrt().cwiseProduct(gamma).colwise().sum().transpose();
    s.variance = varsigma_kk.unaryExpr([c](double v) { return c * v * v / (c * v + 1.0); });
    return s;
}

Eigen::VectorXd icsi_denominator(const InterferenceTerms& terms, double rho_d, double tau_dp, double rho_dp)
{
    const double c = tau_dp * rho_dp;
    const Eigen::Index K = terms.varsigma.rows();
    Eigen::VectorXd d(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double self = terms.varsigma(k, k);
        const double others = terms.varsigma.row(k).sum() - self;
        d[k] = rho_d * self / (c * self + 1.0) + rho_d * others + 1.0;
    }
    return d;
}

Eigen::VectorXd rate_icsi(const AhatStats& ahat, const InterferenceTerms& terms, double rho_d, double tau_dp,
                          double rho_dp, int order)
{
    if (order < 2)
        throw std::invalid_argument("rate_icsi: quadrature order must be >= 2");
    check_stats(ahat, terms);

    const GaussHermiteRule gh = gauss_hermite(order);
    const Eigen::VectorXd denom = icsi_denominator(terms, rho_d, tau_dp, rho_dp);
    const Eigen::Index K = denom.size();

    // E f(|m + sigma (x + i y)|^2) with x, y ~ N(0, 1/2)  =  (1/pi) sum_ij w_i w_j f(...)
    Eigen::VectorXd rate(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double m = ahat.mean[k];
        const double sd = std::sqrt(ahat.variance[k]);
        const double scale = rho_d / denom[k];
        if (sd == 0.0) {
            rate[k] = std::log2(1.0 + scale * m * m);
            continue;
        }
        double acc = 0.0;
        for (int i = 0; i < order; ++i) {
            const double re = m + sd * gh.nodes[i];
            double inner = 0.0;
            for (int j = 0; j < order; ++j) {
                const double im = sd * gh.nodes[j];
                inner += gh.weights[j] * std::log2(1.0 + scale * (re * re + im * im));
            }
            acc += gh.weights[i] * inner;
        }
        rate[k] = acc / std::numbers::pi;
    }
    return rate;
}

Eigen::VectorXd rate_icsi_mc(const AhatStats& ahat, const InterferenceTerms& terms, double rho_d, double tau_dp,
                             double rho_dp, int draws, Rng& rng)
{
    if (draws < 1)
        throw std::invalid_argument("rate_icsi_mc: draws must be >= 1");
    check_stats(ahat, terms);

    const double c = tau_dp * rho_dp;
    const double sc = std::sqrt(c);
    const Eigen::VectorXd denom = icsi_denominator(terms, rho_d, tau_dp, rho_dp);
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));

    Eigen::VectorXd rate(denom.size());
    for (Eigen::Index k = 0; k < denom.size(); ++k) {
        const double m = ahat.mean[k];
        const double v = terms.varsigma(k, k);
        const double sd_a = std::sqrt(v);
        const double gain = sc * v / (c * v + 1.0);
        const double scale = rho_d / denom[k];
        double acc = 0.0;
        for (int d = 0; d < draws; ++d) {
            // a_kk - m, then y = sqrt(c) a_kk + w and the LMMSE estimate of a_kk
            const double a_re = sd_a * half(rng);
            const double a_im = sd_a * half(rng);
            const double w_re = half(rng);
            const double w_im = half(rng);
            const double re = m + gain * (sc * a_re + w_re);
            const double im = gain * (sc * a_im + w_im);
            acc += std::log2(1.0 + scale * (re * re + im * im));
        }
        rate[k] = acc / draws;
    }
    return rate;
}

Eigen::VectorXd channel_hardening_degree(const Eigen::MatrixXd& beta)
{
    Eigen::VectorXd chd(beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
        if ((beta.col(k).array() < 0.0).any())
            throw std::invalid_argument("channel_hardening_degree: negative path gain");
        // normalize first so tiny gains do not underflow when squared
        const double peak = beta.col(k).maxCoeff();
        if (!(peak > 0.0))
            throw std::invalid_argument("channel_hardening_degree: all-zero beta column");
        const Eigen::VectorXd b = beta.col(k) / peak;
        const double s = b.sum();
        chd[k] = 1.0 - b.squaredNorm() / (s * s);
    }
    return chd;
}

Eigen::VectorXd net_throughput(const Eigen::VectorXd& rate, const FrameConfig& frame, double bandwidth_hz)
{
    frame.validate();
    const double factor = 0.5 * bandwidth_hz * (1.0 - static_cast<double>(frame.tau_p()) / frame.tau);
    return factor * rate;
}

}  // namespace cfmimo
