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

#include "socp_feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace cfmimo::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variables z = (x, r) stored AP-major: block m is [x_m0 .. x_m(K-1), r_m];
// the scalar slack s is kept separately.
//
// Hessian of -mu s - sum_k log(phi_k) - sum_m log(psi_m) - sum_m log(1 - r_m):
//   blockdiag_m(B_m)  +  sum_k [ G_k G_k^T - (2/phi_k) E_k E_k^T ]
// where B_m = diag(alpha_m I, delta_m) + v_m v_m^T comes from the AP cones,
// G_k = grad(phi_k)/phi_k and E_k = grad(u_k). G_k and E_k only touch
// x_{.k}, r and s, so the Newton system is solved with Woodbury on a
// 2K x 2K core and a bordered elimination of s.
class Barrier {
public:
    Barrier(const ConeProblem& p, double target)
        : a_(p.a), b2_(p.b2), t_(target), M_(static_cast<int>(p.a.rows())), K_(static_cast<int>(p.a.cols())),
          blk_(K_ + 1), nz_(M_ * blk_), nu_(2.0 * K_ + 3.0 * M_)
    {
    }

    int xi(int m, int k) const { return m * blk_ + k; }
    int ri(int m) const { return m * blk_ + K_; }
    double nu() const { return nu_; }
    double grad_s() const { return grad_s_; }

    // Barrier value without the -mu s term; +inf outside the domain.
    double barrier(const Eigen::VectorXd& z, double s) const
    {
        double f = 0.0;
        for (int m = 0; m < M_; ++m) {
            const double r = z[ri(m)];
            const double chi = 1.0 - r;
            if (!(r > 0.0) || !(chi > 0.0))
                return kInf;
            const double psi = r * r - z.segment(m * blk_, K_).squaredNorm();
            if (!(psi > 0.0))
                return kInf;
            f -= std::log(psi) + std::log(chi);
        }
        for (int k = 0; k < K_; ++k) {
            double u = -s;
            double q = 1.0;
            for (int m = 0; m < M_; ++m) {
                u += a_(m, k) * z[xi(m, k)];
                const double r = z[ri(m)];
                q += b2_(m, k) * r * r;
            }
            const double phi = u * u - t_ * q;
            if (!(u > 0.0) || !(phi > 0.0))
                return kInf;
            f -= std::log(phi);
        }
        return f;
    }

    void linearize(const Eigen::VectorXd& z, double s, double mu)
    {
        phi_.resize(K_);
        gs_.resize(K_);
        gx_.resize(M_, K_);
        gr_.resize(M_, K_);
        for (int k = 0; k < K_; ++k) {
            double u = -s;
            double q = 1.0;
            for (int m = 0; m < M_; ++m) {
                u += a_(m, k) * z[xi(m, k)];
                const double r = z[ri(m)];
                q += b2_(m, k) * r * r;
            }
            const double phi = u * u - t_ * q;
            phi_[k] = phi;
            gs_[k] = -2.0 * u / phi;
            for (int m = 0; m < M_; ++m) {
                gx_(m, k) = 2.0 * u * a_(m, k) / phi;
                gr_(m, k) = -2.0 * t_ * b2_(m, k) * z[ri(m)] / phi;
            }
        }

        grad_z_.setZero(nz_);
        grad_s_ = -mu - gs_.sum();
        alpha_.resize(M_);
        delta_.resize(M_);
        sigma_.resize(M_);
        omega_.resize(M_);
        theta_.resize(M_);
        vr_.resize(M_);
        vxn2_.resize(M_);
        vx_.resize(M_, K_);
        for (int m = 0; m < M_; ++m) {
            const double r = z[ri(m)];
            const double xx = z.segment(m * blk_, K_).squaredNorm();
            const double psi = r * r - xx;
            const double chi = 1.0 - r;
            double dr = 1.0 / (chi * chi);
            for (int k = 0; k < K_; ++k)
                dr += 2.0 * t_ * b2_(m, k) / phi_[k];

            double n2 = 0.0;
            double gr_sum = 0.0;
            for (int k = 0; k < K_; ++k) {
                const double v = -2.0 * z[xi(m, k)] / psi;
                vx_(m, k) = v;
                n2 += v * v;
                grad_z_[xi(m, k)] = 2.0 * z[xi(m, k)] / psi - gx_(m, k);
                gr_sum += gr_(m, k);
            }
            grad_z_[ri(m)] = -2.0 * r / psi + 1.0 / chi - gr_sum;

            const double alpha = 2.0 / psi;
            const double vr = 2.0 * r / psi;
            const double den = alpha + n2;
            // Schur complement of the r entry, written without cancellation.
            const double sigma = 2.0 / (r * r + xx) + dr;
            alpha_[m] = alpha;
            delta_[m] = -2.0 / psi + dr;
            vr_[m] = vr;
            vxn2_[m] = n2;
            sigma_[m] = sigma;
            // B_m^{-1} = [[I/alpha + omega vx vx^T, -theta vx], [-theta vx^T, 1/sigma]]
            omega_[m] = -1.0 / (alpha * den) + vr * vr / (den * den * sigma);
            theta_[m] = vr / (den * sigma);
        }

        build_core();

        h_.setZero(nz_);
        hss_ = 0.0;
        for (int k = 0; k < K_; ++k) {
            const double two_over_phi = 2.0 / phi_[k];
            for (int m = 0; m < M_; ++m) {
                h_[xi(m, k)] += gs_[k] * gx_(m, k) + two_over_phi * a_(m, k);
                h_[ri(m)] += gs_[k] * gr_(m, k);
            }
            hss_ += gs_[k] * gs_[k] - two_over_phi;
        }
        hp_.setZero(nz_);
        for (int k = 0; k < K_; ++k)
            for (int m = 0; m < M_; ++m) {
                hp_[xi(m, k)] += gs_[k] * gx_(m, k);
                hp_[ri(m)] += gs_[k] * gr_(m, k);
            }
        hpss_ = gs_.squaredNorm();
    }

    // Newton direction; false on numerical breakdown.
    bool newton(Eigen::VectorXd& dz, double& ds, double& decrement) const
    {
        const Eigen::VectorXd rhs_z = -grad_z_;
        const double rhs_s = -grad_s_;
        const double bn = std::sqrt(rhs_z.squaredNorm() + rhs_s * rhs_s);
        solve_full(rhs_z, rhs_s, dz, ds);
        double res = kInf;
        for (int it = 0; it < 3; ++it) {
            Eigen::VectorXd hz;
            double hs = 0.0;
            apply_hessian(dz, ds, hz, hs);
            const Eigen::VectorXd res_z = rhs_z - hz;
            const double res_s = rhs_s - hs;
            res = std::sqrt(res_z.squaredNorm() + res_s * res_s);
            if (!(res > 1e-10 * bn) || it == 2)
                break;
            Eigen::VectorXd cz;
            double cs = 0.0;
            solve_full(res_z, res_s, cz, cs);
            dz += cz;
            ds += cs;
        }
        decrement = -(grad_z_.dot(dz) + grad_s_ * ds);
        const bool ok = std::isfinite(decrement) && decrement >= 0.0 && res <= 1e-8 * bn;
        if (ok)
            return true;
        // The Woodbury core is indefinite and can lose accuracy near cancellation.
        if (!conjugate_gradient(rhs_z, rhs_s, dz, ds))
            return false;
        decrement = -(grad_z_.dot(dz) + grad_s_ * ds);
        return std::isfinite(decrement) && decrement >= 0.0;
    }

private:
    // S = C^{-1} + U^T B^{-1} U using the closed form of B_m^{-1}.
    // Low-rank column j < K is G_k, column K + k is E_k.
    void build_core()
    {
        const int J = 2 * K_;
        Eigen::MatrixXd P(M_, J);
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(M_, J);
        for (int k = 0; k < K_; ++k)
            for (int m = 0; m < M_; ++m) {
                P(m, k) = gx_(m, k) * vx_(m, k);
                P(m, K_ + k) = a_(m, k) * vx_(m, k);
                R(m, k) = gr_(m, k);
            }
        const Eigen::MatrixXd Pw = omega_.asDiagonal() * P - theta_.asDiagonal() * R;
        const Eigen::MatrixXd Rw = sigma_.cwiseInverse().asDiagonal() * R - theta_.asDiagonal() * P;
        Eigen::MatrixXd S = P.transpose() * Pw + R.transpose() * Rw;
        // the I/alpha part of B_m^{-1} only pairs columns of the same UE
        for (int k = 0; k < K_; ++k) {
            double gg = 0.0, ge = 0.0, ee = 0.0;
            for (int m = 0; m < M_; ++m) {
                const double ia = 1.0 / alpha_[m];
                gg += gx_(m, k) * gx_(m, k) * ia;
                ge += gx_(m, k) * a_(m, k) * ia;
                ee += a_(m, k) * a_(m, k) * ia;
            }
            S(k, k) += gg + 1.0;
            S(k, K_ + k) += ge;
            S(K_ + k, k) += ge;
            S(K_ + k, K_ + k) += ee - 0.5 * phi_[k];
        }
        core_.compute(S);
        // Without the negative E_k terms the core is I + G^T B^{-1} G, positive definite.
        core_pos_.compute(S.topLeftCorner(K_, K_));
    }

    Eigen::VectorXd solve_blocks(const Eigen::VectorXd& y) const
    {
        Eigen::VectorXd out(nz_);
        for (int m = 0; m < M_; ++m) {
            const int o = m * blk_;
            double vy = 0.0;
            for (int k = 0; k < K_; ++k)
                vy += vx_(m, k) * y[o + k];
            const double yr = y[o + K_];
            const double q = yr / sigma_[m] - theta_[m] * vy;
            const double c = omega_[m] * vy - theta_[m] * yr;
            for (int k = 0; k < K_; ++k)
                out[o + k] = y[o + k] / alpha_[m] + c * vx_(m, k);
            out[o + K_] = q;
        }
        return out;
    }

    Eigen::VectorXd project(const Eigen::VectorXd& w) const
    {
        Eigen::VectorXd t(2 * K_);
        for (int k = 0; k < K_; ++k) {
            double tg = 0.0, te = 0.0;
            for (int m = 0; m < M_; ++m) {
                tg += gx_(m, k) * w[xi(m, k)] + gr_(m, k) * w[ri(m)];
                te += a_(m, k) * w[xi(m, k)];
            }
            t[k] = tg;
            t[K_ + k] = te;
        }
        return t;
    }

    Eigen::VectorXd expand(const Eigen::VectorXd& c) const
    {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(nz_);
        for (int k = 0; k < K_; ++k)
            for (int m = 0; m < M_; ++m) {
                v[xi(m, k)] += gx_(m, k) * c[k] + a_(m, k) * c[K_ + k];
                v[ri(m)] += gr_(m, k) * c[k];
            }
        return v;
    }

    Eigen::VectorXd solve_zz(const Eigen::VectorXd& y) const
    {
        const Eigen::VectorXd w = solve_blocks(y);
        const Eigen::VectorXd c = core_.solve(project(w));
        return w - solve_blocks(expand(c));
    }

    void solve_full(const Eigen::VectorXd& rz, double rs, Eigen::VectorXd& dz, double& ds) const
    {
        const Eigen::VectorXd y1 = solve_zz(rz);
        const Eigen::VectorXd y2 = solve_zz(h_);
        ds = (rs - h_.dot(y1)) / (hss_ - h_.dot(y2));
        dz = y1 - y2 * ds;
    }

    // Solves with H+ = blockdiag(B) + sum_k G_k G_k^T (s included), which
    // dominates the true Hessian and differs from it by a rank-K term.
    Eigen::VectorXd solve_zz_pos(const Eigen::VectorXd& y) const
    {
        const Eigen::VectorXd w = solve_blocks(y);
        const Eigen::VectorXd t = project(w).head(K_);
        Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * K_);
        c.head(K_) = core_pos_.solve(t);
        return w - solve_blocks(expand(c));
    }

    void precondition(const Eigen::VectorXd& rz, double rs, Eigen::VectorXd& dz, double& ds) const
    {
        const Eigen::VectorXd y1 = solve_zz_pos(rz);
        const Eigen::VectorXd y2 = solve_zz_pos(hp_);
        ds = (rs - hp_.dot(y1)) / (hpss_ - hp_.dot(y2));
        dz = y1 - y2 * ds;
    }

    bool conjugate_gradient(const Eigen::VectorXd& bz, double bs, Eigen::VectorXd& xz, double& xs) const
    {
        const double bn = std::sqrt(bz.squaredNorm() + bs * bs);
        xz.setZero(nz_);
        xs = 0.0;
        Eigen::VectorXd rz = bz;
        double rs = bs;
        Eigen::VectorXd zz;
        double zs = 0.0;
        precondition(rz, rs, zz, zs);
        Eigen::VectorXd pz = zz;
        double ps = zs;
        double rho = rz.dot(zz) + rs * zs;
        for (int it = 0; it < 4 * K_ + 20; ++it) {
            Eigen::VectorXd qz;
            double qs = 0.0;
            apply_hessian(pz, ps, qz, qs);
            const double curv = pz.dot(qz) + ps * qs;
            if (!(curv > 0.0))
                return false;
            const double step = rho / curv;
            xz += step * pz;
            xs += step * ps;
            rz -= step * qz;
            rs -= step * qs;
            if (std::sqrt(rz.squaredNorm() + rs * rs) <= 1e-10 * bn)
                return true;
            precondition(rz, rs, zz, zs);
            const double rho_next = rz.dot(zz) + rs * zs;
            pz = zz + (rho_next / rho) * pz;
            ps = zs + (rho_next / rho) * ps;
            rho = rho_next;
        }
        return std::sqrt(rz.squaredNorm() + rs * rs) <= 1e-6 * bn;
    }

    void apply_hessian(const Eigen::VectorXd& vz, double vs, Eigen::VectorXd& hz, double& hs) const
    {
        hz.resize(nz_);
        for (int m = 0; m < M_; ++m) {
            const int o = m * blk_;
            double vv = vr_[m] * vz[o + K_];
            for (int k = 0; k < K_; ++k)
                vv += vx_(m, k) * vz[o + k];
            for (int k = 0; k < K_; ++k)
                hz[o + k] = alpha_[m] * vz[o + k] + vx_(m, k) * vv;
            hz[o + K_] = delta_[m] * vz[o + K_] + vr_[m] * vv;
        }
        const Eigen::VectorXd proj = project(vz);
        Eigen::VectorXd coef(2 * K_);
        hs = 0.0;
        for (int k = 0; k < K_; ++k) {
            const double gdot = proj[k] + gs_[k] * vs;
            const double edot = proj[K_ + k] - vs;
            const double two_over_phi = 2.0 / phi_[k];
            coef[k] = gdot;
            coef[K_ + k] = -two_over_phi * edot;
            hs += gs_[k] * gdot + two_over_phi * edot;
        }
        hz += expand(coef);
    }

    const Eigen::MatrixXd& a_;
    const Eigen::MatrixXd& b2_;
    double t_;
    int M_, K_, blk_, nz_;
    double nu_;

    Eigen::VectorXd phi_, gs_;
    Eigen::MatrixXd gx_, gr_, vx_;
    Eigen::VectorXd grad_z_;
    double grad_s_ = 0.0;
    Eigen::VectorXd alpha_, delta_, sigma_, omega_, theta_, vr_, vxn2_;
    Eigen::PartialPivLU<Eigen::MatrixXd> core_;
    Eigen::LLT<Eigen::MatrixXd> core_pos_;
    Eigen::VectorXd h_, hp_;
    double hss_ = 0.0;
    double hpss_ = 0.0;
};

}  // namespace

FeasibilityResult test_target(const ConeProblem& problem, double target, const Eigen::MatrixXd& start)
{
    const int M = static_cast<int>(problem.a.rows());
    const int K = static_cast<int>(problem.a.cols());
    const int blk = K + 1;

    Barrier bar(problem, target);
    FeasibilityResult result;

    Eigen::VectorXd z(M * blk);
    for (int m = 0; m < M; ++m) {
        const double nx = start.row(m).norm();
        for (int k = 0; k < K; ++k)
            z[m * blk + k] = start(m, k);
        z[m * blk + K] = 0.5 * (nx + 1.0);
    }
    const double sqrt_t = std::sqrt(target);
    double s = kInf;
    double worst_rhs = 0.0;
    for (int k = 0; k < K; ++k) {
        double u = 0.0;
        double q = 1.0;
        for (int m = 0; m < M; ++m) {
            u += problem.a(m, k) * z[m * blk + k];
            const double r = z[m * blk + K];
            q += problem.b2(m, k) * r * r;
        }
        const double rhs = sqrt_t * std::sqrt(q);
        worst_rhs = std::max(worst_rhs, rhs);
        s = std::min(s, u - rhs);
    }
    s -= 1.0 + 0.1 * worst_rhs;

    auto extract = [&](const Eigen::VectorXd& zz) {
        Eigen::MatrixXd x(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                x(m, k) = zz[m * blk + k];
        return x;
    };

    // initial weight zeroes the s-gradient at the start point
    bar.linearize(z, s, 0.0);
    double mu = std::max(bar.grad_s(), 1e-12);

    constexpr int kMaxNewton = 800;
    constexpr double kCentered = 1e-7;
    constexpr double kMuGrowth = 8.0;
    const double nu = bar.nu();

    for (int outer = 0; outer < 60; ++outer) {
        bool centered = false;
        for (int inner = 0; inner < 100; ++inner) {
            if (result.newton_steps >= kMaxNewton) {
                result.verdict = Verdict::stalled;
                return result;
            }
            bar.linearize(z, s, mu);
            Eigen::VectorXd dz;
            double ds = 0.0;
            double dec = 0.0;
            if (!bar.newton(dz, ds, dec)) {
                result.verdict = Verdict::stalled;
                return result;
            }
            ++result.newton_steps;
            if (0.5 * dec <= kCentered) {
                centered = true;
                break;
            }
            const double f0 = -mu * s + bar.barrier(z, s);
            double step = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                const Eigen::VectorXd zt = z + step * dz;
                const double st = s + step * ds;
                const double ft = -mu * st + bar.barrier(zt, st);
                if (std::isfinite(ft) && ft <= f0 - 0.25 * step * dec) {
                    z = zt;
                    s = st;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (s > 0.0) {
                result.verdict = Verdict::feasible;
                result.x = extract(z);
                return result;
            }
            if (!accepted) {
                // no further descent at round-off level
                centered = true;
                break;
            }
        }
        if (!centered) {
            result.verdict = Verdict::stalled;
            return result;
        }
        // On the central path s* <= s + nu/mu; slack covers inexact centering.
        const double gap = nu / mu;
        if (s + 1.05 * gap < 0.0) {
            result.verdict = Verdict::infeasible;
            return result;
        }
        if (gap < 1e-11 * (1.0 + std::abs(s) + worst_rhs)) {
            // target on the boundary to working precision
            result.verdict = Verdict::infeasible;
            return result;
        }
        mu *= kMuGrowth;
    }
    result.verdict = Verdict::stalled;
    return result;
}

}  // namespace cfmimo::detail
