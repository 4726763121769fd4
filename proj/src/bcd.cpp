// SPDX-License-Identifier: Apache-2.0
//
// risbf - joint active/passive beamforming for RIS-aided MIMO links
// Copyright (C) 2026 The risbf authors
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

#include "risbf/bcd.hpp"

#include "risbf/interference.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>

namespace risbf
{
    void SolverConfig::validate() const
    {
        if (num_streams < 1)
            throw ConfigError("num_streams must be >= 1");
        if (!(tx_power > 0.0))
            throw ConfigError("tx_power must be > 0");
        if (!(noise_power > 0.0))
            throw ConfigError("noise_power must be > 0");
        if (max_outer < 1)
            throw ConfigError("max_outer must be >= 1");
        if (!(outer_tolerance > 0.0))
            throw ConfigError("outer_tolerance must be > 0");
        adpm.validate();
    }

    double BeamformingState::max_block_increase() const
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto &it : iterations)
            for (std::size_t s = 1; s < 4; ++s)
                worst = std::max(worst, it.substeps[s] - it.substeps[s - 1]);
        return worst;
    }

    CMatrix initial_precoder(const CMatrix &h_hat, std::size_t num_streams, double tx_power, double noise_power)
    {
        const Eigen::Index n_tx = h_hat.cols();
        const Eigen::Index n_s = static_cast<Eigen::Index>(num_streams);
        CMatrix w = CMatrix::Zero(n_tx, n_s);

        Eigen::JacobiSVD<CMatrix> svd(h_hat, Eigen::ComputeFullV);
        const auto &sv = svd.singularValues();
        Eigen::Index rank = 0;
        if (sv.size() > 0 && sv(0) > 0.0)
        {
            rank = 1;
            for (Eigen::Index i = 1; i < sv.size(); ++i)
                if (sv(i) > 1e-12 * sv(0) && tx_power * sv(i) * sv(i) >= noise_power)
                    ++rank;
        }

        if (rank > 0)
        {
            const Eigen::Index m = std::min(n_s, rank);
            w.leftCols(m) = std::sqrt(tx_power / static_cast<double>(m)) * svd.matrixV().leftCols(m);
        }
        else
        {
            const Eigen::Index m = std::min(n_s, n_tx);
            w.topLeftCorner(m, m) = std::sqrt(tx_power / static_cast<double>(m)) * CMatrix::Identity(m, m);
        }
        return w;
    }

    CVector random_phases(std::size_t n, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(-kPi, kPi);
        CVector phi(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            phi(i) = std::polar(1.0, u(rng));
        return phi;
    }

    namespace
    {
        struct Evaluator
        {
            const ChannelSet &cs;
            const SolverConfig &cfg;

            CMatrix cascade(const CVector &phi) const { return cs.r_est * phi.asDiagonal() * cs.g_est; }

            CMatrix design_sigma(const CMatrix &w, const CVector &phi) const
            {
                return sigma_design(cs, w, phi, cfg.noise_power).total();
            }

            double objective(const CMatrix &z, const CMatrix &omega, const CMatrix &w, const CVector &phi) const
            {
                const CMatrix j = mse_matrix(z, w, cascade(phi), design_sigma(w, phi));
                return wmmse_objective(omega, j);
            }

            double se_design(const CMatrix &w, const CVector &phi) const
            {
                return achievable_se(cascade(phi), w, design_sigma(w, phi));
            }

            double se_eval(const CMatrix &w, const CVector &phi) const
            {
                return achievable_se(cascade(phi), w, sigma_eval(cs, w, phi, cfg.noise_power).total());
            }
        };
    }

    BeamformingState bcd_solve(const ChannelSet &cs, const SolverConfig &config, const CVector &phi_init)
    {
        config.validate();
        if (phi_init.size() != cs.g_est.rows())
            throw ConfigError("bcd_solve: phase initialisation has the wrong length");

        const Evaluator ev{cs, config};
        const double ln2 = std::log(2.0);
        const Eigen::Index n_s = static_cast<Eigen::Index>(config.num_streams);

        BeamformingState st;
        st.phi = project_unit_modulus(phi_init);
        st.w = initial_precoder(ev.cascade(st.phi), config.num_streams, config.tx_power, config.noise_power);
        st.z = CMatrix::Zero(cs.r_est.rows(), n_s);
        st.omega = CMatrix::Identity(n_s, n_s);

        double p_prev = -ln2 * ev.se_design(st.w, st.phi);
        st.objective_trace.push_back(p_prev);

        PrecoderProblem prob;
        prob.g_hat = cs.g_est;
        prob.r_hat = cs.r_est;
        prob.sigma2_g = cs.sigma2_g;
        prob.sigma2_r = cs.sigma2_r;
        prob.tx_power = config.tx_power;

        for (int r = 1; r <= config.max_outer; ++r)
        {
            IterationRecord rec;
            rec.outer_iter = r;
            rec.substeps[0] = ev.objective(st.z, st.omega, st.w, st.phi);

            const CMatrix h = ev.cascade(st.phi);
            const CMatrix sigma = ev.design_sigma(st.w, st.phi);
            st.z = update_z(h, st.w, sigma);
            const CMatrix j = mse_matrix(st.z, st.w, h, sigma);
            rec.substeps[1] = wmmse_objective(st.omega, j);

            st.omega = update_omega(j);
            rec.substeps[2] = wmmse_objective(st.omega, j);

            prob.h_hat = h;
            const PrecoderUpdate pu = update_w(prob, st.z, st.omega, config.eta);
            st.w = pu.w;
            rec.eta = pu.eta;
            rec.tx_power = pu.power;
            rec.substeps[3] = ev.objective(st.z, st.omega, st.w, st.phi);

            const PhaseQp qp = build_qp(cs.g_est, cs.r_est, st.w, st.z, st.omega);
            const AdpmResult ar = adpm_solve(qp, config.adpm, st.phi);
            rec.adpm_iters = ar.iterations;
            rec.adpm_residual = ar.residual;
            rec.adpm_converged = ar.converged;

            const double f_old = qp_objective(qp, st.phi);
            const double f_new = qp_objective(qp, ar.phi);
            if (config.phase_safeguard && f_new > f_old + 1e-9 * std::max(1.0, std::abs(f_old)))
                rec.phase_rejected = true;
            else
                st.phi = ar.phi;
            rec.substeps[4] = ev.objective(st.z, st.omega, st.w, st.phi);

            rec.se_design = ev.se_design(st.w, st.phi);
            rec.se_eval = ev.se_eval(st.w, st.phi);
            rec.objective = -ln2 * rec.se_design;
            st.objective_trace.push_back(rec.objective);
            st.iterations.push_back(rec);
            st.outer_iters = r;

            const double change = std::abs(rec.objective - p_prev);
            p_prev = rec.objective;
            if (change < config.outer_tolerance)
            {
                st.converged = true;
                break;
            }
        }

        st.se_design = ev.se_design(st.w, st.phi);
        st.se_eval = ev.se_eval(st.w, st.phi);
        return st;
    }
}
