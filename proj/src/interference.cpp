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

#include "risbf/interference.hpp"

#include <Eigen/Eigenvalues>
#include <random>

namespace risbf
{
    namespace
    {
        void check_unit_modulus(const CVector &phi)
        {
            for (Eigen::Index i = 0; i < phi.size(); ++i)
                if (std::abs(std::abs(phi(i)) - 1.0) > 1e-9)
                    throw ConfigError("RIS phase vector must have unit-modulus entries");
        }

        void check_shapes(const ChannelSet &cs, const CMatrix &w, const CVector &phi)
        {
            if (phi.size() != cs.g_est.rows() || cs.r_est.cols() != cs.g_est.rows())
                throw ConfigError("phase vector length does not match the RIS size");
            if (w.rows() != cs.g_est.cols())
                throw ConfigError("precoder rows do not match the number of Tx antennas");
        }

        // Terms shared by both covariance variants.
        NoiseCovariance common_terms(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power)
        {
            check_shapes(cs, w, phi);
            check_unit_modulus(phi);
            const Eigen::Index n_rx = cs.r_est.rows();
            const CMatrix eye = CMatrix::Identity(n_rx, n_rx);
            const double w_energy = w.squaredNorm();
            const double gw_energy = (cs.g_est * w).squaredNorm();

            NoiseCovariance s;
            s.delta_r = (cs.sigma2_r * gw_energy) * eye;
            s.delta_g = hermitize((cs.sigma2_g * w_energy) * (cs.r_est * cs.r_est.adjoint()));
            s.thermal = noise_power * eye;
            s.mismatch = CMatrix::Zero(n_rx, n_rx);
            s.cross = CMatrix::Zero(n_rx, n_rx);
            return s;
        }
    }

    void verify_hermitian_psd(const CMatrix &m, const char *what)
    {
        const double scale = std::max(m.norm(), 1e-300);
        if ((m - m.adjoint()).norm() > 1e-10 * scale)
            throw NumericalError(std::string(what) + " is not Hermitian");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -1e-10 * scale)
            throw NumericalError(std::string(what) + " is not positive semidefinite");
    }

    CMatrix lemma1_expectation(const CMatrix &x_hat, const CMatrix &z, const CMatrix &r_n, const CMatrix &r_m,
                               double variance)
    {
        if (z.rows() != x_hat.cols() || z.cols() != x_hat.cols())
            throw ConfigError("lemma1_expectation: Z must be square with size cols(X)");
        if (r_n.rows() != x_hat.rows() || r_n.cols() != x_hat.rows())
            throw ConfigError("lemma1_expectation: R_n must be rows(X) x rows(X)");
        if (r_m.rows() != x_hat.cols() || r_m.cols() != x_hat.cols())
            throw ConfigError("lemma1_expectation: R_m must be cols(X) x cols(X)");
        const cdouble tr = (z * r_m.transpose()).trace();
        return x_hat * z * x_hat.adjoint() + (variance * tr) * r_n;
    }

    NoiseCovariance sigma_design(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power)
    {
        NoiseCovariance s = common_terms(cs, w, phi, noise_power);
        s.variant = CovarianceVariant::Design;
        const double n_ris = static_cast<double>(cs.g_est.rows());
        s.cross = (n_ris * cs.sigma2_g * cs.sigma2_r * w.squaredNorm()) *
                  CMatrix::Identity(cs.r_est.rows(), cs.r_est.rows());
        return s;
    }

    NoiseCovariance sigma_eval(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power)
    {
        NoiseCovariance s = common_terms(cs, w, phi, noise_power);
        s.variant = CovarianceVariant::Evaluation;
        const CMatrix dhm_w = cs.r_est * phi.asDiagonal() * (cs.mismatch * w);
        s.mismatch = hermitize(dhm_w * dhm_w.adjoint());
        return s;
    }

    CMatrix empirical_covariance(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power,
                                 std::size_t draws, std::uint64_t seed, bool exact)
    {
        if (draws == 0)
            throw ConfigError("empirical_covariance: draws must be >= 1");
        check_shapes(cs, w, phi);

        std::mt19937_64 rng(seed);
        const Eigen::Index n_rx = cs.r_est.rows();
        const Eigen::Index n_ris = cs.g_est.rows();
        const Eigen::Index n_tx = cs.g_est.cols();
        const Eigen::Index n_s = w.cols();

        const auto phi_d = phi.asDiagonal();
        const CMatrix dhm = cs.r_est * phi_d * cs.mismatch;
        const CMatrix phi_g = phi_d * cs.g_est;

        CMatrix acc = CMatrix::Zero(n_rx, n_rx);
        CVector n_hat(n_rx);
        for (std::size_t t = 0; t < draws; ++t)
        {
            const CMatrix dg = sample_matrix_gaussian(n_ris, n_tx, cs.sigma2_g, rng);
            const CMatrix dr = sample_matrix_gaussian(n_rx, n_ris, cs.sigma2_r, rng);
            const CVector s = sample_matrix_gaussian(n_s, 1, 1.0, rng);
            const CVector n = sample_matrix_gaussian(n_rx, 1, noise_power, rng);

            CMatrix dh = cs.r_est * phi_d * dg + dr * phi_g + dhm;
            if (exact)
                dh += dr * phi_d * (dg + cs.mismatch);
            n_hat.noalias() = dh * (w * s) + n;
            acc.noalias() += n_hat * n_hat.adjoint();
        }
        return acc / static_cast<double>(draws);
    }
}
