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

#ifndef RISBF_WMMSE_HPP
#define RISBF_WMMSE_HPP

#include "risbf/types.hpp"

namespace risbf
{
    // log2 det(I + H W W^H H^H Sigma^{-1}) in bits/s/Hz.
    double achievable_se(const CMatrix &h, const CMatrix &w, const CMatrix &sigma);

    // J = Z^H (H W W^H H^H + Sigma) Z - Z^H H W - W^H H^H Z + I
    CMatrix mse_matrix(const CMatrix &z, const CMatrix &w, const CMatrix &h, const CMatrix &sigma);

    // MMSE receiver (H W W^H H^H + Sigma)^{-1} H W.
    CMatrix update_z(const CMatrix &h, const CMatrix &w, const CMatrix &sigma);

    // J^{-1}, Hermitian. Throws NumericalError when J is not positive definite.
    CMatrix update_omega(const CMatrix &j);

    // tr(Omega J) - log det Omega - N_s (natural log).
    double wmmse_objective(const CMatrix &omega, const CMatrix &j);

    // ln det of a Hermitian positive definite matrix.
    double log_det_hpd(const CMatrix &m);

    struct PrecoderProblem
    {
        CMatrix h_hat; // R_hat Phi G_hat
        CMatrix g_hat;
        CMatrix r_hat;
        double sigma2_g = 0.0;
        double sigma2_r = 0.0;
        double tx_power = 1.0;
    };

    struct EtaSearch
    {
        double rel_tolerance = 1e-12; // on the transmit power
        int max_doublings = 200;
        int max_bisections = 400;
    };

    struct PrecoderUpdate
    {
        CMatrix w;
        double eta = 0.0;
        double power = 0.0;
        int bisection_steps = 0;
    };

    // Minimiser of the weighted MSE in W under ||W||_F^2 <= P. The transmit power
    // ||W(eta)||^2 is evaluated in the eigenbasis of the quadratic-form matrix so
    // each bisection step costs O(N_Tx N_s).
    PrecoderUpdate update_w(const PrecoderProblem &p, const CMatrix &z, const CMatrix &omega,
                            const EtaSearch &search = {});

    // W(eta) for a fixed multiplier, used to verify the monotone power map.
    CMatrix precoder_for_eta(const PrecoderProblem &p, const CMatrix &z, const CMatrix &omega, double eta);

    // Phase-dependent part of the weighted MSE: f(phi) = phi^H A phi - 2 Re{d^T phi}.
    struct PhaseQp
    {
        CMatrix a;
        CVector d;
    };

    PhaseQp build_qp(const CMatrix &g_hat, const CMatrix &r_hat, const CMatrix &w, const CMatrix &z,
                     const CMatrix &omega);

    double qp_objective(const PhaseQp &qp, const CVector &phi);
}

#endif
