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

#ifndef RISBF_BCD_HPP
#define RISBF_BCD_HPP

#include "risbf/adpm.hpp"
#include "risbf/error_model.hpp"
#include "risbf/types.hpp"
#include "risbf/wmmse.hpp"

#include <array>
#include <vector>

namespace risbf
{
    struct SolverConfig
    {
        std::size_t num_streams = 4;
        double tx_power = 1.0;
        double noise_power = 1.0;
        int max_outer = 100;
        double outer_tolerance = 1e-3;
        EtaSearch eta;
        AdpmParams adpm;
        bool phase_safeguard = true;

        void validate() const;
    };

    // Objective values inside one outer iteration, in evaluation order:
    // before Z, after Z, after Omega, after W, after the phase step.
    using SubstepObjectives = std::array<double, 5>;

    struct IterationRecord
    {
        int outer_iter = 0;
        double objective = 0.0; // -ln det J at the optimal receiver, design covariance
        double se_design = 0.0;
        double se_eval = 0.0;
        int adpm_iters = 0;
        double adpm_residual = 0.0;
        bool adpm_converged = false;
        double eta = 0.0;
        double tx_power = 0.0;
        bool phase_rejected = false;
        SubstepObjectives substeps{};
    };

    struct BeamformingState
    {
        CMatrix w;
        CVector phi;
        CMatrix z;
        CMatrix omega;

        std::vector<double> objective_trace; // entry 0 is the initial point
        std::vector<IterationRecord> iterations;

        int outer_iters = 0;
        bool converged = false;
        double se_design = 0.0;
        double se_eval = 0.0;

        // Largest increase of the objective across the Z, Omega and W sub-steps.
        double max_block_increase() const;
    };

    // Initial precoder: right singular vectors of H with equal power over
    // min(N_s, rank H) streams and ||W||_F^2 = P. A mode counts towards the rank
    // when P sigma_i^2 / noise_power >= 1; at least one stream is always used.
    CMatrix initial_precoder(const CMatrix &h_hat, std::size_t num_streams, double tx_power, double noise_power);

    // Block coordinate descent over Z, Omega, W and the RIS phases. Only the
    // estimates and error variances in `cs` are used for the design.
    BeamformingState bcd_solve(const ChannelSet &cs, const SolverConfig &config, const CVector &phi_init);

    // Random unit-modulus start vector.
    CVector random_phases(std::size_t n, std::mt19937_64 &rng);
}

#endif
