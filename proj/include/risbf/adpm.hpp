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

#ifndef RISBF_ADPM_HPP
#define RISBF_ADPM_HPP

#include "risbf/types.hpp"
#include "risbf/wmmse.hpp"

#include <vector>

namespace risbf
{
    struct AdpmParams
    {
        double epsilon = 1e-6; // primal residual tolerance
        double delta1 = 0.95;  // required residual decrease factor
        double delta2 = 1.05;  // penalty growth factor
        double kappa = 1e3;    // multiplier rescaling threshold
        int max_iterations = 500;

        void validate() const;
    };

    struct AdpmResult
    {
        CVector phi;      // unit modulus
        int iterations = 0;
        double residual = 0.0;
        bool converged = false;
        double rho_initial = 0.0;
        double rho_final = 0.0;
    };

    // Penalty start value sqrt(lambda_min * lambda_max), where lambda_min is the
    // smallest eigenvalue above 1e-12 * lambda_max. Returns 1 for A = 0.
    double initial_penalty(const Eigen::VectorXd &eigenvalues);

    // Minimises phi^H A phi - 2 Re{d^T phi} subject to |phi_n| = 1.
    AdpmResult adpm_solve(const PhaseQp &qp, const AdpmParams &params, const CVector &phi_init);

    // Entry-wise projection onto the unit circle; zero entries map to 1.
    CVector project_unit_modulus(const CVector &v);
}

#endif
