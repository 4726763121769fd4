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

#include "risbf/adpm.hpp"

#include <Eigen/Eigenvalues>
#include <limits>

namespace risbf
{
    void AdpmParams::validate() const
    {
        if (!(epsilon > 0.0))
            throw ConfigError("adpm epsilon must be > 0");
        if (!(delta1 > 0.0 && delta1 < 1.0))
            throw ConfigError("adpm delta1 must be in (0,1)");
        if (!(delta2 > 1.0))
            throw ConfigError("adpm delta2 must be > 1");
        if (!(kappa > 0.0))
            throw ConfigError("adpm kappa must be > 0");
        if (max_iterations < 1)
            throw ConfigError("adpm max_iterations must be >= 1");
    }

    CVector project_unit_modulus(const CVector &v)
    {
        CVector out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out(i) = std::abs(v(i)) > 0.0 ? std::polar(1.0, std::arg(v(i))) : cdouble(1.0, 0.0);
        return out;
    }

    double initial_penalty(const Eigen::VectorXd &eigenvalues)
    {
        if (eigenvalues.size() == 0)
            return 1.0;
        const double lmax = eigenvalues.maxCoeff();
        if (!(lmax > 0.0))
            return 1.0;
        double lmin = lmax;
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
            if (eigenvalues(i) > 1e-12 * lmax)
                lmin = std::min(lmin, eigenvalues(i));
        return std::sqrt(lmin * lmax);
    }

    AdpmResult adpm_solve(const PhaseQp &qp, const AdpmParams &params, const CVector &phi_init)
    {
        params.validate();
        const Eigen::Index n = qp.a.rows();
        if (qp.a.cols() != n || qp.d.size() != n || phi_init.size() != n)
            throw ConfigError("adpm_solve: inconsistent dimensions");

        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(qp.a));
        if (es.info() != Eigen::Success)
            throw NumericalError("adpm_solve: eigendecomposition failed");
        const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
        const CMatrix &v = es.eigenvectors();
        const CVector two_conj_d = 2.0 * qp.d.conjugate();

        AdpmResult res;
        double rho = initial_penalty(lambda);
        res.rho_initial = rho;

        CVector phi = project_unit_modulus(phi_init);
        CVector phi0 = phi;
        CVector u = CVector::Zero(n);
        double de_prev = std::numeric_limits<double>::infinity();

        for (int t = 1; t <= params.max_iterations; ++t)
        {
            phi0 = project_unit_modulus(u + rho * phi);
            const CVector rhs = v.adjoint() * (rho * phi0 - u + two_conj_d);
            phi = v * (rhs.array() / (2.0 * lambda.array() + rho)).matrix();

            const double de = (phi - phi0).norm();
            res.iterations = t;
            res.residual = de;
            if (de <= params.epsilon)
            {
                res.converged = true;
                break;
            }
            if (de > params.delta1 * de_prev)
                rho *= params.delta2;
            de_prev = de;

            u += rho * (phi - phi0);
            const double umax = u.cwiseAbs().maxCoeff();
            if (umax > params.kappa)
                u /= umax;
        }
        res.rho_final = rho;
        res.phi = phi0;
        return res;
    }
}
