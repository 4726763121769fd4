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

#include "risbf/wmmse.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace risbf
{
    namespace
    {
        Eigen::LLT<CMatrix> factor_hpd(const CMatrix &m, const char *what)
        {
            Eigen::LLT<CMatrix> llt(hermitize(m));
            if (llt.info() != Eigen::Success)
                throw NumericalError(std::string(what) + " is not positive definite");
            return llt;
        }

        struct QuadraticForm
        {
            Eigen::VectorXd lambda;
            CMatrix basis;
            CMatrix rhs; // basis^H H^H Z Omega
            double cutoff = 0.0;
        };

        QuadraticForm decompose(const PrecoderProblem &p, const CMatrix &z, const CMatrix &omega)
        {
            const Eigen::Index n_tx = p.h_hat.cols();
            const double n_ris = static_cast<double>(p.g_hat.rows());
            const CMatrix hz = p.h_hat.adjoint() * z; // N_Tx x N_s
            const double tr_ozz = (omega * z.adjoint() * z).trace().real();
            const CMatrix rz = p.r_hat.adjoint() * z;
            const double tr_orrz = (omega * rz.adjoint() * rz).trace().real();

            CMatrix b = hz * omega * hz.adjoint();
            if (p.sigma2_r > 0.0)
                b += (p.sigma2_r * tr_ozz) * (p.g_hat.adjoint() * p.g_hat);
            const double diag = p.sigma2_g * tr_orrz + n_ris * p.sigma2_g * p.sigma2_r * tr_ozz;
            b.diagonal().array() += diag;

            Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(b));
            if (es.info() != Eigen::Success)
                throw NumericalError("update_w: eigendecomposition failed");
            QuadraticForm q;
            q.lambda = es.eigenvalues().cwiseMax(0.0);
            q.basis = es.eigenvectors();
            q.rhs = q.basis.adjoint() * (hz * omega);
            const double lmax = n_tx > 0 ? q.lambda.maxCoeff() : 0.0;
            q.cutoff = 1e-12 * lmax;
            return q;
        }

        double power_at(const QuadraticForm &q, double eta)
        {
            double p = 0.0;
            for (Eigen::Index i = 0; i < q.lambda.size(); ++i)
            {
                const double l = q.lambda(i) + eta;
                if (eta == 0.0 && q.lambda(i) <= q.cutoff)
                    continue;
                p += q.rhs.row(i).squaredNorm() / (l * l);
            }
            return p;
        }

        CMatrix precoder_at(const QuadraticForm &q, double eta)
        {
            CMatrix scaled = q.rhs;
            for (Eigen::Index i = 0; i < q.lambda.size(); ++i)
            {
                if (eta == 0.0 && q.lambda(i) <= q.cutoff)
                    scaled.row(i).setZero();
                else
                    scaled.row(i) /= (q.lambda(i) + eta);
            }
            return q.basis * scaled;
        }
    }

    double log_det_hpd(const CMatrix &m)
    {
        const auto llt = factor_hpd(m, "matrix");
        const CMatrix &l = llt.matrixLLT();
        double s = 0.0;
        for (Eigen::Index i = 0; i < l.rows(); ++i)
            s += std::log(l(i, i).real());
        return 2.0 * s;
    }

    double achievable_se(const CMatrix &h, const CMatrix &w, const CMatrix &sigma)
    {
        const auto llt = factor_hpd(sigma, "interference-plus-noise covariance");
        const CMatrix m = llt.matrixL().solve(h * w);
        CMatrix gram = m.adjoint() * m;
        gram.diagonal().array() += 1.0;
        return log_det_hpd(gram) / std::log(2.0);
    }

    CMatrix mse_matrix(const CMatrix &z, const CMatrix &w, const CMatrix &h, const CMatrix &sigma)
    {
        const CMatrix hw = h * w;
        const CMatrix zh_hw = z.adjoint() * hw;
        CMatrix j = z.adjoint() * (hw * hw.adjoint() + sigma) * z - zh_hw - zh_hw.adjoint();
        j.diagonal().array() += 1.0;
        return hermitize(j);
    }

    CMatrix update_z(const CMatrix &h, const CMatrix &w, const CMatrix &sigma)
    {
        const CMatrix hw = h * w;
        const auto llt = factor_hpd(hw * hw.adjoint() + sigma, "receive covariance");
        return llt.solve(hw);
    }

    CMatrix update_omega(const CMatrix &j)
    {
        const auto llt = factor_hpd(j, "MSE matrix");
        return hermitize(llt.solve(CMatrix::Identity(j.rows(), j.cols())));
    }

    double wmmse_objective(const CMatrix &omega, const CMatrix &j)
    {
        return (omega * j).trace().real() - log_det_hpd(omega) - static_cast<double>(omega.rows());
    }

    CMatrix precoder_for_eta(const PrecoderProblem &p, const CMatrix &z, const CMatrix &omega, double eta)
    {
        return precoder_at(decompose(p, z, omega), eta);
    }

    PrecoderUpdate update_w(const PrecoderProblem &p, const CMatrix &z, const CMatrix &omega, const EtaSearch &search)
    {
        if (!(p.tx_power > 0.0))
            throw ConfigError("update_w: transmit power must be positive");
        const QuadraticForm q = decompose(p, z, omega);

        PrecoderUpdate out;
        const double p0 = power_at(q, 0.0);
        if (p0 <= p.tx_power)
        {
            out.w = precoder_at(q, 0.0);
            out.power = out.w.squaredNorm();
            return out;
        }

        double lo = 0.0, hi = 1.0;
        int doublings = 0;
        while (power_at(q, hi) >= p.tx_power)
        {
            lo = hi;
            hi *= 2.0;
            if (++doublings > search.max_doublings)
                throw NumericalError("update_w: could not bracket the power multiplier");
        }

        int steps = 0;
        while (steps < search.max_bisections)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double pm = power_at(q, mid);
            if (pm > p.tx_power)
                lo = mid;
            else
                hi = mid;
            ++steps;
            if (p.tx_power - power_at(q, hi) <= search.rel_tolerance * p.tx_power)
                break;
        }
        out.eta = hi;
        out.w = precoder_at(q, hi);
        out.power = out.w.squaredNorm();
        out.bisection_steps = steps;
        return out;
    }

    PhaseQp build_qp(const CMatrix &g_hat, const CMatrix &r_hat, const CMatrix &w, const CMatrix &z,
                     const CMatrix &omega)
    {
        const CMatrix rz = r_hat.adjoint() * z; // N_R x N_s
        const CMatrix gw = g_hat * w;           // N_R x N_s
        const CMatrix left = rz * omega * rz.adjoint();
        const CMatrix right = gw * gw.adjoint();
        PhaseQp qp;
        qp.a = hermitize(left.cwiseProduct(right.transpose()));
        qp.d = (gw * omega * rz.adjoint()).diagonal();
        return qp;
    }

    double qp_objective(const PhaseQp &qp, const CVector &phi)
    {
        return (phi.adjoint() * qp.a * phi).value().real() - 2.0 * (qp.d.transpose() * phi).value().real();
    }
}
