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

#include "risbf/channel.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace risbf
{
    namespace
    {
        // Linear phase progression with a per-element step of `dircos`.
        CVector progression(double dircos, std::size_t n, double spacing, double lambda)
        {
            CVector v(static_cast<Eigen::Index>(n));
            const double step = -2.0 * kPi / lambda * spacing * dircos;
            for (std::size_t i = 0; i < n; ++i)
                v(static_cast<Eigen::Index>(i)) = std::polar(1.0, step * static_cast<double>(i));
            return v;
        }

        // Phase that moves the reference of `progression` from the first element to the centre.
        cdouble centring(double dircos, std::size_t n, double spacing, double lambda)
        {
            return std::polar(1.0, kPi / lambda * spacing * dircos * static_cast<double>(n - 1));
        }

        CVector kron(const CVector &a, const CVector &b)
        {
            CVector out(a.size() * b.size());
            for (Eigen::Index i = 0; i < a.size(); ++i)
                out.segment(i * b.size(), b.size()) = a(i) * b;
            return out;
        }

        double path_loss(double distance, double lambda)
        {
            const double x = lambda / (4.0 * kPi * distance);
            return x * x;
        }

        // exp(-j pi x / lambda) with x reduced modulo 2 lambda.
        cdouble half_phase(double x, double lambda)
        {
            const double frac = std::fmod(x, 2.0 * lambda) / lambda;
            return std::polar(1.0, -kPi * frac);
        }
    }

    CVector steering_ula(double theta, std::size_t n, double spacing, double lambda)
    {
        return progression(std::sin(theta), n, spacing, lambda);
    }

    CVector steering_upa(double az, double el, std::size_t ny, std::size_t nz, double spacing, double lambda)
    {
        return kron(progression(std::sin(az) * std::cos(el), ny, spacing, lambda),
                    progression(std::sin(az) * std::sin(el), nz, spacing, lambda));
    }

    PathParams los_path(const SceneGeometry &geom, double lambda)
    {
        PathParams p;
        p.gain.push_back(path_loss(geom.d_rr, lambda) * propagation_phase(geom.d_rr, lambda));
        p.rx_angle.push_back(geom.phi_rx_los);
        p.ris_az.push_back(geom.phi_ris_los_az);
        p.ris_el.push_back(geom.phi_ris_los_el);
        return p;
    }

    PathParams draw_paths(const SceneGeometry &geom, double lambda, std::size_t count, double nlos_relative_db,
                          std::mt19937_64 &rng)
    {
        if (count == 0)
            throw ConfigError("number of RIS-Rx paths must be >= 1");
        PathParams p = los_path(geom, lambda);
        const double amp = std::abs(p.gain.front()) * std::pow(10.0, nlos_relative_db / 20.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (std::size_t l = 1; l < count; ++l)
        {
            const double phase = 2.0 * kPi * uni(rng);
            p.gain.push_back(std::polar(amp, phase));
            p.rx_angle.push_back(kPi * (uni(rng) - 0.5));
            p.ris_az.push_back(0.5 * kPi * uni(rng));
            p.ris_el.push_back(kPi * (2.0 * uni(rng) - 1.0));
        }
        return p;
    }

    CMatrix build_near_field(const SceneGeometry &geom, double lambda)
    {
        const auto &d = geom.tx_ris_distance;
        CMatrix g(d.rows(), d.cols());
        for (Eigen::Index c = 0; c < d.cols(); ++c)
            for (Eigen::Index r = 0; r < d.rows(); ++r)
            {
                if (!(d(r, c) > 0.0))
                    throw NumericalError("build_near_field: zero element distance");
                g(r, c) = path_loss(d(r, c), lambda) * propagation_phase(d(r, c), lambda);
            }
        return g;
    }

    CMatrix build_far_field(const SceneGeometry &geom, double lambda, PhaseConvention convention)
    {
        if (!(geom.d_tr > 0.0))
            throw NumericalError("build_far_field: d_TR must be positive");
        const auto &tx = geom.tx;
        const auto &ris = geom.ris;
        const double s_tx = std::sin(geom.theta_tx);
        const double c_y = std::sin(geom.psi_ris_az) * std::cos(geom.psi_ris_el);
        const double c_z = std::sin(geom.psi_ris_az) * std::sin(geom.psi_ris_el);

        CVector a_tx = steering_ula(geom.theta_tx, tx.size(), tx.spacing, lambda);
        CVector a_ris = steering_upa(geom.psi_ris_az, geom.psi_ris_el, ris.count_y, ris.count_z, ris.spacing, lambda);
        if (convention == PhaseConvention::Centroid)
        {
            a_tx *= centring(s_tx, tx.size(), tx.spacing, lambda);
            a_ris *= centring(c_y, ris.count_y, ris.spacing, lambda) * centring(c_z, ris.count_z, ris.spacing, lambda);
        }
        const cdouble gamma = path_loss(geom.d_tr, lambda) * propagation_phase(geom.d_tr, lambda);
        return gamma * a_ris * a_tx.adjoint();
    }

    CMatrix build_piecewise(const SceneGeometry &geom, double lambda, std::size_t k, PhaseConvention convention)
    {
        const auto &tx = geom.tx;
        const auto &ris = geom.ris;
        const RisPartition part = k == geom.partition.k ? geom.partition : partition_ris(ris, tx.center, k);
        const std::size_t sy = ris.count_y / k, sz = ris.count_z / k;
        const bool centroid = convention == PhaseConvention::Centroid;

        CVector h(static_cast<Eigen::Index>(ris.count_y));
        CVector v(static_cast<Eigen::Index>(ris.count_z));
        for (std::size_t i = 0; i < k; ++i)
        {
            const auto &hs = part.horizontal[i];
            const double cy = std::sin(hs.angles.az) * std::cos(hs.angles.el);
            cdouble coeff = lambda / (4.0 * kPi * hs.distance);
            if (centroid)
                coeff *= half_phase(2.0 * hs.distance - geom.d_tr, lambda) * centring(cy, sy, ris.spacing, lambda);
            else
                coeff *= half_phase(hs.distance, lambda);
            h.segment(static_cast<Eigen::Index>(i * sy), static_cast<Eigen::Index>(sy)) =
                coeff * progression(cy, sy, ris.spacing, lambda);

            const auto &vs = part.vertical[i];
            const double cz = std::sin(vs.angles.az) * std::sin(vs.angles.el);
            coeff = lambda / (4.0 * kPi * vs.distance);
            if (centroid)
                coeff *= half_phase(2.0 * vs.distance - geom.d_tr, lambda) * centring(cz, sz, ris.spacing, lambda);
            else
                coeff *= half_phase(vs.distance, lambda);
            v.segment(static_cast<Eigen::Index>(i * sz), static_cast<Eigen::Index>(sz)) =
                coeff * progression(cz, sz, ris.spacing, lambda);
        }

        CVector a_tx = steering_ula(geom.theta_tx, tx.size(), tx.spacing, lambda);
        if (centroid)
            a_tx *= centring(std::sin(geom.theta_tx), tx.size(), tx.spacing, lambda);
        return kron(h, v) * a_tx.adjoint();
    }

    CMatrix build_ris_rx(const SceneGeometry &geom, double lambda, const PathParams &paths)
    {
        if (paths.size() == 0)
            throw ConfigError("build_ris_rx: at least one path is required");
        const auto &rx = geom.rx;
        const auto &ris = geom.ris;
        CMatrix r = CMatrix::Zero(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(ris.size()));
        for (std::size_t l = 0; l < paths.size(); ++l)
        {
            const CVector a = steering_ula(paths.rx_angle[l], rx.size(), rx.spacing, lambda);
            const CVector b = steering_upa(paths.ris_az[l], paths.ris_el[l], ris.count_y, ris.count_z, ris.spacing, lambda);
            r += paths.gain[l] * a * b.adjoint();
        }
        return r;
    }

    void write_matrix_csv(std::ostream &os, const CMatrix &m)
    {
        os << "row,col,re,im\n";
        os << std::setprecision(17);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                os << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
    }
}
