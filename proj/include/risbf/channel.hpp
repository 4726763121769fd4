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

#ifndef RISBF_CHANNEL_HPP
#define RISBF_CHANNEL_HPP

#include "risbf/geometry.hpp"
#include "risbf/types.hpp"

#include <iosfwd>
#include <random>
#include <vector>

namespace risbf
{
    // Phase reference used by the structured (far-field and piece-wise) Tx-RIS models.
    //
    // Centroid: every steering vector is referenced to the centre of its (sub)array,
    //   which is where the path distance d_TR / r_i is measured, and each piece-wise
    //   factor carries the phase exp(-j 2pi (r_i - d_TR/2) / lambda). The product of
    //   the horizontal and vertical factors then reproduces the first-order path
    //   length r_h + r_v - d_TR of every element.
    // Literal: steering vectors lead with 1 at the first element and each factor
    //   carries exp(-j pi r_i / lambda), with no centroid correction.
    //
    // Both coincide for K = 1 apart from the global steering-vector reference.
    enum class PhaseConvention
    {
        Centroid,
        Literal
    };

    // [1, e^{-j 2pi/lambda d sin(theta)}, ..., e^{-j 2pi/lambda (N-1) d sin(theta)}]^T
    CVector steering_ula(double theta, std::size_t n, double spacing, double lambda);

    // kron(y-factor with step sin(az)cos(el), z-factor with step sin(az)sin(el)).
    CVector steering_upa(double az, double el, std::size_t ny, std::size_t nz, double spacing, double lambda);

    // Multipath description of the RIS -> Rx link.
    struct PathParams
    {
        std::vector<cdouble> gain;
        std::vector<double> rx_angle; // AoA at the Rx
        std::vector<double> ris_az;   // AoD at the RIS
        std::vector<double> ris_el;

        std::size_t size() const { return gain.size(); }
    };

    // Single deterministic LoS path with beta = lambda^2/(4 pi d_RR)^2 e^{-j 2pi d_RR/lambda}.
    PathParams los_path(const SceneGeometry &geom, double lambda);

    // LoS path plus (count - 1) NLoS paths with uniform random angles, a fixed
    // power offset relative to the LoS gain and a uniform random phase.
    PathParams draw_paths(const SceneGeometry &geom, double lambda, std::size_t count, double nlos_relative_db,
                          std::mt19937_64 &rng);

    // Exact spherical-wave channel: alpha * exp(-j 2pi d / lambda) per element pair.
    CMatrix build_near_field(const SceneGeometry &geom, double lambda);

    // gamma * a_R(psi_az, psi_el) * a_Tx(theta)^H, rank one.
    CMatrix build_far_field(const SceneGeometry &geom, double lambda,
                            PhaseConvention convention = PhaseConvention::Centroid);

    // (stack g^h_i  kron  stack g^v_i) * a_Tx(theta)^H with K x K subsurfaces.
    CMatrix build_piecewise(const SceneGeometry &geom, double lambda, std::size_t k,
                            PhaseConvention convention = PhaseConvention::Centroid);

    // sum_l beta_l a_Rx(phi_l) b_R(az_l, el_l)^H, dimensions N_Rx x N_R.
    CMatrix build_ris_rx(const SceneGeometry &geom, double lambda, const PathParams &paths);

    // Debug dump, one "row,col,re,im" line per entry with a header line.
    void write_matrix_csv(std::ostream &os, const CMatrix &m);
}

#endif
