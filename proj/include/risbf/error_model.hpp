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

#ifndef RISBF_ERROR_MODEL_HPP
#define RISBF_ERROR_MODEL_HPP

#include "risbf/channel.hpp"
#include "risbf/geometry.hpp"
#include "risbf/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace risbf
{
    // Structured model the designer assumes for the Tx-RIS link.
    enum class ChannelModel
    {
        Near,
        Piecewise,
        Far
    };

    std::string to_string(ChannelModel m);
    ChannelModel channel_model_from_string(const std::string &s);

    struct ErrorSpec
    {
        double tau_g = 0.0; // normalised estimation error, Tx-RIS link
        double tau_r = 0.0; // normalised estimation error, RIS-Rx link
        std::uint64_t seed = 0;
    };

    struct ChannelOptions
    {
        PathParams paths;
        // Divide the Tx-RIS matrices by |gamma| and R by |beta_LoS| so the
        // reference far-field coefficients have unit magnitude.
        bool normalize_path_loss = true;
        PhaseConvention convention = PhaseConvention::Centroid;
    };

    // Everything known about one channel realisation. The designer only ever sees
    // g_est, r_est and the two variances; the rest feeds the evaluation.
    struct ChannelSet
    {
        ChannelModel model = ChannelModel::Near;
        std::size_t k = 1;

        CMatrix g_true;   // G_N
        CMatrix g_model;  // G_i
        CMatrix mismatch; // Delta M_i = G_N - G_i
        CMatrix delta_g;  // sampled estimation error
        CMatrix g_est;    // G_i - Delta G_i

        CMatrix r_true;
        CMatrix delta_r;
        CMatrix r_est;

        double sigma2_g = 0.0;
        double sigma2_r = 0.0;
    };

    // i.i.d. CN(0, variance) entries.
    CMatrix sample_matrix_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, std::mt19937_64 &rng);
    CMatrix sample_matrix_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, std::uint64_t seed);

    // Per-entry variance s.t. E||dG||^2 / E||G + dG||^2 = tau.
    double calibrate_variance(const CMatrix &g_struct, double tau);

    ChannelSet make_channel_set(const SceneGeometry &geom, double lambda, ChannelModel model, std::size_t k,
                                const ErrorSpec &errors, const ChannelOptions &options);
}

#endif
