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

#include "risbf/error_model.hpp"

#include <cmath>

namespace risbf
{
    std::string to_string(ChannelModel m)
    {
        switch (m)
        {
        case ChannelModel::Near:
            return "near";
        case ChannelModel::Piecewise:
            return "piecewise";
        case ChannelModel::Far:
            return "far";
        }
        return "unknown";
    }

    ChannelModel channel_model_from_string(const std::string &s)
    {
        if (s == "near")
            return ChannelModel::Near;
        if (s == "piecewise")
            return ChannelModel::Piecewise;
        if (s == "far")
            return ChannelModel::Far;
        throw ConfigError("unknown channel model '" + s + "' (expected near, piecewise or far)");
    }

    CMatrix sample_matrix_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, std::mt19937_64 &rng)
    {
        if (variance < 0.0)
            throw ConfigError("sample_matrix_gaussian: variance must be >= 0");
        CMatrix m(rows, cols);
        if (variance == 0.0)
        {
            m.setZero();
            return m;
        }
        std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                const double re = n(rng);
                const double im = n(rng);
                m(r, c) = cdouble(re, im);
            }
        return m;
    }

    CMatrix sample_matrix_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        return sample_matrix_gaussian(rows, cols, variance, rng);
    }

    double calibrate_variance(const CMatrix &g_struct, double tau)
    {
        if (!(tau >= 0.0 && tau < 1.0))
            throw ConfigError("tau must be in [0,1)");
        if (tau == 0.0 || g_struct.size() == 0)
            return 0.0;
        return tau * g_struct.squaredNorm() / ((1.0 - tau) * static_cast<double>(g_struct.size()));
    }

    ChannelSet make_channel_set(const SceneGeometry &geom, double lambda, ChannelModel model, std::size_t k,
                                const ErrorSpec &errors, const ChannelOptions &options)
    {
        ChannelSet cs;
        cs.model = model;
        cs.k = k;

        const double g_scale = options.normalize_path_loss ? std::pow(4.0 * kPi * geom.d_tr / lambda, 2) : 1.0;
        const double r_scale = options.normalize_path_loss ? std::pow(4.0 * kPi * geom.d_rr / lambda, 2) : 1.0;

        cs.g_true = g_scale * build_near_field(geom, lambda);
        switch (model)
        {
        case ChannelModel::Near:
            cs.g_model = cs.g_true;
            break;
        case ChannelModel::Piecewise:
            cs.g_model = g_scale * build_piecewise(geom, lambda, k, options.convention);
            break;
        case ChannelModel::Far:
            cs.g_model = g_scale * build_far_field(geom, lambda, options.convention);
            break;
        }
        // exactly zero for the near model
        cs.mismatch = cs.g_true - cs.g_model;
        cs.r_true = r_scale * build_ris_rx(geom, lambda, options.paths);

        cs.sigma2_g = calibrate_variance(cs.g_model, errors.tau_g);
        cs.sigma2_r = calibrate_variance(cs.r_true, errors.tau_r);

        std::mt19937_64 rng(errors.seed);
        cs.delta_g = sample_matrix_gaussian(cs.g_model.rows(), cs.g_model.cols(), cs.sigma2_g, rng);
        cs.delta_r = sample_matrix_gaussian(cs.r_true.rows(), cs.r_true.cols(), cs.sigma2_r, rng);
        cs.g_est = cs.g_model - cs.delta_g;
        cs.r_est = cs.r_true - cs.delta_r;
        return cs;
    }
}
