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

#ifndef RISBF_CONFIG_HPP
#define RISBF_CONFIG_HPP

#include "risbf/bcd.hpp"
#include "risbf/channel.hpp"
#include "risbf/error_model.hpp"
#include "risbf/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risbf
{
    enum class SweepFamily
    {
        Convergence, // sweeps the Tx-RIS offset along y (d_BR)
        SeVsSnr,
        SeVsTau,
        SeVsNtx,
        SeVsNris
    };

    std::string to_string(SweepFamily f);
    SweepFamily sweep_family_from_string(const std::string &s);
    std::string sweep_variable_name(SweepFamily f);

    // One curve of a sweep: the design model and, for the piece-wise model, K.
    struct ModelSpec
    {
        ChannelModel model = ChannelModel::Near;
        std::size_t k = 0; // 0 for near and far

        bool operator==(const ModelSpec &) const = default;
    };

    struct SystemConfig
    {
        // [scene]
        double frequency_hz = 30e9;
        double spacing_wavelengths = 0.5;
        std::array<double, 3> tx_position{10.0, -20.0, 5.0};
        std::array<double, 3> ris_position{0.0, 0.0, 10.0};
        std::array<double, 3> rx_position{100.0, 50.0, 5.0};
        std::size_t n_tx = 16;
        std::size_t n_rx = 4;
        std::size_t n_ris_y = 8;
        std::size_t n_ris_z = 8;

        // [power] SNR = 10 log10(P_Tx / sigma^2); exactly one of snr_db / tx_power_dbm is set.
        std::optional<double> snr_db = 10.0;
        std::optional<double> tx_power_dbm;
        double noise_dbm = -80.0;

        // [channel]
        ChannelModel model = ChannelModel::Piecewise;
        std::size_t k = 8;
        double tau_g = 0.0;
        std::optional<double> tau_r; // defaults to tau_g
        std::size_t paths = 3;
        double nlos_relative_db = -10.0;
        bool normalize_path_loss = true;
        PhaseConvention convention = PhaseConvention::Centroid;

        // [solver]
        std::size_t num_streams = 0; // 0: min(n_tx, n_rx)
        int max_outer = 100;
        double outer_tolerance = 1e-3;
        double adpm_epsilon = 1e-6;
        double adpm_delta1 = 0.95;
        double adpm_delta2 = 1.05;
        double adpm_kappa = 1e3;
        int adpm_max_iterations = 500;
        bool phase_safeguard = true;

        // [sweep]
        SweepFamily family = SweepFamily::Convergence;
        std::vector<double> values{20.0};
        std::vector<ModelSpec> models{{ChannelModel::Near, 0},
                                      {ChannelModel::Piecewise, 1},
                                      {ChannelModel::Piecewise, 2},
                                      {ChannelModel::Piecewise, 4},
                                      {ChannelModel::Piecewise, 8},
                                      {ChannelModel::Far, 0}};
        std::size_t trials = 20;

        // [run]
        std::uint64_t seed = 1;
        std::size_t threads = 0; // 0: hardware concurrency
        std::string output_dir = "out";
        bool timing = false;
        bool paper_scale = false;

        bool operator==(const SystemConfig &) const = default;

        double wavelength() const;
        double noise_power_w() const;
        double tx_power_w() const;
        double effective_tau_r() const;
        std::size_t effective_streams() const;

        // Throws ConfigError naming the offending field.
        void validate() const;

        // Array layout and partition for the configured scene and `k`.
        SceneSpec scene_spec(std::size_t k) const;
        SolverConfig solver_config() const;
        ChannelOptions channel_options(const SceneGeometry &geom, std::mt19937_64 &rng) const;

        // Switches to the full-size scenario: 64 Tx antennas, 8 Rx antennas, a 16 x 16 RIS, 50 trials.
        void apply_paper_scale();
    };

    struct ParsedConfig
    {
        SystemConfig config;
        std::vector<std::string> defaults_applied; // "section.key = value"
    };

    ParsedConfig parse_config_string(const std::string &text);
    ParsedConfig parse_config_file(const std::string &path);

    // INI text that parses back to an identical config.
    std::string echo_config(const SystemConfig &cfg);

    std::string model_label(const ModelSpec &m);
}

#endif
