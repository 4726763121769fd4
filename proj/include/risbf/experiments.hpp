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

#ifndef RISBF_EXPERIMENTS_HPP
#define RISBF_EXPERIMENTS_HPP

#include "risbf/bcd.hpp"
#include "risbf/config.hpp"
#include "risbf/csv.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risbf
{
    struct SweepSpec
    {
        SweepFamily family = SweepFamily::Convergence;
        std::vector<double> values;
        std::vector<ModelSpec> models;
        std::size_t trials = 1;
        SystemConfig base;
        std::uint64_t master_seed = 1;
        std::size_t threads = 1;
        bool timing = false;
        bool keep_traces = false;

        static SweepSpec from_config(const SystemConfig &cfg);
    };

    struct ExperimentRecord
    {
        SweepFamily family = SweepFamily::Convergence;
        ModelSpec model;
        std::string sweep_name;
        double sweep_value = 0.0;
        std::size_t trial = 0;
        std::uint64_t seed = 0;
        double se_eval = 0.0;
        double se_design = 0.0;
        int outer_iters = 0;
        bool converged = false;
        double wall_s = 0.0;

        bool failed = false;
        std::string error;
        std::vector<IterationRecord> trace;
    };

    struct SummaryRow
    {
        SweepFamily family = SweepFamily::Convergence;
        ModelSpec model;
        double sweep_value = 0.0;
        double mean_se = 0.0;
        double stderr_se = 0.0;
        std::size_t n = 0;
        double conv_rate = 0.0;
    };

    // Deterministic 64-bit seed derived from a master seed and a key sequence.
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key);

    // Trial seed shared by all design models at one sweep point, so every model
    // sees the same geometry, multipath and phase initialisation.
    std::uint64_t trial_seed(std::uint64_t master, SweepFamily family, double value, std::size_t trial);

    // Seed of the estimation-error draws for one model within a trial.
    std::uint64_t error_seed(std::uint64_t trial_seed, const ModelSpec &model);

    // Scenario for one sweep point.
    SystemConfig apply_sweep_value(const SystemConfig &base, SweepFamily family, double value);

    // False when the swept RIS size cannot be partitioned into K x K blocks.
    bool model_applicable(const SystemConfig &cfg, const ModelSpec &model);

    // Everything a single trial needs, assembled from a scenario and a trial seed.
    struct TrialSetup
    {
        SceneGeometry geometry;
        ChannelSet channels;
        CVector phi_init;
        SolverConfig solver;
    };

    TrialSetup prepare_trial(const SystemConfig &cfg, const ModelSpec &model, std::uint64_t seed);

    ExperimentRecord run_trial(const SweepSpec &spec, const ModelSpec &model, double value, std::size_t trial);

    // Runs every (value, model, trial) combination. The output order is
    // value-major, then model, then trial, independent of scheduling.
    std::vector<ExperimentRecord> run_sweep(const SweepSpec &spec);

    // Mean, standard error and convergence rate per (family, model, K, value).
    // Failed trials are excluded from the statistics.
    std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord> &records);

    CsvTable records_table(const std::vector<ExperimentRecord> &records);
    CsvTable summary_table(const std::vector<SummaryRow> &rows);
    CsvTable traces_table(const std::vector<ExperimentRecord> &records);
    CsvTable iteration_table(const std::vector<IterationRecord> &iterations);

    inline const std::vector<std::string> &records_columns()
    {
        static const std::vector<std::string> c{"family",      "model",   "K",          "sweep_name",
                                                "sweep_value", "trial",   "seed",       "se_eval_bits",
                                                "se_design_bits", "outer_iters", "converged", "wall_s"};
        return c;
    }

    inline const std::vector<std::string> &summary_columns()
    {
        static const std::vector<std::string> c{"family", "model", "K",      "sweep_value",
                                                "mean_se", "stderr_se", "n", "conv_rate"};
        return c;
    }

    inline const std::vector<std::string> &iteration_columns()
    {
        static const std::vector<std::string> c{"outer_iter", "objective", "se_design", "se_eval",
                                                "adpm_iters", "adpm_residual", "eta"};
        return c;
    }
}

#endif
