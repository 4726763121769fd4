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

#include "risbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

namespace risbf
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }

        std::uint64_t value_key(double v)
        {
            // +0.0 and -0.0 name the same sweep point
            return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
        }

        std::size_t square_side(double n_ris)
        {
            return static_cast<std::size_t>(std::llround(std::sqrt(n_ris)));
        }
    }

    SweepSpec SweepSpec::from_config(const SystemConfig &cfg)
    {
        SweepSpec s;
        s.family = cfg.family;
        s.values = cfg.values;
        s.models = cfg.models;
        s.trials = cfg.trials;
        s.base = cfg;
        s.master_seed = cfg.seed;
        s.threads = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
        s.timing = cfg.timing;
        s.keep_traces = cfg.family == SweepFamily::Convergence;
        return s;
    }

    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key)
    {
        std::uint64_t h = splitmix64(master);
        for (std::uint64_t k : key)
            h = splitmix64(h ^ splitmix64(k));
        return h;
    }

    std::uint64_t trial_seed(std::uint64_t master, SweepFamily family, double value, std::size_t trial)
    {
        return derive_seed(master, {static_cast<std::uint64_t>(family), value_key(value), trial});
    }

    std::uint64_t error_seed(std::uint64_t seed, const ModelSpec &model)
    {
        return derive_seed(seed, {static_cast<std::uint64_t>(model.model), model.k});
    }

    SystemConfig apply_sweep_value(const SystemConfig &base, SweepFamily family, double value)
    {
        SystemConfig c = base;
        switch (family)
        {
        case SweepFamily::Convergence:
            c.tx_position[1] = c.ris_position[1] - value;
            break;
        case SweepFamily::SeVsSnr:
            c.snr_db = value;
            c.tx_power_dbm.reset();
            break;
        case SweepFamily::SeVsTau:
            c.tau_g = value;
            break;
        case SweepFamily::SeVsNtx:
            if (!(value >= 1.0 && std::floor(value) == value))
                throw ConfigError("n_tx sweep value must be a positive integer");
            c.n_tx = static_cast<std::size_t>(value);
            break;
        case SweepFamily::SeVsNris:
        {
            const std::size_t side = value >= 1.0 ? square_side(value) : 0;
            if (side == 0 || static_cast<double>(side * side) != value)
                throw ConfigError("n_ris sweep value must be a perfect square");
            c.n_ris_y = c.n_ris_z = side;
            break;
        }
        }
        return c;
    }

    bool model_applicable(const SystemConfig &cfg, const ModelSpec &model)
    {
        if (model.model != ChannelModel::Piecewise)
            return true;
        return model.k >= 1 && cfg.n_ris_y % model.k == 0 && cfg.n_ris_z % model.k == 0;
    }

    TrialSetup prepare_trial(const SystemConfig &cfg, const ModelSpec &model, std::uint64_t seed)
    {
        const std::size_t k = std::max<std::size_t>(model.k, 1);
        const double lambda = cfg.wavelength();

        TrialSetup t;
        t.geometry = build_scene(cfg.scene_spec(model.model == ChannelModel::Piecewise ? k : 1));
        std::mt19937_64 env(seed);
        const ChannelOptions opts = cfg.channel_options(t.geometry, env);
        t.phi_init = random_phases(t.geometry.ris.size(), env);

        ErrorSpec errors;
        errors.tau_g = cfg.tau_g;
        errors.tau_r = cfg.effective_tau_r();
        errors.seed = error_seed(seed, model);
        t.channels = make_channel_set(t.geometry, lambda, model.model, k, errors, opts);
        t.solver = cfg.solver_config();
        return t;
    }

    ExperimentRecord run_trial(const SweepSpec &spec, const ModelSpec &model, double value, std::size_t trial)
    {
        ExperimentRecord rec;
        rec.family = spec.family;
        rec.model = model;
        rec.sweep_name = sweep_variable_name(spec.family);
        rec.sweep_value = value;
        rec.trial = trial;
        rec.seed = trial_seed(spec.master_seed, spec.family, value, trial);

        const auto start = std::chrono::steady_clock::now();
        try
        {
            const SystemConfig cfg = apply_sweep_value(spec.base, spec.family, value);
            const TrialSetup setup = prepare_trial(cfg, model, rec.seed);
            BeamformingState st = bcd_solve(setup.channels, setup.solver, setup.phi_init);
            rec.se_eval = st.se_eval;
            rec.se_design = st.se_design;
            rec.outer_iters = st.outer_iters;
            rec.converged = st.converged;
            if (spec.keep_traces)
                rec.trace = std::move(st.iterations);
        }
        catch (const std::exception &e)
        {
            rec.failed = true;
            rec.error = e.what();
            rec.se_eval = rec.se_design = std::nan("");
            rec.outer_iters = 0;
            rec.converged = false;
        }
        if (spec.timing)
            rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
    }

    std::vector<ExperimentRecord> run_sweep(const SweepSpec &spec)
    {
        if (spec.values.empty())
            throw ConfigError("sweep has no values");
        if (spec.models.empty())
            throw ConfigError("sweep has no models");
        if (spec.trials < 1)
            throw ConfigError("sweep needs at least one trial");

        struct Job
        {
            ModelSpec model;
            double value;
            std::size_t trial;
        };
        std::vector<Job> jobs;
        for (double v : spec.values)
        {
            const SystemConfig cfg = apply_sweep_value(spec.base, spec.family, v);
            for (const auto &m : spec.models)
            {
                if (!model_applicable(cfg, m))
                    continue;
                for (std::size_t t = 0; t < spec.trials; ++t)
                    jobs.push_back({m, v, t});
            }
        }

        std::vector<ExperimentRecord> out(jobs.size());
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
                out[i] = run_trial(spec, jobs[i].model, jobs[i].value, jobs[i].trial);
        };

        const std::size_t n_threads = std::clamp<std::size_t>(spec.threads, 1, std::max<std::size_t>(jobs.size(), 1));
        if (n_threads == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < n_threads; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        return out;
    }

    std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord> &records)
    {
        struct Acc
        {
            SummaryRow row;
            std::vector<double> se;
            std::size_t converged = 0;
        };
        std::vector<Acc> groups;
        std::map<std::tuple<int, int, std::size_t, std::uint64_t>, std::size_t> index;

        for (const auto &r : records)
        {
            const auto key = std::make_tuple(static_cast<int>(r.family), static_cast<int>(r.model.model), r.model.k,
                                             value_key(r.sweep_value));
            auto it = index.find(key);
            if (it == index.end())
            {
                it = index.emplace(key, groups.size()).first;
                Acc a;
                a.row.family = r.family;
                a.row.model = r.model;
                a.row.sweep_value = r.sweep_value;
                groups.push_back(a);
            }
            Acc &a = groups[it->second];
            if (r.failed)
                continue;
            a.se.push_back(r.se_eval);
            a.converged += r.converged ? 1 : 0;
        }

        std::vector<SummaryRow> rows;
        for (auto &a : groups)
        {
            const std::size_t n = a.se.size();
            a.row.n = n;
            if (n > 0)
            {
                double mean = 0.0;
                for (double v : a.se)
                    mean += v;
                mean /= static_cast<double>(n);
                double ss = 0.0;
                for (double v : a.se)
                    ss += (v - mean) * (v - mean);
                a.row.mean_se = mean;
                a.row.stderr_se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
                a.row.conv_rate = static_cast<double>(a.converged) / static_cast<double>(n);
            }
            else
            {
                a.row.mean_se = a.row.stderr_se = std::nan("");
            }
            rows.push_back(a.row);
        }
        std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow &a, const SummaryRow &b) {
            return std::make_tuple(static_cast<int>(a.model.model), a.model.k, a.sweep_value) <
                   std::make_tuple(static_cast<int>(b.model.model), b.model.k, b.sweep_value);
        });
        return rows;
    }

    CsvTable records_table(const std::vector<ExperimentRecord> &records)
    {
        CsvTable t;
        t.header = records_columns();
        for (const auto &r : records)
            t.rows.push_back({to_string(r.family), to_string(r.model.model), std::to_string(r.model.k), r.sweep_name,
                              format_double(r.sweep_value), std::to_string(r.trial), std::to_string(r.seed),
                              format_double(r.se_eval), format_double(r.se_design), std::to_string(r.outer_iters),
                              r.converged ? "1" : "0", format_double(r.wall_s)});
        return t;
    }

    CsvTable summary_table(const std::vector<SummaryRow> &rows)
    {
        CsvTable t;
        t.header = summary_columns();
        for (const auto &r : rows)
            t.rows.push_back({to_string(r.family), to_string(r.model.model), std::to_string(r.model.k),
                              format_double(r.sweep_value), format_double(r.mean_se), format_double(r.stderr_se),
                              std::to_string(r.n), format_double(r.conv_rate)});
        return t;
    }

    CsvTable traces_table(const std::vector<ExperimentRecord> &records)
    {
        CsvTable t;
        t.header = {"family", "model", "K", "sweep_value", "trial"};
        for (const auto &c : iteration_columns())
            t.header.push_back(c);
        for (const auto &r : records)
            for (const auto &it : r.trace)
                t.rows.push_back({to_string(r.family), to_string(r.model.model), std::to_string(r.model.k),
                                  format_double(r.sweep_value), std::to_string(r.trial), std::to_string(it.outer_iter),
                                  format_double(it.objective), format_double(it.se_design), format_double(it.se_eval),
                                  std::to_string(it.adpm_iters), format_double(it.adpm_residual),
                                  format_double(it.eta)});
        return t;
    }

    CsvTable iteration_table(const std::vector<IterationRecord> &iterations)
    {
        CsvTable t;
        t.header = iteration_columns();
        for (const auto &it : iterations)
            t.rows.push_back({std::to_string(it.outer_iter), format_double(it.objective), format_double(it.se_design),
                              format_double(it.se_eval), std::to_string(it.adpm_iters),
                              format_double(it.adpm_residual), format_double(it.eta)});
        return t;
    }
}
