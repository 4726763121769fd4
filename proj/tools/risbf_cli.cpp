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

#include "risbf/config.hpp"
#include "risbf/experiments.hpp"
#include "risbf/interference.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace risbf;

namespace
{
    enum ExitCode
    {
        kOk = 0,
        kConfig = 1,
        kNumerical = 2,
        kIo = 3
    };

    struct Options
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> threads;
        std::optional<std::string> out;
        bool paper_scale = false;
        bool timing = false;
        bool print_config = false;
    };

    SystemConfig load(const Options &o)
    {
        ParsedConfig parsed = o.config_path.empty() ? parse_config_string("") : parse_config_file(o.config_path);
        SystemConfig cfg = parsed.config;
        for (const auto &d : parsed.defaults_applied)
            std::clog << "[config] default " << d << '\n';

        if (o.paper_scale && !cfg.paper_scale)
            cfg.apply_paper_scale();
        if (o.seed)
            cfg.seed = *o.seed;
        if (o.threads)
            cfg.threads = *o.threads;
        if (o.out)
            cfg.output_dir = *o.out;
        if (o.timing)
            cfg.timing = true;
        cfg.validate();
        if (cfg.paper_scale)
            std::clog << "[warning] paper-scale scenario: N_Tx=" << cfg.n_tx << ", N_Rx=" << cfg.n_rx
                      << ", N_R=" << cfg.n_ris_y * cfg.n_ris_z << ", " << cfg.trials
                      << " trials; expect long run times\n";
        return cfg;
    }

    fs::path prepare_output(const SystemConfig &cfg)
    {
        const fs::path dir(cfg.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir))
            throw IoError("cannot create output directory '" + cfg.output_dir + "'");
        return dir;
    }

    void write_text(const fs::path &path, const std::string &text)
    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw IoError("cannot open '" + path.string() + "' for writing");
        os << text;
        if (!os.flush())
            throw IoError("write to '" + path.string() + "' failed");
    }

    int cmd_run(const Options &o)
    {
        const SystemConfig cfg = load(o);
        const fs::path dir = prepare_output(cfg);
        write_text(dir / "config.ini", echo_config(cfg));

        const SweepSpec spec = SweepSpec::from_config(cfg);
        const auto records = run_sweep(spec);
        const auto summary = summarize(records);

        write_csv_file((dir / "records.csv").string(), records_table(records));
        write_csv_file((dir / "summary.csv").string(), summary_table(summary));
        if (spec.keep_traces)
            write_csv_file((dir / "traces.csv").string(), traces_table(records));

        std::size_t failed = 0;
        for (const auto &r : records)
            if (r.failed)
            {
                ++failed;
                std::clog << "[trial failed] " << model_label(r.model) << " value=" << format_double(r.sweep_value)
                          << " trial=" << r.trial << ": " << r.error << '\n';
            }

        std::cout << std::left << std::setw(14) << "model" << std::setw(14) << sweep_variable_name(cfg.family)
                  << std::setw(12) << "mean_se" << std::setw(12) << "stderr" << std::setw(6) << "n"
                  << "conv_rate\n";
        for (const auto &row : summary)
            std::cout << std::left << std::setw(14) << model_label(row.model) << std::setw(14)
                      << format_double(row.sweep_value) << std::setw(12) << std::setprecision(5) << row.mean_se
                      << std::setw(12) << row.stderr_se << std::setw(6) << row.n << row.conv_rate << '\n';
        std::cout << "wrote " << records.size() << " records to " << dir.string() << '\n';

        if (!records.empty() && failed == records.size())
            throw NumericalError("every trial failed");
        return kOk;
    }

    struct Check
    {
        std::string name;
        bool ok;
        std::string detail;
    };

    int cmd_validate(const Options &o)
    {
        const SystemConfig cfg = load(o);
        if (o.print_config)
            std::cout << echo_config(cfg);

        const ModelSpec model{cfg.model, cfg.model == ChannelModel::Piecewise ? cfg.k : 0};
        const TrialSetup setup = prepare_trial(cfg, model, trial_seed(cfg.seed, cfg.family, cfg.values.front(), 0));
        const ChannelSet &cs = setup.channels;
        std::vector<Check> checks;

        const auto rel = [](const CMatrix &a, const CMatrix &b) { return (a - b).norm() / std::max(b.norm(), 1e-300); };
        const double g_err = rel(cs.g_est + cs.delta_g + cs.mismatch, cs.g_true);
        const double r_err = rel(cs.r_est + cs.delta_r, cs.r_true);
        checks.push_back({"G_N = G_hat + dG + dM", g_err < 1e-12, format_double(g_err)});
        checks.push_back({"R = R_hat + dR", r_err < 1e-12, format_double(r_err)});

        const BeamformingState st = bcd_solve(cs, setup.solver, setup.phi_init);

        bool psd = true;
        std::string psd_detail = "ok";
        try
        {
            verify_hermitian_psd(sigma_design(cs, st.w, st.phi, setup.solver.noise_power).total(), "design covariance");
            verify_hermitian_psd(sigma_eval(cs, st.w, st.phi, setup.solver.noise_power).total(),
                                 "evaluation covariance");
        }
        catch (const NumericalError &e)
        {
            psd = false;
            psd_detail = e.what();
        }
        checks.push_back({"covariances Hermitian PSD", psd, psd_detail});

        const double inc = st.max_block_increase();
        checks.push_back({"objective non-increasing over Z, Omega, W", inc <= 1e-9, format_double(inc)});

        const double power = st.w.squaredNorm();
        checks.push_back({"transmit power feasible", power <= setup.solver.tx_power * (1 + 1e-9),
                          format_double(power / setup.solver.tx_power)});

        const double mod_err = (st.phi.cwiseAbs().array() - 1.0).abs().maxCoeff();
        checks.push_back({"unit-modulus RIS phases", mod_err < 1e-9, format_double(mod_err)});

        const CMatrix h = cs.r_est * st.phi.asDiagonal() * cs.g_est;
        const CMatrix sigma = sigma_design(cs, st.w, st.phi, setup.solver.noise_power).total();
        const CMatrix z = update_z(h, st.w, sigma);
        const double lhs = achievable_se(h, st.w, sigma) * std::log(2.0);
        const double rhs = -log_det_hpd(mse_matrix(z, st.w, h, sigma));
        const double id_err = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
        checks.push_back({"SE-MSE identity", id_err < 1e-8, format_double(id_err)});

        bool all = true;
        for (const auto &c : checks)
        {
            std::cout << (c.ok ? "ok    " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
            all = all && c.ok;
        }
        std::cout << model_label(model) << ": se_eval=" << format_double(st.se_eval)
                  << " se_design=" << format_double(st.se_design) << " outer_iters=" << st.outer_iters
                  << (st.converged ? " converged" : " not converged") << '\n';
        return all ? kOk : kNumerical;
    }

    int cmd_trace(const Options &o)
    {
        const SystemConfig cfg = load(o);
        const fs::path dir = prepare_output(cfg);
        const ModelSpec model{cfg.model, cfg.model == ChannelModel::Piecewise ? cfg.k : 0};
        const TrialSetup setup = prepare_trial(cfg, model, trial_seed(cfg.seed, cfg.family, cfg.values.front(), 0));
        const BeamformingState st = bcd_solve(setup.channels, setup.solver, setup.phi_init);
        write_csv_file((dir / "trace.csv").string(), iteration_table(st.iterations));
        std::cout << model_label(model) << ": " << st.outer_iters << " outer iterations, se_eval="
                  << format_double(st.se_eval) << ", se_design=" << format_double(st.se_design) << '\n'
                  << "wrote " << (dir / "trace.csv").string() << '\n';
        return kOk;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risbf: joint active/passive beamforming for RIS-aided MIMO links"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&o](CLI::App *sub) {
        sub->add_option("--config", o.config_path, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
        sub->add_option("--out", o.out, "output directory");
        sub->add_flag("--paper-scale", o.paper_scale, "full-size scenario (64 Tx, 8 Rx, 16x16 RIS, 50 trials)");
    };

    CLI::App *run = app.add_subcommand("run", "execute the configured sweep and write CSV files");
    add_common(run);
    run->add_flag("--timing", o.timing, "record wall-clock time per trial");

    CLI::App *validate = app.add_subcommand("validate", "check the configuration and invariants on one trial");
    add_common(validate);
    validate->add_flag("--print-config", o.print_config, "print the resolved configuration");

    CLI::App *trace = app.add_subcommand("trace", "run one trial and dump per-iteration values");
    add_common(trace);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try
    {
        if (*run)
            return cmd_run(o);
        if (*validate)
            return cmd_validate(o);
        return cmd_trace(o);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }
    catch (const IoError &e)
    {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
    catch (const NumericalError &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}
