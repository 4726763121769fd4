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

#include <catch_amalgamated.hpp>

#include "risbf/experiments.hpp"

#include <sstream>

using namespace risbf;
using Catch::Approx;

namespace
{
    SystemConfig tiny()
    {
        SystemConfig c = parse_config_string("[scene]\nn_tx=4\nn_rx=2\nn_ris_y=4\nn_ris_z=4\n"
                                             "[channel]\nk=2\n[solver]\nmax_outer=20\n[sweep]\nmodels=near,piecewise:2,far\n")
                             .config;
        return c;
    }

    SweepSpec tiny_spec(SweepFamily family, std::vector<double> values, std::vector<ModelSpec> models,
                        std::size_t trials)
    {
        SystemConfig c = tiny();
        c.family = family;
        c.values = std::move(values);
        c.models = std::move(models);
        c.trials = trials;
        c.threads = 1;
        return SweepSpec::from_config(c);
    }

    std::string dump(const CsvTable &t)
    {
        std::ostringstream os;
        write_csv(os, t);
        return os.str();
    }

    ExperimentRecord rec(ModelSpec m, double value, double se, bool conv, bool failed = false)
    {
        ExperimentRecord r;
        r.family = SweepFamily::SeVsSnr;
        r.model = m;
        r.sweep_value = value;
        r.se_eval = se;
        r.converged = conv;
        r.failed = failed;
        return r;
    }

    const ModelSpec kNear{ChannelModel::Near, 0};
    const ModelSpec kFar{ChannelModel::Far, 0};
    const ModelSpec kPw2{ChannelModel::Piecewise, 2};
}

TEST_CASE("Seed derivation")
{
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
    const auto t = trial_seed(7, SweepFamily::SeVsTau, 0.2, 3);
    CHECK(t == trial_seed(7, SweepFamily::SeVsTau, 0.2, 3));
    CHECK(t != trial_seed(7, SweepFamily::SeVsTau, 0.2, 4));
    CHECK(t != trial_seed(7, SweepFamily::SeVsTau, 0.3, 3));
    CHECK(t != trial_seed(7, SweepFamily::SeVsSnr, 0.2, 3));
    CHECK(trial_seed(7, SweepFamily::SeVsSnr, 0.0, 0) == trial_seed(7, SweepFamily::SeVsSnr, -0.0, 0));
    CHECK(error_seed(t, kNear) != error_seed(t, kFar));
    CHECK(error_seed(t, kPw2) != error_seed(t, ModelSpec{ChannelModel::Piecewise, 4}));
}

TEST_CASE("Sweep values map onto the scenario")
{
    const SystemConfig b = tiny();
    CHECK(apply_sweep_value(b, SweepFamily::Convergence, 20).tx_position[1] == -20.0);
    CHECK(apply_sweep_value(b, SweepFamily::Convergence, 35).tx_position[1] == -35.0);
    CHECK(apply_sweep_value(b, SweepFamily::SeVsSnr, 25).snr_db.value() == 25.0);
    CHECK(apply_sweep_value(b, SweepFamily::SeVsTau, 0.4).tau_g == 0.4);
    CHECK(apply_sweep_value(b, SweepFamily::SeVsNtx, 8).n_tx == 8);
    const SystemConfig r = apply_sweep_value(b, SweepFamily::SeVsNris, 36);
    CHECK(r.n_ris_y == 6);
    CHECK(r.n_ris_z == 6);
    CHECK_THROWS_AS(apply_sweep_value(b, SweepFamily::SeVsNris, 50), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(b, SweepFamily::SeVsNtx, 2.5), ConfigError);
    CHECK(model_applicable(r, kPw2));
    CHECK(!model_applicable(r, ModelSpec{ChannelModel::Piecewise, 4}));
    CHECK(model_applicable(r, kFar));
}

TEST_CASE("One trial gives one record")
{
    const SweepSpec spec = tiny_spec(SweepFamily::SeVsSnr, {10.0}, {kFar}, 1);
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 1);
    const ExperimentRecord &r = records[0];
    CHECK(!r.failed);
    CHECK(r.model == kFar);
    CHECK(r.sweep_name == "snr_db");
    CHECK(r.seed == trial_seed(spec.master_seed, SweepFamily::SeVsSnr, 10.0, 0));
    CHECK(r.se_eval >= 0.0);
    CHECK(r.se_design >= 0.0);
    CHECK(r.outer_iters >= 1);
    CHECK(r.wall_s == 0.0);
}

TEST_CASE("Without errors the near model sees identical covariances")
{
    const auto records = run_sweep(tiny_spec(SweepFamily::SeVsTau, {0.0}, {kNear}, 3));
    for (const auto &r : records)
        CHECK(r.se_eval == Approx(r.se_design).epsilon(1e-9));
}

TEST_CASE("Sweeps are deterministic and order-independent")
{
    SweepSpec a = tiny_spec(SweepFamily::SeVsTau, {0.0, 0.2}, {kNear, kPw2, kFar}, 2);
    SweepSpec b = a;
    b.threads = 3;
    const auto ra = run_sweep(a);
    const auto rb = run_sweep(b);
    CHECK(dump(records_table(ra)) == dump(records_table(rb)));
    CHECK(dump(summary_table(summarize(ra))) == dump(summary_table(summarize(rb))));

    // Adding a sweep point leaves the existing trials untouched.
    SweepSpec c = a;
    c.values = {0.0, 0.1, 0.2};
    const auto rc = run_sweep(c);
    for (const auto &x : ra)
    {
        bool found = false;
        for (const auto &y : rc)
            if (y.model == x.model && y.sweep_value == x.sweep_value && y.trial == x.trial)
            {
                found = true;
                CHECK(y.seed == x.seed);
                CHECK(y.se_eval == x.se_eval);
            }
        CHECK(found);
    }

    // Records come out value-major, then model, then trial.
    REQUIRE(ra.size() == 12);
    CHECK(ra[0].sweep_value == 0.0);
    CHECK(ra[0].model == kNear);
    CHECK(ra[1].trial == 1);
    CHECK(ra[2].model == kPw2);
    CHECK(ra[6].sweep_value == 0.2);
}

TEST_CASE("Trials share the environment across models")
{
    const SystemConfig c = tiny();
    const auto seed = trial_seed(1, SweepFamily::SeVsTau, 0.0, 0);
    const TrialSetup near = prepare_trial(c, kNear, seed);
    const TrialSetup far = prepare_trial(c, kFar, seed);
    CHECK((near.phi_init - far.phi_init).norm() == 0.0);
    CHECK((near.channels.g_true - far.channels.g_true).norm() == 0.0);
    CHECK((near.channels.r_true - far.channels.r_true).norm() == 0.0);
}

TEST_CASE("Failed trials are recorded, not thrown")
{
    SweepSpec spec = tiny_spec(SweepFamily::SeVsSnr, {10.0}, {kNear}, 2);
    spec.base.rx_position = spec.base.ris_position;
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 2);
    for (const auto &r : records)
    {
        CHECK(r.failed);
        CHECK(!r.error.empty());
        CHECK(std::isnan(r.se_eval));
    }
}

TEST_CASE("Summary statistics")
{
    const auto one = summarize({rec(kNear, 1.0, 2.5, true)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].mean_se == 2.5);
    CHECK(one[0].stderr_se == 0.0);
    CHECK(one[0].n == 1);
    CHECK(one[0].conv_rate == 1.0);

    const auto two = summarize({rec(kNear, 1.0, 2.0, true), rec(kNear, 1.0, 4.0, false)});
    REQUIRE(two.size() == 1);
    CHECK(two[0].mean_se == 3.0);
    CHECK(two[0].stderr_se == Approx(1.0));
    CHECK(two[0].conv_rate == 0.5);

    std::vector<ExperimentRecord> same(50, rec(kNear, 1.0, 7.25, true));
    const auto fifty = summarize(same);
    CHECK(fifty[0].stderr_se == 0.0);
    CHECK(fifty[0].n == 50);

    const auto mixed = summarize({rec(kFar, 2.0, 1.0, true), rec(kNear, 2.0, 1.0, true), rec(kNear, 1.0, 3.0, true),
                                  rec(kNear, 1.0, 99.0, false, true), rec(kPw2, 1.0, 2.0, true)});
    REQUIRE(mixed.size() == 4);
    CHECK(mixed[0].model == kNear);
    CHECK(mixed[0].sweep_value == 1.0);
    CHECK(mixed[0].mean_se == 3.0);
    CHECK(mixed[0].n == 1);
    CHECK(mixed[1].model == kNear);
    CHECK(mixed[1].sweep_value == 2.0);
}

TEST_CASE("CSV schemas")
{
    const SweepSpec spec = tiny_spec(SweepFamily::Convergence, {20.0}, {kPw2}, 1);
    const auto records = run_sweep(spec);
    const CsvTable rt = records_table(records);
    CHECK(rt.header == std::vector<std::string>{"family", "model", "K", "sweep_name", "sweep_value", "trial", "seed",
                                                "se_eval_bits", "se_design_bits", "outer_iters", "converged",
                                                "wall_s"});
    REQUIRE(rt.rows.size() == 1);
    CHECK(rt.rows[0][rt.column("family")] == "convergence");
    CHECK(rt.rows[0][rt.column("model")] == "piecewise");
    CHECK(rt.rows[0][rt.column("K")] == "2");
    CHECK(rt.rows[0][rt.column("sweep_name")] == "d_br");
    CHECK(rt.rows[0][rt.column("seed")] == std::to_string(records[0].seed));

    const CsvTable st = summary_table(summarize(records));
    CHECK(st.header == std::vector<std::string>{"family", "model", "K", "sweep_value", "mean_se", "stderr_se", "n",
                                                "conv_rate"});
    REQUIRE(st.rows.size() == 1);
    CHECK(parse_double(st.rows[0][st.column("mean_se")], "mean_se") == records[0].se_eval);

    const CsvTable tt = traces_table(records);
    REQUIRE(!records[0].trace.empty());
    CHECK(tt.rows.size() == records[0].trace.size());
    for (const auto &c : iteration_columns())
        CHECK_NOTHROW(tt.column(c));
    CHECK(iteration_table(records[0].trace).header == iteration_columns());
}

TEST_CASE("Summary CSV satisfies the plotting contract")
{
    // The renderer reads one curve per (model, K) from these columns and
    // reports a missing column by name.
    const auto rows = summarize({rec(kNear, 1.0, 2.0, true), rec(kPw2, 1.0, 3.0, true), rec(kFar, 1.0, 1.0, true)});
    std::stringstream ss;
    write_csv(ss, summary_table(rows));
    const CsvTable t = read_csv(ss);
    for (const char *c : {"family", "model", "K", "sweep_value", "mean_se", "stderr_se"})
        CHECK_NOTHROW(t.column(c));
    CHECK_THROWS_WITH(t.column("legend"), Catch::Matchers::ContainsSubstring("legend"));
    std::set<std::pair<std::string, std::string>> curves;
    for (const auto &r : t.rows)
        curves.insert({r[t.column("model")], r[t.column("K")]});
    CHECK(curves.size() == 3);
    CHECK(curves.count({"piecewise", "2"}) == 1);
    CHECK(curves.count({"near", "0"}) == 1);
}
