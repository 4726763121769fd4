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

#include "risbf/csv.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace risbf
{
    std::string to_string(SweepFamily f)
    {
        switch (f)
        {
        case SweepFamily::Convergence:
            return "convergence";
        case SweepFamily::SeVsSnr:
            return "se_vs_snr";
        case SweepFamily::SeVsTau:
            return "se_vs_tau";
        case SweepFamily::SeVsNtx:
            return "se_vs_ntx";
        case SweepFamily::SeVsNris:
            return "se_vs_nris";
        }
        return "unknown";
    }

    SweepFamily sweep_family_from_string(const std::string &s)
    {
        for (auto f : {SweepFamily::Convergence, SweepFamily::SeVsSnr, SweepFamily::SeVsTau, SweepFamily::SeVsNtx,
                       SweepFamily::SeVsNris})
            if (to_string(f) == s)
                return f;
        throw ConfigError("unknown sweep family '" + s +
                          "' (expected convergence, se_vs_snr, se_vs_tau, se_vs_ntx or se_vs_nris)");
    }

    std::string sweep_variable_name(SweepFamily f)
    {
        switch (f)
        {
        case SweepFamily::Convergence:
            return "d_br";
        case SweepFamily::SeVsSnr:
            return "snr_db";
        case SweepFamily::SeVsTau:
            return "tau";
        case SweepFamily::SeVsNtx:
            return "n_tx";
        case SweepFamily::SeVsNris:
            return "n_ris";
        }
        return "value";
    }

    std::string model_label(const ModelSpec &m)
    {
        if (m.model == ChannelModel::Piecewise)
            return "piecewise:" + std::to_string(m.k);
        return to_string(m.model);
    }

    double SystemConfig::wavelength() const
    {
        return kSpeedOfLight / frequency_hz;
    }

    double SystemConfig::noise_power_w() const
    {
        return std::pow(10.0, (noise_dbm - 30.0) / 10.0);
    }

    double SystemConfig::tx_power_w() const
    {
        if (tx_power_dbm)
            return std::pow(10.0, (*tx_power_dbm - 30.0) / 10.0);
        return noise_power_w() * std::pow(10.0, snr_db.value_or(10.0) / 10.0);
    }

    double SystemConfig::effective_tau_r() const
    {
        return tau_r.value_or(tau_g);
    }

    std::size_t SystemConfig::effective_streams() const
    {
        return num_streams > 0 ? num_streams : std::min(n_tx, n_rx);
    }

    namespace
    {
        void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw ConfigError(msg);
        }

        void check_tau(double tau, const std::string &field)
        {
            require(tau >= 0.0 && tau < 1.0, field + ": tau must be in [0,1)");
        }

        void check_partition(std::size_t ny, std::size_t nz, std::size_t k, const std::string &field)
        {
            require(k >= 1, field + ": K must be >= 1");
            require(ny % k == 0, field + ": N_Ry not divisible by K");
            require(nz % k == 0, field + ": N_Rz not divisible by K");
        }

        bool is_integer_value(double v)
        {
            return std::isfinite(v) && v >= 1.0 && std::floor(v) == v;
        }

        std::size_t square_side(double n_ris)
        {
            const auto side = static_cast<std::size_t>(std::llround(std::sqrt(n_ris)));
            return side * side == static_cast<std::size_t>(n_ris) ? side : 0;
        }

        Position3D to_position(const std::array<double, 3> &p)
        {
            return Position3D(p[0], p[1], p[2]);
        }
    }

    void SystemConfig::validate() const
    {
        require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "scene.frequency_hz must be > 0");
        require(std::isfinite(spacing_wavelengths) && spacing_wavelengths > 0.0,
                "scene.spacing_wavelengths must be > 0");
        for (double v : tx_position)
            require(std::isfinite(v), "scene.tx_position must be finite");
        for (double v : ris_position)
            require(std::isfinite(v), "scene.ris_position must be finite");
        for (double v : rx_position)
            require(std::isfinite(v), "scene.rx_position must be finite");
        require(n_tx >= 1, "scene.n_tx must be >= 1");
        require(n_rx >= 1, "scene.n_rx must be >= 1");
        require(n_ris_y >= 1, "scene.n_ris_y must be >= 1");
        require(n_ris_z >= 1, "scene.n_ris_z must be >= 1");

        require(!(snr_db && tx_power_dbm), "power: specify either snr_db or tx_power_dbm, not both");
        require(snr_db || tx_power_dbm, "power: one of snr_db or tx_power_dbm is required");
        if (snr_db)
            require(std::isfinite(*snr_db), "power.snr_db must be finite");
        if (tx_power_dbm)
            require(std::isfinite(*tx_power_dbm), "power.tx_power_dbm must be finite");
        require(std::isfinite(noise_dbm), "power.noise_dbm must be finite");

        check_tau(tau_g, "channel.tau_g");
        if (tau_r)
            check_tau(*tau_r, "channel.tau_r");
        if (model == ChannelModel::Piecewise)
            check_partition(n_ris_y, n_ris_z, k, "channel.k");
        require(paths >= 1, "channel.paths must be >= 1");
        require(std::isfinite(nlos_relative_db), "channel.nlos_relative_db must be finite");

        require(max_outer >= 1, "solver.max_outer must be >= 1");
        require(outer_tolerance > 0.0, "solver.outer_tolerance must be > 0");
        require(adpm_epsilon > 0.0, "solver.adpm_epsilon must be > 0");
        require(adpm_delta1 > 0.0 && adpm_delta1 < 1.0, "solver.adpm_delta1 must be in (0,1)");
        require(adpm_delta2 > 1.0, "solver.adpm_delta2 must be > 1");
        require(adpm_kappa > 0.0, "solver.adpm_kappa must be > 0");
        require(adpm_max_iterations >= 1, "solver.adpm_max_iterations must be >= 1");

        require(!values.empty(), "sweep.values must not be empty");
        require(!models.empty(), "sweep.models must not be empty");
        require(trials >= 1, "sweep.trials must be >= 1");
        for (double v : values)
        {
            require(std::isfinite(v), "sweep.values must be finite");
            switch (family)
            {
            case SweepFamily::Convergence:
                require(v > 0.0, "sweep.values: d_br must be > 0");
                break;
            case SweepFamily::SeVsSnr:
                break;
            case SweepFamily::SeVsTau:
                check_tau(v, "sweep.values");
                break;
            case SweepFamily::SeVsNtx:
                require(is_integer_value(v), "sweep.values: n_tx must be a positive integer");
                break;
            case SweepFamily::SeVsNris:
                require(is_integer_value(v) && square_side(v) > 0,
                        "sweep.values: n_ris must be a perfect square (square RIS)");
                break;
            }
        }
        for (const auto &m : models)
        {
            if (m.model != ChannelModel::Piecewise)
            {
                require(m.k == 0, "sweep.models: K is only meaningful for the piecewise model");
                continue;
            }
            if (family == SweepFamily::SeVsNris)
            {
                require(m.k >= 1, "sweep.models: K must be >= 1");
                bool any = false;
                for (double v : values)
                    any = any || square_side(v) % m.k == 0;
                require(any, "sweep.models: " + model_label(m) + " divides none of the swept RIS sizes");
            }
            else
                check_partition(n_ris_y, n_ris_z, m.k, "sweep.models (" + model_label(m) + ")");
        }

        const Position3D tx = to_position(tx_position), ris = to_position(ris_position),
                         rx = to_position(rx_position);
        require((tx - ris).norm() > 0.0, "scene: Tx and RIS positions coincide");
        require((rx - ris).norm() > 0.0, "scene: Rx and RIS positions coincide");
    }

    SceneSpec SystemConfig::scene_spec(std::size_t partitions) const
    {
        const double d = spacing_wavelengths * wavelength();
        SceneSpec s;
        s.tx = ArraySpec::ula(n_tx, d, to_position(tx_position));
        s.ris = ArraySpec::upa(n_ris_y, n_ris_z, d, to_position(ris_position));
        s.rx = ArraySpec::ula(n_rx, d, to_position(rx_position));
        s.partitions = partitions;
        return s;
    }

    SolverConfig SystemConfig::solver_config() const
    {
        SolverConfig s;
        s.num_streams = effective_streams();
        s.tx_power = tx_power_w();
        s.noise_power = noise_power_w();
        s.max_outer = max_outer;
        s.outer_tolerance = outer_tolerance;
        s.adpm.epsilon = adpm_epsilon;
        s.adpm.delta1 = adpm_delta1;
        s.adpm.delta2 = adpm_delta2;
        s.adpm.kappa = adpm_kappa;
        s.adpm.max_iterations = adpm_max_iterations;
        s.phase_safeguard = phase_safeguard;
        return s;
    }

    ChannelOptions SystemConfig::channel_options(const SceneGeometry &geom, std::mt19937_64 &rng) const
    {
        ChannelOptions o;
        o.paths = draw_paths(geom, wavelength(), paths, nlos_relative_db, rng);
        o.normalize_path_loss = normalize_path_loss;
        o.convention = convention;
        return o;
    }

    void SystemConfig::apply_paper_scale()
    {
        n_tx = 64;
        n_rx = 8;
        n_ris_y = 16;
        n_ris_z = 16;
        trials = 50;
        paper_scale = true;
    }

    // ---- INI mapping -------------------------------------------------------

    namespace
    {
        struct Field
        {
            std::string section;
            std::string key;
            std::function<void(SystemConfig &, const std::string &)> set;
            // Empty optional: the key is omitted from the echo.
            std::function<std::optional<std::string>(const SystemConfig &)> get;
        };

        std::string fmt_bool(bool b)
        {
            return b ? "true" : "false";
        }

        bool parse_bool(const std::string &text, const std::string &field)
        {
            const std::string t = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
            if (t == "true" || t == "yes" || t == "on" || t == "1")
                return true;
            if (t == "false" || t == "no" || t == "off" || t == "0")
                return false;
            throw ConfigError(field + ": '" + text + "' is not a boolean");
        }

        std::size_t parse_count(const std::string &text, const std::string &field, long long min_value)
        {
            const long long v = parse_integer(text, field);
            if (v < min_value)
                throw ConfigError(field + " must be >= " + std::to_string(min_value));
            return static_cast<std::size_t>(v);
        }

        std::array<double, 3> parse_position(const std::string &text, const std::string &field)
        {
            const auto parts = split_list(text);
            if (parts.size() != 3)
                throw ConfigError(field + ": expected three comma-separated coordinates");
            return {parse_double(parts[0], field), parse_double(parts[1], field), parse_double(parts[2], field)};
        }

        std::string fmt_position(const std::array<double, 3> &p)
        {
            return format_double(p[0]) + ", " + format_double(p[1]) + ", " + format_double(p[2]);
        }

        std::vector<ModelSpec> parse_models(const std::string &text, const std::string &field)
        {
            std::vector<ModelSpec> out;
            for (const auto &item : split_list(text))
            {
                const auto colon = item.find(':');
                ModelSpec m;
                m.model = channel_model_from_string(boost::algorithm::trim_copy(item.substr(0, colon)));
                if (colon != std::string::npos)
                {
                    if (m.model != ChannelModel::Piecewise)
                        throw ConfigError(field + ": only the piecewise model takes a K value");
                    m.k = parse_count(item.substr(colon + 1), field, 1);
                }
                else if (m.model == ChannelModel::Piecewise)
                    throw ConfigError(field + ": piecewise entries need a K value, e.g. piecewise:8");
                out.push_back(m);
            }
            return out;
        }

        std::string fmt_models(const std::vector<ModelSpec> &models)
        {
            std::vector<std::string> parts;
            for (const auto &m : models)
                parts.push_back(model_label(m));
            return boost::algorithm::join(parts, ", ");
        }

        std::string fmt_values(const std::vector<double> &values)
        {
            std::vector<std::string> parts;
            for (double v : values)
                parts.push_back(format_double(v));
            return boost::algorithm::join(parts, ", ");
        }

        PhaseConvention parse_convention(const std::string &text, const std::string &field)
        {
            if (text == "centroid")
                return PhaseConvention::Centroid;
            if (text == "literal")
                return PhaseConvention::Literal;
            throw ConfigError(field + ": expected centroid or literal");
        }

        template <class T, class Parse>
        Field make_field(const char *section, const char *key, T SystemConfig::*member, Parse parse,
                         std::function<std::string(const T &)> fmt)
        {
            const std::string name = std::string(section) + "." + key;
            return Field{section, key,
                         [member, parse, name](SystemConfig &c, const std::string &v) { c.*member = parse(v, name); },
                         [member, fmt](const SystemConfig &c) -> std::optional<std::string> {
                             return fmt(c.*member);
                         }};
        }

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = [] {
                using C = SystemConfig;
                const auto dbl = [](const std::string &v, const std::string &f) { return parse_double(v, f); };
                const auto cnt1 = [](const std::string &v, const std::string &f) { return parse_count(v, f, 1); };
                const auto cnt0 = [](const std::string &v, const std::string &f) { return parse_count(v, f, 0); };
                const auto int1 = [](const std::string &v, const std::string &f) {
                    return static_cast<int>(parse_count(v, f, 1));
                };
                const auto boolean = [](const std::string &v, const std::string &f) { return parse_bool(v, f); };
                const std::function<std::string(const double &)> fd = [](const double &v) {
                    return format_double(v);
                };
                const std::function<std::string(const std::size_t &)> fz = [](const std::size_t &v) {
                    return std::to_string(v);
                };
                const std::function<std::string(const int &)> fi = [](const int &v) { return std::to_string(v); };
                const std::function<std::string(const bool &)> fb = [](const bool &v) { return fmt_bool(v); };
                const std::function<std::string(const std::array<double, 3> &)> fp = fmt_position;

                std::vector<Field> t;
                t.push_back(make_field("scene", "frequency_hz", &C::frequency_hz, dbl, fd));
                t.push_back(make_field("scene", "spacing_wavelengths", &C::spacing_wavelengths, dbl, fd));
                t.push_back(make_field("scene", "tx_position", &C::tx_position, parse_position, fp));
                t.push_back(make_field("scene", "ris_position", &C::ris_position, parse_position, fp));
                t.push_back(make_field("scene", "rx_position", &C::rx_position, parse_position, fp));
                t.push_back(make_field("scene", "n_tx", &C::n_tx, cnt1, fz));
                t.push_back(make_field("scene", "n_rx", &C::n_rx, cnt1, fz));
                t.push_back(make_field("scene", "n_ris_y", &C::n_ris_y, cnt1, fz));
                t.push_back(make_field("scene", "n_ris_z", &C::n_ris_z, cnt1, fz));

                t.push_back(Field{"power", "snr_db",
                                  [](C &c, const std::string &v) { c.snr_db = parse_double(v, "power.snr_db"); },
                                  [](const C &c) -> std::optional<std::string> {
                                      if (!c.snr_db)
                                          return std::nullopt;
                                      return format_double(*c.snr_db);
                                  }});
                t.push_back(Field{"power", "tx_power_dbm",
                                  [](C &c, const std::string &v) {
                                      c.tx_power_dbm = parse_double(v, "power.tx_power_dbm");
                                  },
                                  [](const C &c) -> std::optional<std::string> {
                                      if (!c.tx_power_dbm)
                                          return std::nullopt;
                                      return format_double(*c.tx_power_dbm);
                                  }});
                t.push_back(make_field("power", "noise_dbm", &C::noise_dbm, dbl, fd));

                t.push_back(Field{"channel", "model",
                                  [](C &c, const std::string &v) {
                                      c.model = channel_model_from_string(boost::algorithm::trim_copy(v));
                                  },
                                  [](const C &c) -> std::optional<std::string> { return to_string(c.model); }});
                t.push_back(make_field("channel", "k", &C::k, cnt1, fz));
                t.push_back(make_field("channel", "tau_g", &C::tau_g, dbl, fd));
                t.push_back(Field{"channel", "tau_r",
                                  [](C &c, const std::string &v) { c.tau_r = parse_double(v, "channel.tau_r"); },
                                  [](const C &c) -> std::optional<std::string> {
                                      if (!c.tau_r)
                                          return std::nullopt;
                                      return format_double(*c.tau_r);
                                  }});
                t.push_back(make_field("channel", "paths", &C::paths, cnt1, fz));
                t.push_back(make_field("channel", "nlos_relative_db", &C::nlos_relative_db, dbl, fd));
                t.push_back(Field{"channel", "normalization",
                                  [](C &c, const std::string &v) {
                                      const std::string s = boost::algorithm::trim_copy(v);
                                      if (s == "reference")
                                          c.normalize_path_loss = true;
                                      else if (s == "none")
                                          c.normalize_path_loss = false;
                                      else
                                          throw ConfigError("channel.normalization: expected reference or none");
                                  },
                                  [](const C &c) -> std::optional<std::string> {
                                      return c.normalize_path_loss ? "reference" : "none";
                                  }});
                t.push_back(Field{"channel", "phase_convention",
                                  [](C &c, const std::string &v) {
                                      c.convention =
                                          parse_convention(boost::algorithm::trim_copy(v), "channel.phase_convention");
                                  },
                                  [](const C &c) -> std::optional<std::string> {
                                      return c.convention == PhaseConvention::Centroid ? "centroid" : "literal";
                                  }});

                t.push_back(make_field("solver", "num_streams", &C::num_streams, cnt0, fz));
                t.push_back(make_field("solver", "max_outer", &C::max_outer, int1, fi));
                t.push_back(make_field("solver", "outer_tolerance", &C::outer_tolerance, dbl, fd));
                t.push_back(make_field("solver", "adpm_epsilon", &C::adpm_epsilon, dbl, fd));
                t.push_back(make_field("solver", "adpm_delta1", &C::adpm_delta1, dbl, fd));
                t.push_back(make_field("solver", "adpm_delta2", &C::adpm_delta2, dbl, fd));
                t.push_back(make_field("solver", "adpm_kappa", &C::adpm_kappa, dbl, fd));
                t.push_back(make_field("solver", "adpm_max_iterations", &C::adpm_max_iterations, int1, fi));
                t.push_back(make_field("solver", "phase_safeguard", &C::phase_safeguard, boolean, fb));

                t.push_back(Field{"sweep", "family",
                                  [](C &c, const std::string &v) {
                                      c.family = sweep_family_from_string(boost::algorithm::trim_copy(v));
                                  },
                                  [](const C &c) -> std::optional<std::string> { return to_string(c.family); }});
                t.push_back(Field{"sweep", "values",
                                  [](C &c, const std::string &v) {
                                      c.values.clear();
                                      for (const auto &p : split_list(v))
                                          c.values.push_back(parse_double(p, "sweep.values"));
                                  },
                                  [](const C &c) -> std::optional<std::string> { return fmt_values(c.values); }});
                t.push_back(Field{"sweep", "models",
                                  [](C &c, const std::string &v) { c.models = parse_models(v, "sweep.models"); },
                                  [](const C &c) -> std::optional<std::string> { return fmt_models(c.models); }});
                t.push_back(make_field("sweep", "trials", &C::trials, cnt1, fz));

                t.push_back(Field{"run", "seed",
                                  [](C &c, const std::string &v) {
                                      const long long s = parse_integer(v, "run.seed");
                                      if (s < 0)
                                          throw ConfigError("run.seed must be >= 0");
                                      c.seed = static_cast<std::uint64_t>(s);
                                  },
                                  [](const C &c) -> std::optional<std::string> { return std::to_string(c.seed); }});
                t.push_back(make_field("run", "threads", &C::threads, cnt0, fz));
                t.push_back(Field{"run", "output_dir",
                                  [](C &c, const std::string &v) { c.output_dir = boost::algorithm::trim_copy(v); },
                                  [](const C &c) -> std::optional<std::string> { return c.output_dir; }});
                t.push_back(make_field("run", "timing", &C::timing, boolean, fb));
                t.push_back(make_field("run", "paper_scale", &C::paper_scale, boolean, fb));
                return t;
            }();
            return table;
        }
    }

    ParsedConfig parse_config_string(const std::string &text)
    {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        std::string stripped;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);)
        {
            if (const auto pos = line.find(';'); pos != std::string::npos)
                line.erase(pos);
            stripped += line;
            stripped += '\n';
        }
        std::istringstream is(stripped);
        try
        {
            pt::read_ini(is, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
        }

        std::set<std::string> known;
        for (const auto &f : fields())
            known.insert(f.section + "." + f.key);

        std::vector<std::string> unknown;
        for (const auto &[section, body] : tree)
        {
            if (body.empty())
            {
                unknown.push_back(section);
                continue;
            }
            for (const auto &[key, value] : body)
                if (!known.count(section + "." + key))
                    unknown.push_back(section + "." + key);
        }
        if (!unknown.empty())
            throw ConfigError("unknown config keys: " + boost::algorithm::join(unknown, ", "));

        ParsedConfig out;
        SystemConfig &cfg = out.config;

        const bool has_snr = static_cast<bool>(tree.get_optional<std::string>(pt::ptree::path_type("power.snr_db", '.')));
        const bool has_ptx =
            static_cast<bool>(tree.get_optional<std::string>(pt::ptree::path_type("power.tx_power_dbm", '.')));
        if (has_snr && has_ptx)
            throw ConfigError("power: specify either snr_db or tx_power_dbm, not both");
        if (has_ptx)
            cfg.snr_db.reset();

        const auto paper = tree.get_optional<std::string>(pt::ptree::path_type("run.paper_scale", '.'));
        if (paper && parse_bool(*paper, "run.paper_scale"))
            cfg.apply_paper_scale();

        for (const auto &f : fields())
        {
            const auto value = tree.get_optional<std::string>(pt::ptree::path_type(f.section + "." + f.key, '.'));
            if (value)
                f.set(cfg, *value);
        }
        for (const auto &f : fields())
        {
            if (tree.get_optional<std::string>(pt::ptree::path_type(f.section + "." + f.key, '.')))
                continue;
            if (const auto shown = f.get(cfg))
                out.defaults_applied.push_back(f.section + "." + f.key + " = " + *shown);
            else if (f.section == "channel" && f.key == "tau_r")
                out.defaults_applied.push_back("channel.tau_r = tau_g (" + format_double(cfg.tau_g) + ")");
        }
        cfg.validate();
        return out;
    }

    ParsedConfig parse_config_file(const std::string &path)
    {
        std::ifstream is(path);
        if (!is)
            throw IoError("cannot read config file '" + path + "'");
        std::ostringstream ss;
        ss << is.rdbuf();
        return parse_config_string(ss.str());
    }

    std::string echo_config(const SystemConfig &cfg)
    {
        std::ostringstream os;
        std::string section;
        for (const auto &f : fields())
        {
            const auto value = f.get(cfg);
            if (!value)
                continue;
            if (f.section != section)
            {
                if (!section.empty())
                    os << '\n';
                section = f.section;
                os << '[' << section << "]\n";
            }
            os << f.key << " = " << *value << '\n';
        }
        return os.str();
    }
}
