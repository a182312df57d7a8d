// SPDX-License-Identifier: Apache-2.0
//
// amafris - array-fed reflective surface channel modelling and system simulation
// Copyright (C) 2026 The amafris authors
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

#include "amafris/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace amafris
{
    namespace
    {
        namespace pt = boost::property_tree;

        double get_double(const pt::ptree &sec, const std::string &section, const std::string &key, double fallback)
        {
            const auto v = sec.get_optional<std::string>(key);
            if (!v)
                return fallback;
            char *end = nullptr;
            const double d = std::strtod(v->c_str(), &end);
            if (v->empty() || end != v->c_str() + v->size())
                throw ConfigError("[" + section + "] " + key + ": '" + *v + "' is not a number");
            return d;
        }

        std::uint64_t get_uint(const pt::ptree &sec, const std::string &section, const std::string &key,
                               std::uint64_t fallback)
        {
            const auto v = sec.get_optional<std::string>(key);
            if (!v)
                return fallback;
            std::size_t pos = 0;
            unsigned long long u = 0;
            try
            {
                u = std::stoull(*v, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (pos == 0 || pos != v->size() || v->front() == '-')
                throw ConfigError("[" + section + "] " + key + ": '" + *v + "' is not a non-negative integer");
            return u;
        }

        bool get_switch(const pt::ptree &sec, const std::string &section, const std::string &key, bool fallback)
        {
            const auto v = sec.get_optional<std::string>(key);
            if (!v)
                return fallback;
            if (*v == "on" || *v == "true" || *v == "1")
                return true;
            if (*v == "off" || *v == "false" || *v == "0")
                return false;
            throw ConfigError("[" + section + "] " + key + ": expected on/off, got '" + *v + "'");
        }

        void check_keys(const pt::ptree &sec, const std::string &section, const std::set<std::string> &allowed)
        {
            for (const auto &[key, child] : sec)
            {
                if (!allowed.count(key))
                    throw ConfigError("[" + section + "] unknown key '" + key + "'");
                if (!child.empty())
                    throw ConfigError("[" + section + "] " + key + ": nested values are not supported");
            }
        }
    }

    RunConfig parse_run_config(std::istream &is, const std::filesystem::path &base_dir)
    {
        std::stringstream buffer;
        buffer << is.rdbuf();
        RunConfig cfg;
        cfg.source_text = buffer.str();

        pt::ptree tree;
        try
        {
            std::istringstream in(cfg.source_text);
            pt::ini_parser::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError("config: " + std::string(e.what()));
        }

        const std::set<std::string> sections{"geometry", "pattern", "scenario", "tsource"};
        for (const auto &[name, sec] : tree)
        {
            if (!sections.count(name))
                throw ConfigError("config: unknown section [" + name + "]");
            if (sec.empty() && !sec.data().empty())
                throw ConfigError("config: key '" + name + "' outside of a section");
        }
        const pt::ptree empty;
        auto section = [&](const std::string &name) -> const pt::ptree &
        {
            const auto it = tree.find(name);
            return it == tree.not_found() ? empty : it->second;
        };

        {
            const auto &s = section("geometry");
            check_keys(s, "geometry",
                       {"ris_nx", "ris_ny", "amaf_nx", "amaf_ny", "spacing", "ris_spacing", "amaf_spacing",
                        "focal_distance", "frequency_ghz"});
            auto &g = cfg.geometry;
            g.ris_nx = get_uint(s, "geometry", "ris_nx", g.ris_nx);
            g.ris_ny = get_uint(s, "geometry", "ris_ny", g.ris_ny);
            g.amaf_nx = get_uint(s, "geometry", "amaf_nx", g.amaf_nx);
            g.amaf_ny = get_uint(s, "geometry", "amaf_ny", g.amaf_ny);
            const double spacing = get_double(s, "geometry", "spacing", 1.0);
            g.ris_spacing = get_double(s, "geometry", "ris_spacing", spacing);
            g.amaf_spacing = get_double(s, "geometry", "amaf_spacing", spacing);
            g.focal_distance = get_double(s, "geometry", "focal_distance", g.focal_distance);
            g.frequency_ghz = get_double(s, "geometry", "frequency_ghz", g.frequency_ghz);
            if (!(g.frequency_ghz > 0.0) || !std::isfinite(g.frequency_ghz))
                throw ConfigError("[geometry] frequency_ghz must be positive");
        }
        {
            const auto &s = section("pattern");
            check_keys(s, "pattern", {"peak_gain", "amplitude_model", "grid_step_deg"});
            auto &p = cfg.pattern;
            p.peak_gain = get_double(s, "pattern", "peak_gain", p.peak_gain);
            if (!(p.peak_gain > 0.0) || !std::isfinite(p.peak_gain))
                throw ConfigError("[pattern] peak_gain must be positive");
            if (auto m = s.get_optional<std::string>("amplitude_model"))
            {
                try
                {
                    p.amplitude_model = amplitude_model_from_string(*m);
                }
                catch (const ValidationError &e)
                {
                    throw ConfigError("[pattern] " + std::string(e.what()));
                }
            }
            p.grid_step_deg = get_double(s, "pattern", "grid_step_deg", p.grid_step_deg);
            if (!(p.grid_step_deg > 0.0) || p.grid_step_deg > 10.0)
                throw ConfigError("[pattern] grid_step_deg must be in (0, 10]");
        }
        {
            const auto &s = section("scenario");
            check_keys(s, "scenario",
                       {"reference_frequency_ghz", "frequency_compensation", "bandwidth_hz", "tx_power_dbm",
                        "noise_figure_db", "user_gain_dbi", "distance_min_m", "distance_max_m", "az_min_deg",
                        "az_max_deg", "el_min_deg", "el_max_deg", "drops", "pointing_sigma_deg", "phase_bits", "seed",
                        "sigma_ceiling"});
            auto &c = cfg.scenario;
            c.carrier_ghz = cfg.geometry.frequency_ghz;
            c.reference_ghz = get_double(s, "scenario", "reference_frequency_ghz", c.reference_ghz);
            c.frequency_compensation = get_switch(s, "scenario", "frequency_compensation", c.frequency_compensation);
            c.bandwidth_hz = get_double(s, "scenario", "bandwidth_hz", c.bandwidth_hz);
            c.tx_power_dbm = get_double(s, "scenario", "tx_power_dbm", c.tx_power_dbm);
            c.noise_figure_db = get_double(s, "scenario", "noise_figure_db", c.noise_figure_db);
            c.user_gain_dbi = get_double(s, "scenario", "user_gain_dbi", c.user_gain_dbi);
            c.distance_min_m = get_double(s, "scenario", "distance_min_m", c.distance_min_m);
            c.distance_max_m = get_double(s, "scenario", "distance_max_m", c.distance_max_m);
            c.az_min_deg = get_double(s, "scenario", "az_min_deg", c.az_min_deg);
            c.az_max_deg = get_double(s, "scenario", "az_max_deg", c.az_max_deg);
            c.el_min_deg = get_double(s, "scenario", "el_min_deg", c.el_min_deg);
            c.el_max_deg = get_double(s, "scenario", "el_max_deg", c.el_max_deg);
            c.drops = get_uint(s, "scenario", "drops", c.drops);
            c.pointing_sigma_deg = get_double(s, "scenario", "pointing_sigma_deg", c.pointing_sigma_deg);
            c.phase_bits = int(std::min<std::uint64_t>(get_uint(s, "scenario", "phase_bits", 0), 1000));
            c.seed = get_uint(s, "scenario", "seed", c.seed);
            cfg.sigma_ceiling = get_switch(s, "scenario", "sigma_ceiling", cfg.sigma_ceiling);
            try
            {
                validate(c);
            }
            catch (const ValidationError &e)
            {
                throw ConfigError("[scenario] " + std::string(e.what()));
            }
        }
        {
            const auto &s = section("tsource");
            check_keys(s, "tsource", {"kind", "file", "format", "frequency_ghz", "port_order"});
            auto &t = cfg.tsource;
            const std::string kind = s.get<std::string>("kind", "friis");
            if (kind == "friis")
                t.kind = TSourceKind::friis;
            else if (kind == "fullwave")
                t.kind = TSourceKind::fullwave;
            else
                throw ConfigError("[tsource] kind must be friis or fullwave, got '" + kind + "'");
            if (auto f = s.get_optional<std::string>("file"))
            {
                std::filesystem::path p(*f);
                t.file = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
            }
            const std::string format = s.get<std::string>("format", "auto");
            if (format == "touchstone")
                t.format = FileFormat::touchstone;
            else if (format == "csv")
                t.format = FileFormat::tblock_csv;
            else if (format != "auto")
                throw ConfigError("[tsource] format must be auto, touchstone or csv");
            if (s.get_optional<std::string>("frequency_ghz"))
                t.frequency_ghz = get_double(s, "tsource", "frequency_ghz", 0.0);
            if (auto order = s.get_optional<std::string>("port_order"))
            {
                try
                {
                    t.port_order = parse_port_order(*order);
                }
                catch (const ValidationError &e)
                {
                    throw ConfigError("[tsource] " + std::string(e.what()));
                }
            }
            if (t.kind == TSourceKind::fullwave && t.file.empty())
                throw ConfigError("[tsource] kind = fullwave needs a file");
        }
        return cfg;
    }

    RunConfig load_run_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read config file '" + path.string() + "'");
        return parse_run_config(in, path.parent_path());
    }

    SystemGeometry make_geometry(const GeometryConfig &g)
    {
        return place_feed(build_ura(g.ris_nx, g.ris_ny, g.ris_spacing), build_ura(g.amaf_nx, g.amaf_ny, g.amaf_spacing),
                          g.focal_distance);
    }

    ElementPattern make_pattern(const PatternConfig &p)
    {
        ElementPattern e;
        e.peak_gain = p.peak_gain;
        return e;
    }

    ChannelMatrix load_channel(const RunConfig &cfg, const SystemGeometry &sys, TSourceKind kind)
    {
        const double freq = cfg.tsource.frequency_ghz.value_or(cfg.geometry.frequency_ghz);
        if (kind == TSourceKind::friis)
            return build_t_friis(sys, make_pattern(cfg.pattern), freq, cfg.pattern.amplitude_model);

        if (cfg.tsource.file.empty())
            throw ConfigError("[tsource] no full-wave file configured");
        const auto ds = load_dataset(cfg.tsource.file, cfg.tsource.format, sys.ris.size(), sys.amaf.size(),
                                     cfg.tsource.port_order);
        check_against_geometry(ds, sys);
        return extract_t(ds, freq);
    }

    std::string canonical_text(const RunConfig &cfg)
    {
        std::ostringstream os;
        os << std::setprecision(17);
        const auto &g = cfg.geometry;
        os << "geometry.ris=" << g.ris_nx << "x" << g.ris_ny << "@" << g.ris_spacing << '\n'
           << "geometry.amaf=" << g.amaf_nx << "x" << g.amaf_ny << "@" << g.amaf_spacing << '\n'
           << "geometry.focal_distance=" << g.focal_distance << '\n'
           << "geometry.frequency_ghz=" << g.frequency_ghz << '\n'
           << "pattern.peak_gain=" << cfg.pattern.peak_gain << '\n'
           << "pattern.amplitude_model=" << to_string(cfg.pattern.amplitude_model) << '\n'
           << "pattern.grid_step_deg=" << cfg.pattern.grid_step_deg << '\n';
        const auto &c = cfg.scenario;
        os << "scenario.reference_frequency_ghz=" << c.reference_ghz << '\n'
           << "scenario.frequency_compensation=" << c.frequency_compensation << '\n'
           << "scenario.bandwidth_hz=" << c.bandwidth_hz << '\n'
           << "scenario.tx_power_dbm=" << c.tx_power_dbm << '\n'
           << "scenario.noise_figure_db=" << c.noise_figure_db << '\n'
           << "scenario.user_gain_dbi=" << c.user_gain_dbi << '\n'
           << "scenario.distance_m=" << c.distance_min_m << ".." << c.distance_max_m << '\n'
           << "scenario.az_deg=" << c.az_min_deg << ".." << c.az_max_deg << '\n'
           << "scenario.el_deg=" << c.el_min_deg << ".." << c.el_max_deg << '\n'
           << "scenario.drops=" << c.drops << '\n'
           << "scenario.pointing_sigma_deg=" << c.pointing_sigma_deg << '\n'
           << "scenario.phase_bits=" << c.phase_bits << '\n'
           << "scenario.seed=" << c.seed << '\n'
           << "scenario.sigma_ceiling=" << cfg.sigma_ceiling << '\n';
        const auto &t = cfg.tsource;
        os << "tsource.kind=" << (t.kind == TSourceKind::friis ? "friis" : "fullwave") << '\n'
           << "tsource.file=" << t.file.generic_string() << '\n'
           << "tsource.frequency_ghz=" << t.frequency_ghz.value_or(g.frequency_ghz) << '\n';
        return os.str();
    }
}
