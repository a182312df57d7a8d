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

#include "amafris/cli.hpp"
#include "amafris/config.hpp"
#include "amafris/farfield.hpp"
#include "amafris/ingest.hpp"
#include "amafris/pem.hpp"
#include "amafris/syssim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifndef AMAFRIS_VERSION
#define AMAFRIS_VERSION "unknown"
#endif

namespace amafris::cli
{
    namespace
    {
        namespace fs = std::filesystem;
        using json = nlohmann::ordered_json;

        struct Globals
        {
            std::string config;
            std::optional<std::uint64_t> seed;
            std::string out_dir = ".";
        };

        json number(double v)
        {
            return std::isfinite(v) ? json(v) : json(nullptr);
        }

        json number(const std::optional<double> &v)
        {
            return v ? number(*v) : json(nullptr);
        }

        std::string dump(const json &j)
        {
            return j.dump(2) + "\n";
        }

        std::string kind_name(TSourceKind k)
        {
            return k == TSourceKind::friis ? "friis" : "fullwave";
        }

        TSourceKind parse_kind(const std::string &s)
        {
            if (s == "friis")
                return TSourceKind::friis;
            if (s == "fullwave")
                return TSourceKind::fullwave;
            throw ValidationError("unknown T source '" + s + "' (friis or fullwave)");
        }

        bool parse_switch(const std::string &s)
        {
            if (s == "on")
                return true;
            if (s == "off")
                return false;
            throw ValidationError("expected on or off, got '" + s + "'");
        }

        RunConfig load_config(const Globals &g, OutputStage &stage)
        {
            RunConfig cfg;
            if (!g.config.empty())
            {
                cfg = load_run_config(g.config);
                stage.add_input(g.config);
            }
            else
                cfg.scenario.carrier_ghz = cfg.geometry.frequency_ghz;
            if (g.seed)
                cfg.scenario.seed = *g.seed;
            return cfg;
        }

        PowerIterationOptions pem_options(const RunConfig &cfg)
        {
            PowerIterationOptions opt;
            opt.seed = cfg.scenario.seed;
            return opt;
        }

        struct PreparedChannel
        {
            TSourceKind kind = TSourceKind::friis;
            ChannelMatrix raw;
            ChannelMatrix used;
            double sigma1_before = 0.0;
            double applied_scale = 1.0;
            SingularTriplet pem;
            ExcitationVector excitation;
            PowerTaper taper;
        };

        PreparedChannel prepare(const RunConfig &cfg, const SystemGeometry &sys, TSourceKind kind, bool ceiling,
                                OutputStage &stage)
        {
            PreparedChannel pc;
            pc.kind = kind;
            if (kind == TSourceKind::fullwave)
                stage.add_input(cfg.tsource.file);
            pc.raw = load_channel(cfg, sys, kind);
            const auto opt = pem_options(cfg);
            const auto c = apply_passivity_ceiling(pc.raw, opt);
            pc.sigma1_before = c.sigma1_before;
            if (ceiling)
            {
                pc.used = c.matrix;
                pc.applied_scale = c.applied_scale;
            }
            else
                pc.used = pc.raw;
            pc.pem = principal_triplet(pc.used, opt);
            pc.excitation = ris_excitation(pc.used, pc.pem.w1, sys.ris.n_x, sys.ris.n_y);
            pc.taper = power_taper_db(pc.excitation);
            return pc;
        }

        json channel_json(const PreparedChannel &pc)
        {
            json j;
            j["tsource"] = kind_name(pc.kind);
            j["provenance"] = to_string(pc.used.provenance);
            j["frequency_ghz"] = pc.used.frequency_ghz;
            j["sigma1_before_ceiling"] = pc.sigma1_before;
            j["ceiling_applied"] = pc.used.passivity_scaled;
            j["applied_scale"] = pc.applied_scale;
            j["sigma1"] = pc.pem.sigma1;
            j["pem_iterations"] = pc.pem.iterations;
            j["pem_residual"] = pc.pem.residual;
            j["taper_db"] = number(pc.taper.db);
            j["taper_has_null"] = pc.taper.has_null;
            return j;
        }

        PatternGrid broadside_pattern(const RunConfig &cfg, const SystemGeometry &sys, const PreparedChannel &pc,
                                      const Direction &dir, int bits, GainNormalization norm, double step)
        {
            auto phases = steering_phases(sys.ris, dir, pc.excitation);
            if (bits > 0)
                phases = quantize_phases(phases, bits);
            GridSpec grid;
            grid.step_deg = step;
            return radiation_pattern(sys.ris, pc.excitation, phases, make_pattern(cfg.pattern), grid, norm);
        }

        json metrics_json(const PatternMetrics &m)
        {
            json j;
            j["peak_dbi"] = m.peak_dbi;
            j["peak_az_deg"] = m.peak_az_deg;
            j["peak_el_deg"] = m.peak_el_deg;
            j["sll_db"] = number(m.sll_db);
            j["sidelobe_peak_dbi"] = number(m.sidelobe_peak_dbi);
            j["hpbw_az_deg"] = m.hpbw_az_deg;
            j["hpbw_el_deg"] = m.hpbw_el_deg;
            return j;
        }

        std::string to_csv(const SParameterDataset &ds)
        {
            std::ostringstream os;
            write_tblock_csv(os, ds);
            return os.str();
        }

        void report_written(const OutputStage &stage, const std::vector<fs::path> &files)
        {
            std::cout << "wrote " << files.size() << " files to " << stage.out_dir().string() << '\n';
        }

        // build-friis
        int cmd_build_friis(const Globals &g)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("build-friis");
            StageTimer total;
            const auto cfg = load_config(g, stage);
            stage.set_config(cfg.source_text, canonical_text(cfg));
            const auto sys = make_geometry(cfg.geometry);

            StageTimer t_build;
            const auto t = build_t_friis(sys, make_pattern(cfg.pattern), cfg.geometry.frequency_ghz,
                                         cfg.pattern.amplitude_model);
            stage.record_timing("build", t_build.seconds());

            StageTimer t_pem;
            const auto pem = principal_triplet(t, pem_options(cfg));
            const auto exc = ris_excitation(t, pem.w1, sys.ris.n_x, sys.ris.n_y);
            const auto taper = power_taper_db(exc);
            stage.record_timing("pem", t_pem.seconds());

            const Eigen::JacobiSVD<CMatrix> svd(t.entries);
            const auto &sv = svd.singularValues();

            json s;
            s["n_ris"] = t.n_ris();
            s["n_amaf"] = t.n_amaf();
            s["frequency_ghz"] = t.frequency_ghz;
            s["focal_distance_hw"] = sys.focal_distance;
            s["f_over_d"] = sys.f_over_d;
            s["amplitude_model"] = to_string(cfg.pattern.amplitude_model);
            s["element_peak_gain"] = cfg.pattern.peak_gain;
            s["sigma1"] = pem.sigma1;
            s["singular_values"] = std::vector<double>(sv.data(), sv.data() + sv.size());
            s["frobenius_norm"] = t.entries.norm();
            s["pem_iterations"] = pem.iterations;
            s["pem_residual"] = pem.residual;
            s["taper_db"] = number(taper.db);
            s["taper_has_null"] = taper.has_null;
            s["passivity_ceiling_scale"] = pem.sigma1 > 1.0 ? 1.0 / pem.sigma1 : 1.0;

            stage.add("t_friis.csv", to_csv(partial_dataset_from_blocks({t.frequency_ghz}, {t.entries})));
            stage.add("summary.json", dump(s));
            stage.record_timing("total", total.seconds());
            const auto files = stage.commit();
            std::cout << std::setprecision(6) << "sigma1 = " << pem.sigma1 << ", taper = " << taper.db << " dB\n";
            report_written(stage, files);
            return exit_ok;
        }

        // import
        struct ImportArgs
        {
            std::string file;
            std::string format = "auto";
            std::string port_order;
            std::optional<double> frequency;
        };

        int cmd_import(const Globals &g, const ImportArgs &a)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("import");
            StageTimer total;
            auto cfg = load_config(g, stage);
            stage.set_config(cfg.source_text, canonical_text(cfg));
            const auto sys = make_geometry(cfg.geometry);

            std::optional<FileFormat> fmt;
            if (a.format == "touchstone")
                fmt = FileFormat::touchstone;
            else if (a.format == "csv")
                fmt = FileFormat::tblock_csv;
            else if (a.format != "auto")
                throw ValidationError("--format must be auto, touchstone or csv");
            auto order = cfg.tsource.port_order;
            if (!a.port_order.empty())
                order = parse_port_order(a.port_order);

            StageTimer t_load;
            if (!fs::exists(a.file))
                throw ValidationError("cannot open '" + a.file + "'");
            stage.add_input(a.file);
            const auto ds = load_dataset(a.file, fmt, sys.ris.size(), sys.amaf.size(), order);
            check_against_geometry(ds, sys);
            stage.record_timing("load", t_load.seconds());

            bool have_coupling = true;
            for (std::size_t f = 0; f < ds.n_frequencies(); ++f)
                have_coupling = have_coupling && ds.has_amaf_block(f);
            CouplingReport report;
            if (have_coupling)
                report = coupling_report(ds, sys.amaf);
            else
            {
                report.frequencies_ghz = ds.frequencies_ghz;
                report.warnings.push_back("WARN: file has no AMAF-AMAF block; coupling report is empty");
            }
            std::ostringstream coupling_csv;
            write_coupling_csv(coupling_csv, report);

            json cj;
            cj["available"] = have_coupling;
            cj["frequencies_ghz"] = report.frequencies_ghz;
            cj["pairs"] = report.pairs.size();
            auto &summary = cj["summary"] = json::array();
            for (const auto &c : report.summary)
                summary.push_back({{"class", to_string(c.cls)},
                                   {"pairs", c.pairs},
                                   {"min_db", c.min_db},
                                   {"max_db", c.max_db}});
            cj["warnings"] = report.warnings;
            for (const auto &w : report.warnings)
                std::cerr << w << '\n';

            const double freq = a.frequency.value_or(cfg.tsource.frequency_ghz.value_or(cfg.geometry.frequency_ghz));
            StageTimer t_pem;
            const auto raw = extract_t(ds, freq);
            const auto ceil = apply_passivity_ceiling(raw, pem_options(cfg));
            const auto pem = principal_triplet(ceil.matrix, pem_options(cfg));
            const auto exc = ris_excitation(ceil.matrix, pem.w1, sys.ris.n_x, sys.ris.n_y);
            const auto taper = power_taper_db(exc);
            stage.record_timing("pem", t_pem.seconds());

            StageTimer t_pat;
            const auto phases = steering_phases(sys.ris, Direction{}, exc);
            GridSpec grid;
            grid.step_deg = cfg.pattern.grid_step_deg;
            const auto pattern = radiation_pattern(sys.ris, exc, phases, make_pattern(cfg.pattern), grid);
            const auto metrics = pattern_metrics(pattern);
            stage.record_timing("pattern", t_pat.seconds());

            json s;
            s["file"] = a.file;
            s["n_ports"] = ds.n_ports;
            s["n_frequencies"] = ds.n_frequencies();
            s["frequencies_ghz"] = ds.frequencies_ghz;
            s["partial"] = ds.partial;
            s["frequency_ghz"] = freq;
            s["sigma1_before_ceiling"] = ceil.sigma1_before;
            s["ceiling_applied"] = ceil.matrix.passivity_scaled;
            s["applied_scale"] = ceil.applied_scale;
            s["sigma1"] = pem.sigma1;
            s["taper_db"] = number(taper.db);
            s["taper_has_null"] = taper.has_null;
            s["broadside"] = metrics_json(metrics);

            stage.add("dataset.csv", to_csv(ds));
            stage.add("coupling.csv", coupling_csv.str());
            stage.add("coupling.json", dump(cj));
            stage.add("import_summary.json", dump(s));
            stage.record_timing("total", total.seconds());
            const auto files = stage.commit();
            std::cout << std::setprecision(6) << "sigma1 = " << ceil.sigma1_before
                      << (ceil.matrix.passivity_scaled ? " (ceiling applied)" : " (ceiling no-op)")
                      << ", taper = " << taper.db << " dB, peak = " << metrics.peak_dbi << " dBi\n";
            report_written(stage, files);
            return exit_ok;
        }

        // pem
        struct SourceArgs
        {
            std::string tsource;
            std::string sigma_ceiling;
        };

        TSourceKind source_kind(const RunConfig &cfg, const SourceArgs &a)
        {
            return a.tsource.empty() ? cfg.tsource.kind : parse_kind(a.tsource);
        }

        bool ceiling_on(const RunConfig &cfg, const SourceArgs &a)
        {
            return a.sigma_ceiling.empty() ? cfg.sigma_ceiling : parse_switch(a.sigma_ceiling);
        }

        int cmd_pem(const Globals &g, const SourceArgs &a)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("pem");
            StageTimer total;
            const auto cfg = load_config(g, stage);
            stage.set_config(cfg.source_text, canonical_text(cfg));
            const auto sys = make_geometry(cfg.geometry);
            const auto pc = prepare(cfg, sys, source_kind(cfg, a), ceiling_on(cfg, a), stage);

            json j = channel_json(pc);
            auto &w = j["w1"] = json::array();
            for (Eigen::Index i = 0; i < pc.pem.w1.size(); ++i)
                w.push_back({pc.pem.w1(i).real(), pc.pem.w1(i).imag()});

            std::ostringstream grid;
            write_excitation_grid_csv(grid, pc.excitation);
            stage.add("excitation_grid.csv", grid.str());
            stage.add("pem.json", dump(j));
            stage.record_timing("total", total.seconds());
            const auto files = stage.commit();
            std::cout << std::setprecision(6) << "sigma1 = " << pc.pem.sigma1 << ", taper = " << pc.taper.db
                      << " dB\n";
            report_written(stage, files);
            return exit_ok;
        }

        // pattern
        struct PatternArgs
        {
            SourceArgs source;
            double az_deg = 0.0;
            double el_deg = 0.0;
            int bits = 0;
            std::optional<double> step;
            std::string normalization = "array-gain";
        };

        int cmd_pattern(const Globals &g, const PatternArgs &a)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("pattern");
            StageTimer total;
            const auto cfg = load_config(g, stage);
            stage.set_config(cfg.source_text, canonical_text(cfg));
            GainNormalization norm;
            if (a.normalization == "array-gain")
                norm = GainNormalization::array_gain;
            else if (a.normalization == "directivity")
                norm = GainNormalization::directivity;
            else
                throw ValidationError("--normalization must be array-gain or directivity");
            const auto sys = make_geometry(cfg.geometry);
            const auto pc = prepare(cfg, sys, source_kind(cfg, a.source), ceiling_on(cfg, a.source), stage);

            StageTimer t_pat;
            const Direction dir{deg2rad(a.az_deg), deg2rad(a.el_deg)};
            const auto grid =
                broadside_pattern(cfg, sys, pc, dir, a.bits, norm, a.step.value_or(cfg.pattern.grid_step_deg));
            const auto m = pattern_metrics(grid);
            stage.record_timing("pattern", t_pat.seconds());

            std::ostringstream full, cut_az, cut_el;
            write_pattern_grid_csv(full, grid);
            write_pattern_cut_csv(cut_az, grid, CutAxis::azimuth);
            write_pattern_cut_csv(cut_el, grid, CutAxis::elevation);

            json j = channel_json(pc);
            j["steer_az_deg"] = a.az_deg;
            j["steer_el_deg"] = a.el_deg;
            j["phase_bits"] = a.bits;
            j["grid_step_deg"] = grid.step_deg;
            j["normalization"] = a.normalization;
            j["metrics"] = metrics_json(m);

            stage.add("pattern_grid.csv", full.str());
            stage.add("cut_az.csv", cut_az.str());
            stage.add("cut_el.csv", cut_el.str());
            stage.add("pattern.json", dump(j));
            stage.record_timing("total", total.seconds());
            const auto files = stage.commit();
            std::cout << std::setprecision(6) << "peak = " << m.peak_dbi << " dBi at (" << m.peak_az_deg << ", "
                      << m.peak_el_deg << ") deg";
            if (m.sll_db)
                std::cout << ", SLL = " << *m.sll_db << " dB";
            std::cout << '\n';
            report_written(stage, files);
            return exit_ok;
        }

        // simulate
        struct SimulateArgs
        {
            std::string tsource;
            std::string sigma_ceiling;
            std::optional<double> sigma_deg;
            std::optional<int> bits;
            std::optional<std::size_t> drops;
        };

        std::string drops_csv(const SimulationResult &r)
        {
            std::ostringstream os;
            os << "drop,distance_m,az_deg,el_deg,pointing_az_deg,pointing_el_deg,path_gain_dB,rx_power_dBm,snr_dB,rate\n"
               << std::setprecision(17);
            for (std::size_t i = 0; i < r.drops.size(); ++i)
            {
                const auto &d = r.drops[i];
                os << i << ',' << d.user.distance_m << ',' << rad2deg(d.user.az) << ',' << rad2deg(d.user.el) << ','
                   << rad2deg(d.pointing_offset.az) << ',' << rad2deg(d.pointing_offset.el) << ','
                   << d.link.path_gain_db << ',' << d.link.rx_power_dbm << ',' << d.link.snr_db << ',' << d.link.rate
                   << '\n';
            }
            return os.str();
        }

        std::string cdf_csv(const RateCdf &cdf)
        {
            std::ostringstream os;
            write_cdf_csv(os, cdf);
            return os.str();
        }

        json percentiles_json(const RateCdf &cdf)
        {
            json j;
            for (double p : {1.0, 10.0, 50.0, 90.0})
                j["p" + std::to_string(int(p))] = quantile(cdf, p);
            return j;
        }

        json compare_json(const CompareReport &c, const std::string &a, const std::string &b)
        {
            json j;
            j["a"] = a;
            j["b"] = b;
            auto &p = j["percentiles"] = json::array();
            for (const auto &d : c.percentiles)
                p.push_back({{"percentile", d.percentile}, {"rate_a", d.rate_a}, {"rate_b", d.rate_b}, {"delta", d.delta}});
            j["ks_distance"] = c.ks_distance;
            j["max_abs_delta"] = c.max_abs_delta;
            j["rate_span"] = c.rate_span;
            j["close_match"] = c.close_match;
            return j;
        }

        struct SourceRun
        {
            PreparedChannel channel;
            SimulationResult result;
            json report;
        };

        SourceRun run_source(const RunConfig &cfg, const ScenarioConfig &scn, const SystemGeometry &sys,
                             TSourceKind kind, bool ceiling, OutputStage &stage)
        {
            SourceRun run;
            StageTimer t_sim;
            run.channel = prepare(cfg, sys, kind, ceiling, stage);
            const auto element = make_pattern(cfg.pattern);
            const std::string fingerprint =
                sha256_hex(canonical_text(cfg) + "source=" + kind_name(kind) + "\nceiling=" + (ceiling ? "on" : "off"))
                    .substr(0, 16);
            run.result = simulate(scn, run.channel.used, sys.ris, element, fingerprint);

            // Per-drop SNR(without ceiling) - SNR(with ceiling)
            json delta;
            if (run.channel.sigma1_before > 1.0)
            {
                const auto c = apply_passivity_ceiling(run.channel.raw, pem_options(cfg));
                const auto &other = ceiling ? run.channel.raw : c.matrix;
                const auto alt = simulate(scn, other, sys.ris, element);
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (std::size_t i = 0; i < alt.drops.size(); ++i)
                {
                    const double off = ceiling ? alt.drops[i].link.snr_db : run.result.drops[i].link.snr_db;
                    const double on = ceiling ? run.result.drops[i].link.snr_db : alt.drops[i].link.snr_db;
                    lo = std::min(lo, off - on);
                    hi = std::max(hi, off - on);
                }
                delta = {{"expected", 20.0 * std::log10(run.channel.sigma1_before)}, {"min", lo}, {"max", hi}};
            }
            else
                delta = {{"expected", 0.0}, {"min", 0.0}, {"max", 0.0}};

            auto &j = run.report = channel_json(run.channel);
            j["sigma_ceiling"] = ceiling ? "on" : "off";
            j["fingerprint"] = fingerprint;
            j["ceiling_snr_delta_db"] = delta;
            j["rate_percentiles"] = percentiles_json(run.result.cdf);
            j["warnings"] = run.result.warnings;
            for (const auto &w : run.result.warnings)
                std::cerr << "WARN: " << w << '\n';
            stage.record_timing("simulate_" + kind_name(kind), t_sim.seconds());
            return run;
        }

        int cmd_simulate(const Globals &g, const SimulateArgs &a)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("simulate");
            StageTimer total;
            auto cfg = load_config(g, stage);
            if (a.sigma_deg)
                cfg.scenario.pointing_sigma_deg = *a.sigma_deg;
            if (a.bits)
                cfg.scenario.phase_bits = *a.bits;
            if (a.drops)
                cfg.scenario.drops = *a.drops;
            const bool ceiling = a.sigma_ceiling.empty() ? cfg.sigma_ceiling : parse_switch(a.sigma_ceiling);
            cfg.sigma_ceiling = ceiling;
            validate(cfg.scenario);
            stage.set_config(cfg.source_text, canonical_text(cfg));
            const auto sys = make_geometry(cfg.geometry);

            std::vector<TSourceKind> kinds;
            if (a.tsource == "both")
                kinds = {TSourceKind::friis, TSourceKind::fullwave};
            else
                kinds = {a.tsource.empty() ? cfg.tsource.kind : parse_kind(a.tsource)};

            std::vector<SourceRun> runs;
            for (auto k : kinds)
                runs.push_back(run_source(cfg, cfg.scenario, sys, k, ceiling, stage));

            json report;
            report["scenario"] = {{"carrier_ghz", cfg.scenario.carrier_ghz},
                                  {"reference_ghz", cfg.scenario.reference_ghz},
                                  {"frequency_compensation_db",
                                   cfg.scenario.frequency_compensation
                                       ? frequency_compensation_db(cfg.scenario.carrier_ghz, cfg.scenario.reference_ghz)
                                       : 0.0},
                                  {"noise_power_dbm", noise_power_dbm(cfg.scenario)},
                                  {"drops", cfg.scenario.drops},
                                  {"pointing_sigma_deg", cfg.scenario.pointing_sigma_deg},
                                  {"phase_bits", cfg.scenario.phase_bits},
                                  {"seed", cfg.scenario.seed}};
            auto &sources = report["sources"] = json::array();
            for (const auto &r : runs)
                sources.push_back(r.report);

            if (runs.size() == 1)
            {
                stage.add("cdf.csv", cdf_csv(runs[0].result.cdf));
                stage.add("drops.csv", drops_csv(runs[0].result));
            }
            else
            {
                for (const auto &r : runs)
                {
                    stage.add("cdf_" + kind_name(r.channel.kind) + ".csv", cdf_csv(r.result.cdf));
                    stage.add("drops_" + kind_name(r.channel.kind) + ".csv", drops_csv(r.result));
                }
                const auto cmp = compare_runs(runs[0].result.cdf, runs[1].result.cdf);
                const auto cj = compare_json(cmp, "cdf_friis.csv", "cdf_fullwave.csv");
                report["compare"] = cj;
                stage.add("compare.json", dump(cj));
            }
            stage.add("report.json", dump(report));
            stage.record_timing("total", total.seconds());
            const auto files = stage.commit();
            std::cout << std::setprecision(6);
            for (const auto &r : runs)
                std::cout << kind_name(r.channel.kind) << ": median rate = " << quantile(r.result.cdf, 50.0)
                          << " bit/s/Hz\n";
            report_written(stage, files);
            return exit_ok;
        }

        // compare
        int cmd_compare(const Globals &g, const std::string &a, const std::string &b)
        {
            OutputStage stage(g.out_dir);
            stage.set_command("compare");
            auto read = [&](const std::string &path)
            {
                std::ifstream in(path, std::ios::binary);
                if (!in)
                    throw ValidationError("cannot open '" + path + "'");
                stage.add_input(path);
                return read_cdf_csv(in);
            };
            const auto ca = read(a);
            const auto cb = read(b);
            const auto rep = compare_runs(ca, cb);
            stage.add("compare.json", dump(compare_json(rep, a, b)));
            const auto files = stage.commit();
            std::cout << std::setprecision(6) << "KS = " << rep.ks_distance << ", median delta = "
                      << rep.percentiles[2].delta << ", close_match = " << (rep.close_match ? "true" : "false")
                      << '\n';
            report_written(stage, files);
            return exit_ok;
        }
    }

    int run_cli(int argc, char **argv)
    {
        CLI::App app{"amafris - array-fed RIS channel modelling and rate simulation", "amafris"};
        app.set_version_flag("--version", AMAFRIS_VERSION);
        app.require_subcommand(1);
        app.fallthrough();

        Globals g;
        app.add_option("--config", g.config, "Run-config file");
        app.add_option("--seed", g.seed, "Override the scenario seed");
        app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();

        auto *build = app.add_subcommand("build-friis", "Build T from the Friis model");

        ImportArgs imp;
        auto *import = app.add_subcommand("import", "Import a full-wave S-parameter file");
        import->add_option("file", imp.file, "Touchstone (.sNp/.ts) or T-block CSV file")->required();
        import->add_option("--format", imp.format, "auto, touchstone or csv")->capture_default_str();
        import->add_option("--port-order", imp.port_order, "Solver ports in canonical order, e.g. 5-260,1-4");
        import->add_option("--frequency", imp.frequency, "Frequency for T extraction in GHz");

        SourceArgs pem_args;
        auto *pem = app.add_subcommand("pem", "Principal eigenmode and RIS excitation");
        pem->add_option("--tsource", pem_args.tsource, "friis or fullwave");
        pem->add_option("--sigma-ceiling", pem_args.sigma_ceiling, "on or off");

        PatternArgs pat;
        auto *pattern = app.add_subcommand("pattern", "Far-field pattern of the PEM-excited RIS");
        pattern->add_option("--tsource", pat.source.tsource, "friis or fullwave");
        pattern->add_option("--sigma-ceiling", pat.source.sigma_ceiling, "on or off");
        pattern->add_option("--az", pat.az_deg, "Steering azimuth in degrees")->capture_default_str();
        pattern->add_option("--el", pat.el_deg, "Steering elevation in degrees")->capture_default_str();
        pattern->add_option("--bits", pat.bits, "Phase-shifter bits, 0 = continuous")->capture_default_str();
        pattern->add_option("--step", pat.step, "Grid step in degrees");
        pattern->add_option("--normalization", pat.normalization, "array-gain or directivity")->capture_default_str();

        SimulateArgs sim;
        auto *simulate = app.add_subcommand("simulate", "Monte-Carlo rate CDF");
        simulate->add_option("--tsource", sim.tsource, "friis, fullwave or both");
        simulate->add_option("--sigma", sim.sigma_deg, "Pointing-error standard deviation in degrees");
        simulate->add_option("--bits", sim.bits, "Phase-shifter bits, 0 = continuous");
        simulate->add_option("--drops", sim.drops, "Number of user drops");
        simulate->add_option("--sigma-ceiling", sim.sigma_ceiling, "on or off");

        std::string cmp_a, cmp_b;
        auto *compare = app.add_subcommand("compare", "Compare two rate CDF files");
        compare->add_option("a", cmp_a, "Reference cdf.csv")->required();
        compare->add_option("b", cmp_b, "Other cdf.csv")->required();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            const int rc = app.exit(e);
            return rc == 0 ? exit_ok : exit_usage;
        }

        try
        {
            if (*build)
                return cmd_build_friis(g);
            if (*import)
                return cmd_import(g, imp);
            if (*pem)
                return cmd_pem(g, pem_args);
            if (*pattern)
                return cmd_pattern(g, pat);
            if (*simulate)
                return cmd_simulate(g, sim);
            if (*compare)
                return cmd_compare(g, cmp_a, cmp_b);
        }
        catch (const ParseError &e)
        {
            std::cerr << "parse error: " << e.what() << '\n';
            return exit_parse;
        }
        catch (const ValidationError &e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const ConvergenceError &e)
        {
            std::cerr << "convergence error: " << e.what() << '\n';
            return exit_runtime;
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return exit_runtime;
        }
        return exit_usage;
    }
}
