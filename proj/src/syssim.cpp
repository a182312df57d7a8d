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

#include "amafris/syssim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

namespace amafris
{
    void validate(const ScenarioConfig &c)
    {
        auto finite = [](double v, const char *name)
        {
            if (!std::isfinite(v))
                throw ValidationError(std::string("scenario: ") + name + " must be finite");
        };
        finite(c.tx_power_dbm, "tx_power_dbm");
        finite(c.noise_figure_db, "noise_figure_db");
        finite(c.user_gain_dbi, "user_gain_dbi");
        finite(c.pointing_sigma_deg, "pointing_sigma_deg");
        if (!(c.carrier_ghz > 0.0) || !std::isfinite(c.carrier_ghz))
            throw ValidationError("scenario: carrier frequency must be positive");
        if (!(c.reference_ghz > 0.0) || !std::isfinite(c.reference_ghz))
            throw ValidationError("scenario: reference frequency must be positive");
        if (!(c.bandwidth_hz > 0.0) || !std::isfinite(c.bandwidth_hz))
            throw ValidationError("scenario: bandwidth must be positive");
        if (c.drops < 1)
            throw ValidationError("scenario: at least one drop required");
        if (c.pointing_sigma_deg < 0.0)
            throw ValidationError("scenario: pointing error sigma must be >= 0");
        if (c.phase_bits < 0 || c.phase_bits > 30)
            throw ValidationError("scenario: phase_bits must be 0 (continuous) or 1..30");
        if (!(c.distance_min_m > 0.0) || !(c.distance_max_m >= c.distance_min_m) || !std::isfinite(c.distance_max_m))
            throw ValidationError("scenario: empty user region (need 0 < distance_min_m <= distance_max_m)");
        auto angle_range = [](double lo, double hi, const char *name)
        {
            if (!(lo <= hi) || !(lo > -90.0) || !(hi < 90.0))
                throw ValidationError(std::string("scenario: empty or invalid ") + name +
                                      " range (need -90 < min <= max < 90 deg)");
        };
        angle_range(c.az_min_deg, c.az_max_deg, "azimuth");
        angle_range(c.el_min_deg, c.el_max_deg, "elevation");
    }

    double noise_power_dbm(const ScenarioConfig &cfg)
    {
        return -174.0 + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
    }

    double frequency_compensation_db(double f_new_ghz, double f_ref_ghz)
    {
        if (!(f_new_ghz > 0.0) || !(f_ref_ghz > 0.0))
            throw ValidationError("frequency_compensation_db: frequencies must be positive");
        return 20.0 * std::log10(f_new_ghz / f_ref_ghz);
    }

    std::mt19937_64 drop_stream(std::uint64_t seed, std::uint64_t drop, std::uint32_t stream)
    {
        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(drop),
                          std::uint32_t(drop >> 32), stream};
        return std::mt19937_64(seq);
    }

    namespace
    {
        double lerp_uniform(std::mt19937_64 &rng, double lo, double hi)
        {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double u = unit(rng);
            return lo + (hi - lo) * u;
        }

        enum : std::uint32_t
        {
            stream_user = 0,
            stream_pointing = 1
        };
    }

    std::vector<UserDrop> draw_users(const ScenarioConfig &cfg)
    {
        validate(cfg);
        const double hw = half_wavelength_m(cfg.carrier_ghz);
        std::vector<UserDrop> users(cfg.drops);
        for (std::size_t i = 0; i < cfg.drops; ++i)
        {
            auto rng = drop_stream(cfg.seed, i, stream_user);
            UserDrop &u = users[i];
            u.distance_m = lerp_uniform(rng, cfg.distance_min_m, cfg.distance_max_m);
            u.az = deg2rad(lerp_uniform(rng, cfg.az_min_deg, cfg.az_max_deg));
            u.el = deg2rad(lerp_uniform(rng, cfg.el_min_deg, cfg.el_max_deg));
            u.position_hw = direction_vector({u.az, u.el}) * (u.distance_m / hw);
        }
        return users;
    }

    std::optional<std::string> far_field_warning(const ScenarioConfig &cfg, const ArrayLayout &ris)
    {
        const double hw = half_wavelength_m(cfg.carrier_ghz);
        const double aperture_m = ris.spacing * std::hypot(double(ris.n_x), double(ris.n_y)) * hw;
        const double fraunhofer_m = 2.0 * aperture_m * aperture_m / (2.0 * hw);
        if (cfg.distance_min_m >= fraunhofer_m)
            return std::nullopt;
        std::ostringstream msg;
        msg << "users as close as " << cfg.distance_min_m << " m are inside the RIS far-field distance "
            << fraunhofer_m << " m";
        return msg.str();
    }

    LinkResult end_to_end_rate(const ChannelMatrix &t, const CVector &w, const ArrayLayout &ris,
                               const ElementPattern &element, const UserDrop &user, const ScenarioConfig &cfg,
                               const Direction &pointing_offset, int bits)
    {
        if (std::size_t(t.n_ris()) != ris.size())
            throw ValidationError("end_to_end_rate: T has " + std::to_string(t.n_ris()) + " rows, RIS has " +
                                  std::to_string(ris.size()) + " elements");
        if (w.size() != t.n_amaf())
            throw ValidationError("end_to_end_rate: feed length does not match T");
        if (std::abs(w.norm() - 1.0) > 1e-9)
            throw ValidationError("end_to_end_rate: feed weights must have unit power");
        if (!(user.position_hw.dot(ris.boresight) > 0.0))
            throw ValidationError("end_to_end_rate: user behind the RIS plane");

        const CVector e = t.entries * w;
        const double range_hw = user.position_hw.norm();
        const Vec3 focus = direction_vector({user.az + pointing_offset.az, user.el + pointing_offset.el}) * range_hw;

        PhaseConfig phases;
        phases.phases.resize(ris.size());
        for (std::size_t p = 0; p < ris.size(); ++p)
        {
            const double r_focus = (focus - ris.positions[p]).norm();
            phases.phases[p] = wrap_phase(pi * std::fmod(r_focus, 2.0) - std::arg(e(Eigen::Index(p))));
        }
        if (bits > 0)
            phases = quantize_phases(phases, bits);

        const double user_gain = std::pow(10.0, cfg.user_gain_dbi / 10.0);
        cplx h = 0.0;
        for (std::size_t p = 0; p < ris.size(); ++p)
        {
            const Vec3 d = user.position_hw - ris.positions[p];
            const double r = d.norm();
            const auto ang = local_angles(d, ris.boresight, ris.x_axis);
            const double amp = std::sqrt(element.gain(ang.az, ang.el) * user_gain) / (2.0 * pi * r);
            h += e(Eigen::Index(p)) * std::polar(amp, phases.phases[p] - pi * std::fmod(r, 2.0));
        }

        LinkResult out;
        const double mag = std::abs(h);
        out.path_gain_db = mag > 0.0 ? 20.0 * std::log10(mag) : -std::numeric_limits<double>::infinity();
        const double comp = cfg.frequency_compensation ? frequency_compensation_db(cfg.carrier_ghz, cfg.reference_ghz) : 0.0;
        out.rx_power_dbm = cfg.tx_power_dbm + comp + out.path_gain_db;
        out.snr_db = out.rx_power_dbm - noise_power_dbm(cfg);
        out.rate = std::log2(1.0 + std::pow(10.0, out.snr_db / 10.0));
        return out;
    }

    RateCdf make_rate_cdf(std::vector<double> rates, std::string fingerprint)
    {
        if (rates.empty())
            throw ValidationError("rate CDF needs at least one sample");
        for (double r : rates)
            if (!(r >= 0.0) || !std::isfinite(r))
                throw ValidationError("rate CDF: rates must be finite and non-negative");
        std::sort(rates.begin(), rates.end());
        RateCdf cdf;
        cdf.probabilities.resize(rates.size());
        for (std::size_t i = 0; i < rates.size(); ++i)
            cdf.probabilities[i] = double(i + 1) / double(rates.size());
        cdf.rates = std::move(rates);
        cdf.fingerprint = std::move(fingerprint);
        return cdf;
    }

    void write_cdf_csv(std::ostream &os, const RateCdf &cdf)
    {
        os << "rate,probability\n" << std::setprecision(17);
        for (std::size_t i = 0; i < cdf.rates.size(); ++i)
            os << cdf.rates[i] << ',' << cdf.probabilities[i] << '\n';
    }

    RateCdf read_cdf_csv(std::istream &is)
    {
        std::string line;
        std::size_t line_no = 0;
        std::vector<double> rates;
        bool header = false;
        while (std::getline(is, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            if (!header)
            {
                if (line != "rate,probability")
                    throw ParseError(line_no, "expected header 'rate,probability'");
                header = true;
                continue;
            }
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw ParseError(line_no, "expected 'rate,probability'");
            const std::string field = line.substr(0, comma);
            char *end = nullptr;
            const double r = std::strtod(field.c_str(), &end);
            if (field.empty() || end != field.c_str() + field.size())
                throw ParseError(line_no, "non-numeric rate '" + field + "'");
            rates.push_back(r);
        }
        if (rates.empty())
            throw ParseError(0, "CDF file has no samples");
        return make_rate_cdf(std::move(rates));
    }

    SimulationResult simulate(const ScenarioConfig &cfg, const ChannelMatrix &t, const ArrayLayout &ris,
                              const ElementPattern &element, const std::string &fingerprint)
    {
        validate(cfg);
        validate(t);
        SimulationResult result;
        result.pem = principal_triplet(t, {1e-10, 10000, cfg.seed});
        if (auto warn = far_field_warning(cfg, ris))
            result.warnings.push_back(*warn);

        const auto users = draw_users(cfg);
        const double sigma = deg2rad(cfg.pointing_sigma_deg);
        std::vector<double> rates;
        rates.reserve(users.size());
        result.drops.reserve(users.size());
        for (std::size_t i = 0; i < users.size(); ++i)
        {
            auto rng = drop_stream(cfg.seed, i, stream_pointing);
            std::normal_distribution<double> normal(0.0, 1.0);
            const double d_az = normal(rng);
            const double d_el = normal(rng);
            const Direction offset{sigma * d_az, sigma * d_el};
            const auto link = end_to_end_rate(t, result.pem.w1, ris, element, users[i], cfg, offset, cfg.phase_bits);
            rates.push_back(link.rate);
            result.drops.push_back({users[i], offset, link});
        }
        result.cdf = make_rate_cdf(std::move(rates), fingerprint);
        return result;
    }

    RateCdf simulate_rate_cdf(const ScenarioConfig &cfg, const ChannelMatrix &t, const ArrayLayout &ris,
                              const ElementPattern &element, const std::string &fingerprint)
    {
        return simulate(cfg, t, ris, element, fingerprint).cdf;
    }

    double quantile(const RateCdf &cdf, double percent)
    {
        if (cdf.rates.empty())
            throw ValidationError("quantile of an empty CDF");
        const double h = double(cdf.rates.size() - 1) * std::clamp(percent, 0.0, 100.0) / 100.0;
        const auto lo = std::size_t(std::floor(h));
        if (lo + 1 >= cdf.rates.size())
            return cdf.rates.back();
        return cdf.rates[lo] + (h - double(lo)) * (cdf.rates[lo + 1] - cdf.rates[lo]);
    }

    CompareReport compare_runs(const RateCdf &a, const RateCdf &b)
    {
        if (a.rates.empty() || b.rates.empty())
            throw ValidationError("compare_runs: both CDFs must be non-empty");
        CompareReport rep;
        const std::array<double, 4> pcts{1.0, 10.0, 50.0, 90.0};
        for (std::size_t i = 0; i < pcts.size(); ++i)
        {
            auto &p = rep.percentiles[i];
            p.percentile = pcts[i];
            p.rate_a = quantile(a, pcts[i]);
            p.rate_b = quantile(b, pcts[i]);
            p.delta = p.rate_b - p.rate_a;
            rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(p.delta));
        }

        // Kolmogorov-Smirnov: sup |F_a - F_b| over all sample points
        std::size_t ia = 0, ib = 0;
        const double na = double(a.rates.size()), nb = double(b.rates.size());
        while (ia < a.rates.size() || ib < b.rates.size())
        {
            double x;
            if (ib >= b.rates.size() || (ia < a.rates.size() && a.rates[ia] <= b.rates[ib]))
                x = a.rates[ia];
            else
                x = b.rates[ib];
            while (ia < a.rates.size() && a.rates[ia] <= x)
                ++ia;
            while (ib < b.rates.size() && b.rates[ib] <= x)
                ++ib;
            rep.ks_distance = std::max(rep.ks_distance, std::abs(double(ia) / na - double(ib) / nb));
        }

        rep.rate_span = std::max(a.rates.back(), b.rates.back()) - std::min(a.rates.front(), b.rates.front());
        rep.close_match = rep.max_abs_delta <= 0.1 * rep.rate_span;
        return rep;
    }
}
