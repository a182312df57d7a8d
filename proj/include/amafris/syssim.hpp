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

#ifndef AMAFRIS_SYSSIM_HPP
#define AMAFRIS_SYSSIM_HPP

#include "amafris/channel_friis.hpp"
#include "amafris/farfield.hpp"
#include "amafris/geometry.hpp"
#include "amafris/pem.hpp"
#include "amafris/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace amafris
{
    // Downlink scenario. Defaults match configs/spawc-like.profile; the absolute
    // values are placeholders, only relative comparisons are meaningful.
    struct ScenarioConfig
    {
        double carrier_ghz = 150.0;
        double reference_ghz = 100.0;       // frequency the transmit power was specified for
        bool frequency_compensation = true; // add 20 log10(carrier / reference) to the transmit power
        double bandwidth_hz = 1e9;
        double tx_power_dbm = 10.0;
        double noise_figure_db = 10.0;
        double user_gain_dbi = 0.0;

        // Users uniform in distance and in azimuth/elevation from the RIS boresight
        double distance_min_m = 5.0;
        double distance_max_m = 50.0;
        double az_min_deg = -45.0;
        double az_max_deg = 45.0;
        double el_min_deg = -20.0;
        double el_max_deg = 20.0;

        std::size_t drops = 10000;
        double pointing_sigma_deg = 0.0; // Gaussian, independent per axis
        int phase_bits = 0;              // 0 = continuous phase shifters
        std::uint64_t seed = 1;
    };

    // Throws ValidationError for non-finite powers, empty regions, zero drops...
    void validate(const ScenarioConfig &cfg);

    // Thermal floor -174 dBm/Hz + 10 log10(bandwidth) + noise figure
    double noise_power_dbm(const ScenarioConfig &cfg);

    // 20 log10(f_new / f_ref): extra transmit power that offsets the higher
    // free-space loss at f_new
    double frequency_compensation_db(double f_new_ghz, double f_ref_ghz);

    // Independent generator for (seed, drop, stream); serial and parallel runs
    // draw identical numbers.
    std::mt19937_64 drop_stream(std::uint64_t seed, std::uint64_t drop, std::uint32_t stream);

    struct UserDrop
    {
        double distance_m = 0.0;
        double az = 0.0; // radians, RIS boresight frame
        double el = 0.0;
        Vec3 position_hw = Vec3::Zero(); // half-wavelengths at the carrier
    };

    std::vector<UserDrop> draw_users(const ScenarioConfig &cfg);

    // Message when the nearest allowed user is closer than 2 D^2 / lambda of the RIS aperture
    std::optional<std::string> far_field_warning(const ScenarioConfig &cfg, const ArrayLayout &ris);

    struct LinkResult
    {
        double path_gain_db = 0.0; // 20 log10 |h| for a unit-power feed
        double rx_power_dbm = 0.0;
        double snr_db = 0.0;
        double rate = 0.0; // bit/s/Hz
    };

    // Feed w (unit norm) -> T -> RIS -> user.
    //
    // RIS phases conjugate the incident phase of T w and focus toward the point at
    // the user's range in the direction (user az/el + pointing offset), then get
    // quantized to `bits` when bits > 0. The RIS-to-user hop uses the Friis form
    // with the RIS element pattern and exact per-element distances.
    LinkResult end_to_end_rate(const ChannelMatrix &t, const CVector &w, const ArrayLayout &ris,
                               const ElementPattern &element, const UserDrop &user, const ScenarioConfig &cfg,
                               const Direction &pointing_offset = {}, int bits = 0);

    struct RateCdf
    {
        std::vector<double> rates;         // ascending, bit/s/Hz
        std::vector<double> probabilities; // i / n, strictly increasing to 1
        std::string fingerprint;
    };

    RateCdf make_rate_cdf(std::vector<double> rates, std::string fingerprint = {});

    // rate,probability
    void write_cdf_csv(std::ostream &os, const RateCdf &cdf);
    RateCdf read_cdf_csv(std::istream &is);

    struct DropRecord
    {
        UserDrop user;
        Direction pointing_offset;
        LinkResult link;
    };

    struct SimulationResult
    {
        SingularTriplet pem; // of the T actually used
        std::vector<DropRecord> drops;
        RateCdf cdf;
        std::vector<std::string> warnings;
    };

    // One Monte-Carlo run with the PEM feed of t. Deterministic under cfg.seed.
    SimulationResult simulate(const ScenarioConfig &cfg, const ChannelMatrix &t, const ArrayLayout &ris,
                              const ElementPattern &element, const std::string &fingerprint = {});

    RateCdf simulate_rate_cdf(const ScenarioConfig &cfg, const ChannelMatrix &t, const ArrayLayout &ris,
                              const ElementPattern &element, const std::string &fingerprint = {});

    struct PercentileDelta
    {
        double percentile = 0.0; // 0..100
        double rate_a = 0.0;
        double rate_b = 0.0;
        double delta = 0.0; // b - a
    };

    struct CompareReport
    {
        std::array<PercentileDelta, 4> percentiles; // 1, 10, 50, 90 %
        double ks_distance = 0.0;
        double max_abs_delta = 0.0;
        double rate_span = 0.0;   // max - min over both samples
        bool close_match = false; // max_abs_delta <= 10 % of rate_span
    };

    // Linear interpolation between order statistics, p in [0, 100]
    double quantile(const RateCdf &cdf, double percent);

    CompareReport compare_runs(const RateCdf &a, const RateCdf &b);
}

#endif
