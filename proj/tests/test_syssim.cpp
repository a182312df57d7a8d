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

#include "catch_amalgamated.hpp"
#include "amafris/syssim.hpp"

#include <cmath>
#include <sstream>

using namespace amafris;
using Catch::Approx;

namespace
{
    struct Design
    {
        SystemGeometry sys = place_feed(build_ura(16, 16), build_ura(2, 2), 8.0);
        ElementPattern element;
        ChannelMatrix t = apply_passivity_ceiling(build_t_friis(sys, element)).matrix;
        SingularTriplet pem = principal_triplet(t);
    };

    const Design &design()
    {
        static const Design p;
        return p;
    }

    ScenarioConfig small_scenario(std::size_t drops)
    {
        ScenarioConfig c;
        c.drops = drops;
        return c;
    }

    UserDrop user_at(double distance_m, double az_deg, double el_deg, double carrier_ghz = 150.0)
    {
        UserDrop u;
        u.distance_m = distance_m;
        u.az = deg2rad(az_deg);
        u.el = deg2rad(el_deg);
        u.position_hw = direction_vector({u.az, u.el}) * (distance_m / half_wavelength_m(carrier_ghz));
        return u;
    }
}

TEST_CASE("link budget helpers", "[syssim]")
{
    ScenarioConfig c;
    CHECK(noise_power_dbm(c) == Approx(-174.0 + 90.0 + 10.0));
    c.bandwidth_hz = 2e9;
    c.noise_figure_db = 7.0;
    CHECK(noise_power_dbm(c) == Approx(-174.0 + 10.0 * std::log10(2e9) + 7.0));
    CHECK(frequency_compensation_db(150.0, 100.0) == Approx(20.0 * std::log10(1.5)));
    CHECK(frequency_compensation_db(150.0, 100.0) == Approx(3.52).margin(0.01));
    CHECK(frequency_compensation_db(100.0, 100.0) == 0.0);
    CHECK_THROWS_AS(frequency_compensation_db(0.0, 100.0), ValidationError);
}

TEST_CASE("validate - scenario configuration", "[syssim]")
{
    CHECK_NOTHROW(validate(ScenarioConfig{}));
    auto bad = [](auto mutate)
    {
        ScenarioConfig c;
        mutate(c);
        CHECK_THROWS_AS(validate(c), ValidationError);
    };
    bad([](ScenarioConfig &c) { c.drops = 0; });
    bad([](ScenarioConfig &c) { c.bandwidth_hz = 0.0; });
    bad([](ScenarioConfig &c) { c.pointing_sigma_deg = -1.0; });
    bad([](ScenarioConfig &c) { c.phase_bits = 31; });
    bad([](ScenarioConfig &c) { c.distance_min_m = 10.0, c.distance_max_m = 5.0; });
    bad([](ScenarioConfig &c) { c.az_max_deg = 90.0; });
    bad([](ScenarioConfig &c) { c.el_min_deg = 30.0; });
    bad([](ScenarioConfig &c) { c.tx_power_dbm = std::nan(""); });
}

TEST_CASE("drop_stream - deterministic and distinct per drop and stream", "[syssim]")
{
    auto a = drop_stream(7, 3, 0);
    auto b = drop_stream(7, 3, 0);
    CHECK(a() == b());
    CHECK(drop_stream(7, 3, 0)() != drop_stream(7, 4, 0)());
    CHECK(drop_stream(7, 3, 0)() != drop_stream(7, 3, 1)());
    CHECK(drop_stream(7, 3, 0)() != drop_stream(8, 3, 0)());
}

TEST_CASE("draw_users - inside the configured region", "[syssim]")
{
    auto c = small_scenario(500);
    const auto users = draw_users(c);
    REQUIRE(users.size() == 500);
    const double hw = half_wavelength_m(c.carrier_ghz);
    for (const auto &u : users)
    {
        CHECK(u.distance_m >= c.distance_min_m);
        CHECK(u.distance_m <= c.distance_max_m);
        CHECK(std::abs(rad2deg(u.az)) <= 45.0);
        CHECK(std::abs(rad2deg(u.el)) <= 20.0);
        CHECK(u.position_hw.norm() * hw == Approx(u.distance_m));
    }
    // Changing the drop count keeps the earlier drops
    c.drops = 100;
    const auto fewer = draw_users(c);
    CHECK(fewer[99].position_hw == users[99].position_hw);
}

TEST_CASE("end_to_end_rate - single element closed form", "[syssim]")
{
    const auto sys = place_feed(build_ura(1, 1), build_ura(1, 1), 8.0);
    const ElementPattern element;
    const auto t = build_t_friis(sys, element);
    CVector w(1);
    w << 1.0;
    ScenarioConfig c;
    c.user_gain_dbi = 3.0;
    const auto u = user_at(2.0, 0.0, 0.0);
    const auto link = end_to_end_rate(t, w, sys.ris, element, u, c);

    const double r_hw = 2.0 / half_wavelength_m(150.0);
    const double h = std::abs(t.entries(0, 0)) * std::sqrt(5.8 * std::pow(10.0, 0.3)) / (2.0 * pi * r_hw);
    CHECK(link.path_gain_db == Approx(20.0 * std::log10(h)).margin(1e-9));
    CHECK(link.rx_power_dbm == Approx(10.0 + 20.0 * std::log10(1.5) + link.path_gain_db).margin(1e-9));
    CHECK(link.snr_db == Approx(link.rx_power_dbm + 74.0).margin(1e-9));
    CHECK(link.rate == Approx(std::log2(1.0 + std::pow(10.0, link.snr_db / 10.0))));

    c.frequency_compensation = false;
    CHECK(end_to_end_rate(t, w, sys.ris, element, u, c).rx_power_dbm ==
          Approx(link.rx_power_dbm - 20.0 * std::log10(1.5)).margin(1e-9));
}

TEST_CASE("end_to_end_rate - perfect pointing adds every element in phase", "[syssim]")
{
    const auto &p = design();
    const ScenarioConfig c;
    for (const auto &u : {user_at(5.0, 0.0, 0.0), user_at(12.0, 30.0, -10.0), user_at(40.0, -44.0, 19.0)})
    {
        const CVector e = p.t.entries * p.pem.w1;
        double coherent = 0.0;
        for (std::size_t k = 0; k < p.sys.ris.size(); ++k)
        {
            const Vec3 d = u.position_hw - p.sys.ris.positions[k];
            const double cos_b = d.z() / d.norm();
            // cos^2(az) cos^2(el) equals the squared off-boresight cosine
            const double g = 5.8 * cos_b * cos_b;
            coherent += std::abs(e(Eigen::Index(k))) * std::sqrt(g) / (2.0 * pi * d.norm());
        }
        const auto link = end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, u, c);
        CHECK(link.path_gain_db == Approx(20.0 * std::log10(coherent)).margin(1e-9));
    }
}

TEST_CASE("end_to_end_rate - pointing error and quantization only lose gain", "[syssim]")
{
    const auto &p = design();
    const ScenarioConfig c;
    const auto u = user_at(10.0, 15.0, 5.0);
    const auto ideal = end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, u, c);
    const auto off = end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, u, c, {deg2rad(2.0), deg2rad(-1.0)});
    const auto one_bit = end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, u, c, {}, 1);
    const auto fine = end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, u, c, {}, 16);
    CHECK(off.rate < ideal.rate);
    CHECK(one_bit.rate < ideal.rate);
    // 1-bit loss is close to the textbook 3.9 dB for random phases
    CHECK(ideal.snr_db - one_bit.snr_db == Approx(3.9).margin(1.0));
    CHECK(std::abs(fine.rate - ideal.rate) < 1e-6);
}

TEST_CASE("end_to_end_rate - invalid input", "[syssim]")
{
    const auto &p = design();
    const ScenarioConfig c;
    auto behind = user_at(5.0, 0.0, 0.0);
    behind.position_hw.z() = -behind.position_hw.z();
    CHECK_THROWS_AS(end_to_end_rate(p.t, p.pem.w1, p.sys.ris, p.element, behind, c), ValidationError);
    CHECK_THROWS_AS(end_to_end_rate(p.t, CVector(2.0 * p.pem.w1), p.sys.ris, p.element, user_at(5, 0, 0), c),
                    ValidationError);
    CHECK_THROWS_AS(end_to_end_rate(p.t, CVector::Ones(3), p.sys.ris, p.element, user_at(5, 0, 0), c),
                    ValidationError);
    CHECK_THROWS_AS(end_to_end_rate(p.t, p.pem.w1, build_ura(4, 4), p.element, user_at(5, 0, 0), c),
                    ValidationError);
}

TEST_CASE("make_rate_cdf - sorted samples with probabilities i/n", "[syssim]")
{
    const auto cdf = make_rate_cdf({3.0, 1.0, 2.0, 2.0});
    CHECK(cdf.rates == std::vector<double>{1.0, 2.0, 2.0, 3.0});
    CHECK(cdf.probabilities == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    const auto one = make_rate_cdf({4.2});
    CHECK(one.probabilities == std::vector<double>{1.0});
    CHECK_THROWS_AS(make_rate_cdf({}), ValidationError);
    CHECK_THROWS_AS(make_rate_cdf({1.0, -0.5}), ValidationError);
    CHECK_THROWS_AS(make_rate_cdf({1.0, std::nan("")}), ValidationError);
}

TEST_CASE("CDF CSV - round trip is exact", "[syssim]")
{
    const auto cdf = make_rate_cdf({0.1, 1.0 / 3.0, 2.718281828459045, 7.0});
    std::stringstream ss;
    write_cdf_csv(ss, cdf);
    const auto back = read_cdf_csv(ss);
    CHECK(back.rates == cdf.rates);
    CHECK(back.probabilities == cdf.probabilities);

    std::istringstream bad("rate,probability\n1.0,0.5\nx,1\n");
    try
    {
        read_cdf_csv(bad);
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 3);
    }
    std::istringstream header("rate;p\n");
    CHECK_THROWS_AS(read_cdf_csv(header), ParseError);
}

TEST_CASE("quantile and compare_runs", "[syssim]")
{
    const auto a = make_rate_cdf({1.0, 2.0, 3.0, 4.0});
    CHECK(quantile(a, 50.0) == Approx(2.5));
    CHECK(quantile(a, 0.0) == 1.0);
    CHECK(quantile(a, 100.0) == 4.0);
    CHECK(quantile(a, 10.0) == Approx(1.3));

    const auto same = compare_runs(a, a);
    for (const auto &p : same.percentiles)
        CHECK(p.delta == 0.0);
    CHECK(same.ks_distance == 0.0);
    CHECK(same.close_match);

    const auto shifted = compare_runs(a, make_rate_cdf({2.0, 3.0, 4.0, 5.0}));
    CHECK(shifted.percentiles[2].percentile == 50.0);
    CHECK(shifted.percentiles[2].delta == Approx(1.0));
    CHECK(shifted.ks_distance == Approx(0.25));
    CHECK(shifted.rate_span == Approx(4.0));
    CHECK_FALSE(shifted.close_match);

    const auto apart = compare_runs(a, make_rate_cdf({10.0, 11.0}));
    CHECK(apart.ks_distance == 1.0);
}

TEST_CASE("simulate - deterministic under a fixed seed", "[syssim]")
{
    const auto &p = design();
    auto c = small_scenario(200);
    c.pointing_sigma_deg = 1.0;
    const auto a = simulate(c, p.t, p.sys.ris, p.element);
    const auto b = simulate(c, p.t, p.sys.ris, p.element);
    std::ostringstream sa, sb;
    write_cdf_csv(sa, a.cdf);
    write_cdf_csv(sb, b.cdf);
    CHECK(sa.str() == sb.str());
    c.seed = 2;
    CHECK(simulate_rate_cdf(c, p.t, p.sys.ris, p.element).rates != a.cdf.rates);
    CHECK(a.warnings.empty());
}

TEST_CASE("simulate - single boresight drop is a single step", "[syssim]")
{
    const auto &p = design();
    auto c = small_scenario(1);
    c.distance_min_m = c.distance_max_m = 10.0;
    c.az_min_deg = c.az_max_deg = 0.0;
    c.el_min_deg = c.el_max_deg = 0.0;
    const auto r = simulate(c, p.t, p.sys.ris, p.element);
    REQUIRE(r.cdf.rates.size() == 1);
    CHECK(r.cdf.probabilities[0] == 1.0);
    const auto direct = end_to_end_rate(p.t, r.pem.w1, p.sys.ris, p.element, user_at(10.0, 0.0, 0.0), c);
    CHECK(r.cdf.rates[0] == Approx(direct.rate).epsilon(1e-12));
}

TEST_CASE("simulate - pointing error never helps a matched drop", "[syssim]")
{
    const auto &p = design();
    auto c = small_scenario(300);
    const auto ideal = simulate(c, p.t, p.sys.ris, p.element);
    c.pointing_sigma_deg = 2.0;
    const auto noisy = simulate(c, p.t, p.sys.ris, p.element);
    for (std::size_t i = 0; i < ideal.drops.size(); ++i)
    {
        CHECK(noisy.drops[i].user.position_hw == ideal.drops[i].user.position_hw);
        CHECK(noisy.drops[i].link.rate <= ideal.drops[i].link.rate + 1e-12);
    }
}

TEST_CASE("simulate - finer phase quantization approaches continuous", "[syssim]")
{
    const auto &p = design();
    auto c = small_scenario(300);
    const auto cont = simulate(c, p.t, p.sys.ris, p.element);
    double prev = -1.0;
    for (int bits : {1, 2, 3, 16})
    {
        c.phase_bits = bits;
        const double med = quantile(simulate(c, p.t, p.sys.ris, p.element).cdf, 50.0);
        CHECK(med > prev);
        CHECK(med <= quantile(cont.cdf, 50.0) + 1e-9);
        prev = med;
    }
    CHECK(std::abs(prev - quantile(cont.cdf, 50.0)) < 1e-3);
}

TEST_CASE("simulate - passivity ceiling shifts every SNR by 20 log10 sigma1", "[syssim]")
{
    const auto &p = design();
    const auto raw = build_t_friis(p.sys, p.element);
    const double sigma = principal_triplet(raw).sigma1;
    const auto c = small_scenario(200);
    const auto a = simulate(c, raw, p.sys.ris, p.element);
    const auto b = simulate(c, p.t, p.sys.ris, p.element);
    for (std::size_t i = 0; i < a.drops.size(); ++i)
        CHECK(a.drops[i].link.snr_db - b.drops[i].link.snr_db == Approx(20.0 * std::log10(sigma)).margin(1e-9));
}

TEST_CASE("far_field_warning - users closer than the Fraunhofer distance", "[syssim]")
{
    const auto &p = design();
    ScenarioConfig c;
    CHECK_FALSE(far_field_warning(c, p.sys.ris));
    c.distance_min_m = 0.1;
    const auto w = far_field_warning(c, p.sys.ris);
    REQUIRE(w);
    CHECK_THAT(*w, Catch::Matchers::ContainsSubstring("far-field"));
    auto sc = small_scenario(5);
    sc.distance_min_m = 0.1;
    CHECK(simulate(sc, p.t, p.sys.ris, p.element).warnings.size() == 1);
}
