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
#include "amafris/farfield.hpp"

#include <cmath>
#include <sstream>

using namespace amafris;
using Catch::Approx;

namespace
{
    ExcitationVector uniform(const ArrayLayout &a)
    {
        return {CVector::Ones(Eigen::Index(a.size())), a.n_x, a.n_y};
    }

    PhaseConfig zero_phases(const ArrayLayout &a)
    {
        return {std::vector<double>(a.size(), 0.0), std::nullopt};
    }

    GridSpec azimuth_cut(double step)
    {
        GridSpec g;
        g.step_deg = step;
        g.el_min_deg = 0.0;
        g.el_max_deg = 0.0;
        return g;
    }

    PatternGrid line_grid(const std::vector<double> &az, const std::vector<double> &gain)
    {
        PatternGrid g;
        g.az_deg = az;
        g.el_deg = {0.0};
        g.gain_dbi = gain;
        g.step_deg = az[1] - az[0];
        return g;
    }
}

TEST_CASE("wrap_phase - into [0, 2 pi)", "[farfield]")
{
    CHECK(wrap_phase(-0.1) == Approx(2.0 * pi - 0.1));
    CHECK(wrap_phase(2.0 * pi) == 0.0);
    CHECK(wrap_phase(7.0 * pi) == Approx(pi));
    CHECK(wrap_phase(0.3) == 0.3);
}

TEST_CASE("direction_vector - unit length, boresight along +z", "[farfield]")
{
    CHECK(direction_vector({0.0, 0.0}).isApprox(Vec3::UnitZ()));
    CHECK(direction_vector({pi / 2, 0.0}).isApprox(Vec3::UnitX()));
    CHECK(direction_vector({0.0, pi / 2}).isApprox(Vec3::UnitY()));
    CHECK(direction_vector({0.4, -0.7}).norm() == Approx(1.0));
}

TEST_CASE("radiation_pattern - single element peaks at the element gain", "[farfield]")
{
    const auto a = build_ura(1, 1);
    GridSpec g;
    g.step_deg = 1.0;
    const auto p = radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, g);
    const auto m = pattern_metrics(p);
    CHECK(m.peak_dbi == Approx(10.0 * std::log10(5.8)).margin(1e-12));
    CHECK(m.peak_az_deg == 0.0);
    CHECK(m.peak_el_deg == 0.0);
    CHECK_FALSE(m.sll_db);
    // cos^2 x cos^2: the half-power points sit at +-45 degrees on each cut
    CHECK(m.hpbw_az_deg == Approx(90.0).margin(0.2)); // dB interpolation on a 1 degree grid
}

TEST_CASE("radiation_pattern - directivity of the cos^2 x cos^2 element", "[farfield]")
{
    // 4 pi / integral(cos^2 az cos^3 el) = 4 pi / (pi/2 * 4/3) = 6
    const auto a = build_ura(1, 1);
    const auto p = radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, {},
                                     GainNormalization::directivity);
    CHECK(pattern_metrics(p).peak_dbi == Approx(10.0 * std::log10(6.0)).margin(0.01));
    CHECK(solid_angle_integral(p) == Approx(4.0 * pi).epsilon(1e-9));
}

TEST_CASE("radiation_pattern - uniform 16x16 broadside array gain", "[farfield]")
{
    const auto a = build_ura(16, 16);
    GridSpec g;
    g.step_deg = 0.5;
    const auto p = radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, g);
    CHECK(pattern_metrics(p).peak_dbi == Approx(10.0 * std::log10(256.0 * 5.8)).margin(1e-9));
}

TEST_CASE("radiation_pattern - fast path matches a brute-force array factor", "[farfield]")
{
    const auto a = build_ura(4, 3, 1.3);
    ExcitationVector e{CVector(12), 4, 3};
    for (Eigen::Index p = 0; p < 12; ++p)
        e.values(p) = std::polar(1.0 + 0.1 * double(p), 0.7 * double(p));
    PhaseConfig ph = steering_phases(a, {0.2, -0.1});
    GridSpec g;
    g.step_deg = 5.0;
    const ElementPattern elem;
    const auto grid = radiation_pattern(a, e, ph, elem, g);

    double worst = 0.0;
    for (std::size_t ie = 0; ie < grid.n_el(); ++ie)
        for (std::size_t ia = 0; ia < grid.n_az(); ++ia)
        {
            const double az = deg2rad(grid.az_deg[ia]), el = deg2rad(grid.el_deg[ie]);
            const Vec3 d(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
            cplx af = 0.0;
            double pin = 0.0;
            for (std::size_t p = 0; p < 12; ++p)
            {
                const cplx w = e.values(Eigen::Index(p)) * std::exp(cplx(0.0, ph.phases[p]));
                af += w * std::exp(cplx(0.0, pi * a.positions[p].dot(d)));
                pin += std::norm(w);
            }
            const double g_lin = elem.gain(az, el) * std::norm(af) / pin;
            if (g_lin < 1e-12)
                continue;
            worst = std::max(worst, std::abs(grid.gain(ie, ia) - 10.0 * std::log10(g_lin)));
            if (ie % 7 == 0 && ia % 5 == 0)
                CHECK(gain_toward(a, e, ph, elem, {az, el}) == Approx(grid.gain(ie, ia)).margin(1e-9));
        }
    CHECK(worst < 1e-9);
}

TEST_CASE("radiation_pattern - generic path for a non-grid layout", "[farfield]")
{
    auto a = build_ura(3, 2);
    a.positions[4] += Vec3(0.2, 0.1, 0.05);
    const auto e = uniform(a);
    const auto ph = zero_phases(a);
    GridSpec g;
    g.step_deg = 10.0;
    const auto grid = radiation_pattern(a, e, ph, ElementPattern{}, g);
    for (std::size_t ie = 1; ie + 1 < grid.n_el(); ie += 3)
        for (std::size_t ia = 1; ia + 1 < grid.n_az(); ia += 4)
        {
            const Direction d{deg2rad(grid.az_deg[ia]), deg2rad(grid.el_deg[ie])};
            CHECK(grid.gain(ie, ia) == Approx(gain_toward(a, e, ph, ElementPattern{}, d)).margin(1e-9));
        }
}

TEST_CASE("radiation_pattern - 16-element line array first sidelobe", "[farfield]")
{
    const auto a = build_ura(16, 1);
    const auto p = radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, azimuth_cut(0.25));
    const auto m = pattern_metrics(p);
    REQUIRE(m.sll_db);
    CHECK(*m.sll_db == Approx(-13.2).margin(0.3));
    // 0.886 lambda / (N d) for d = lambda / 2, narrowed slightly by the element
    CHECK(m.hpbw_az_deg == Approx(rad2deg(0.886 * 2.0 / 16.0)).margin(0.2));
}

TEST_CASE("radiation_pattern - steering moves the beam", "[farfield]")
{
    const auto a = build_ura(16, 16);
    GridSpec g;
    g.step_deg = 1.0;
    for (const Direction d : {Direction{deg2rad(20.0), deg2rad(10.0)}, Direction{deg2rad(-45.0), 0.0},
                              Direction{0.0, deg2rad(45.0)}})
    {
        const auto p = radiation_pattern(a, uniform(a), steering_phases(a, d), ElementPattern{}, g);
        const auto m = pattern_metrics(p);
        CHECK(std::abs(m.peak_az_deg - rad2deg(d.az)) <= 1.0);
        CHECK(std::abs(m.peak_el_deg - rad2deg(d.el)) <= 1.0);
    }
}

TEST_CASE("radiation_pattern - symmetric excitation gives a mirror-symmetric pattern", "[farfield]")
{
    const auto a = build_ura(8, 8);
    GridSpec g;
    g.step_deg = 1.0;
    const auto p = radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, g);
    const double peak = pattern_metrics(p).peak_dbi;
    double worst = 0.0;
    for (std::size_t ie = 0; ie < p.n_el(); ++ie)
        for (std::size_t ia = 0; ia < p.n_az(); ++ia)
        {
            const double x = p.gain(ie, ia), y = p.gain(ie, p.n_az() - 1 - ia), z = p.gain(p.n_el() - 1 - ie, ia);
            if (x > peak - 100.0)
                worst = std::max({worst, std::abs(x - y), std::abs(x - z)});
        }
    CHECK(worst < 1e-9);
}

TEST_CASE("radiation_pattern - invalid input", "[farfield]")
{
    const auto a = build_ura(2, 2);
    CHECK_THROWS_AS(radiation_pattern(a, ExcitationVector{CVector::Zero(4), 2, 2}, zero_phases(a), ElementPattern{}),
                    ValidationError);
    CHECK_THROWS_AS(radiation_pattern(a, uniform(build_ura(3, 1)), zero_phases(a), ElementPattern{}),
                    ValidationError);
    GridSpec g;
    g.step_deg = 0.0;
    CHECK_THROWS_AS(radiation_pattern(a, uniform(a), zero_phases(a), ElementPattern{}, g), ValidationError);
}

TEST_CASE("steering_phases - conjugates the excitation phase", "[farfield]")
{
    const auto a = build_ura(2, 1);
    ExcitationVector e{CVector(2), 2, 1};
    e.values << std::polar(1.0, 0.5), std::polar(2.0, -1.0);
    const auto ph = steering_phases(a, {}, e);
    CHECK(ph.phases[0] == Approx(2.0 * pi - 0.5));
    CHECK(ph.phases[1] == Approx(1.0));
    CHECK_FALSE(ph.bits);

    const auto tilt = steering_phases(a, {pi / 6, 0.0});
    // positions -0.5, 0.5; phase -pi x sin(30 deg)
    CHECK(tilt.phases[0] == Approx(pi / 4));
    CHECK(tilt.phases[1] == Approx(2.0 * pi - pi / 4));

    CHECK_THROWS_AS(steering_phases(a, {pi / 2, 0.0}), ValidationError);
    CHECK_THROWS_AS(steering_phases(a, {0.0, -2.0}), ValidationError);
    CHECK_THROWS_AS(steering_phases(a, {}, ExcitationVector{CVector::Ones(3), 3, 1}), ValidationError);
}

TEST_CASE("quantize_phases - nearest level modulo 2 pi", "[farfield]")
{
    const PhaseConfig cfg{{0.0, 0.49 * pi, 0.51 * pi, 1.5 * pi, 1.99 * pi}, std::nullopt};
    const auto q1 = quantize_phases(cfg, 1);
    REQUIRE(q1.bits == 1);
    CHECK(q1.phases == std::vector<double>{0.0, 0.0, pi, pi, 0.0});

    const auto q2 = quantize_phases(cfg, 2);
    CHECK(q2.phases[1] == Approx(pi / 2));
    CHECK(q2.phases[3] == Approx(1.5 * pi));

    const auto q16 = quantize_phases(cfg, 16);
    for (std::size_t i = 0; i < cfg.phases.size(); ++i)
    {
        const double err = std::remainder(q16.phases[i] - cfg.phases[i], 2.0 * pi);
        CHECK(std::abs(err) <= pi / 65536.0 + 1e-15);
    }

    CHECK_THROWS_AS(quantize_phases(cfg, 0), ValidationError);
    CHECK_THROWS_AS(quantize_phases(cfg, 31), ValidationError);
}

TEST_CASE("pattern_metrics - sidelobes outside the main-beam basin", "[farfield]")
{
    const auto g = line_grid({-3, -2, -1, 0, 1, 2, 3}, {-5, -20, -1, 0, -1, -20, -8});
    const auto m = pattern_metrics(g);
    CHECK(m.peak_dbi == 0.0);
    CHECK(m.peak_az_deg == 0.0);
    REQUIRE(m.sll_db);
    CHECK(*m.sll_db == -5.0);
    CHECK(*m.sidelobe_peak_dbi == -5.0);
    // crossings at +-(1 + 2/19)
    CHECK(m.hpbw_az_deg == Approx(2.0 * (1.0 + 2.0 / 19.0)));
}

TEST_CASE("pattern_metrics - monotone pattern has no sidelobe, flat pattern is rejected", "[farfield]")
{
    const auto g = line_grid({-2, -1, 0, 1, 2}, {-9, -4, 0, -4, -9});
    CHECK_FALSE(pattern_metrics(g).sll_db);
    CHECK_THROWS_AS(pattern_metrics(line_grid({-1, 0, 1}, {3, 3, 3})), ValidationError);
    CHECK_THROWS_AS(pattern_metrics(PatternGrid{}), ValidationError);
}

TEST_CASE("pattern CSV writers", "[farfield]")
{
    const auto g = line_grid({-1, 0, 1}, {-3, 0, -6});
    std::ostringstream full, az, el;
    write_pattern_grid_csv(full, g);
    write_pattern_cut_csv(az, g, CutAxis::azimuth);
    write_pattern_cut_csv(el, g, CutAxis::elevation);
    CHECK(full.str() == "az_deg,el_deg,gain_dBi\n-1,0,-3\n0,0,0\n1,0,-6\n");
    CHECK(az.str() == "az_deg,gain_dBi\n-1,-3\n0,0\n1,-6\n");
    CHECK(el.str() == "el_deg,gain_dBi\n0,0\n");
}
