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
#include "amafris/channel_friis.hpp"

#include <cmath>

using namespace amafris;
using Catch::Approx;

namespace
{
    double cos2_gain(double peak, const Vec3 &d, const Vec3 &boresight)
    {
        // cos^2(az) = b^2 / (b^2 + x^2), cos^2(el) = (b^2 + x^2) / |d|^2
        const Vec3 x = Vec3::UnitX();
        const Vec3 y = boresight.cross(x);
        const double db = d.dot(boresight), dx = d.dot(x), dy = d.dot(y);
        if (db <= 0.0)
            return 0.0;
        const double c_az2 = db * db / (db * db + dx * dx);
        const double c_el2 = (db * db + dx * dx) / (db * db + dx * dx + dy * dy);
        return peak * c_az2 * c_el2;
    }
}

TEST_CASE("patch_gain - cos^2 lobe, zero behind", "[channel_friis]")
{
    const ElementPattern p;
    CHECK(p.gain(0.0, 0.0) == Approx(5.8));
    CHECK(patch_gain(p, pi / 3, 0.0) == Approx(5.8 * 0.25));
    CHECK(p.gain(0.0, pi / 4) == Approx(5.8 * 0.5));
    CHECK(p.gain(pi / 2, 0.0) == 0.0);
    CHECK(p.gain(0.0, -pi / 2) == 0.0);
    CHECK(p.gain(2.0, 0.0) == 0.0);
    CHECK(p.gain(-3.0, 0.3) == 0.0);
    CHECK(10.0 * std::log10(p.peak_gain) == Approx(7.634).margin(1e-3));
}

TEST_CASE("friis_coefficient - on-axis pair", "[channel_friis]")
{
    const ElementPattern p;
    PairGeometry g;
    g.r = 8.0;
    const cplx c = friis_coefficient(g, p, p);
    CHECK(c.real() == Approx(5.8 / (16.0 * pi)));
    CHECK(std::abs(c.imag()) < 1e-15);

    g.r = 8.5; // e^{-j 8.5 pi} = -j
    const cplx d = friis_coefficient(g, p, p);
    CHECK(std::abs(d.real()) < 1e-15);
    CHECK(d.imag() == Approx(-5.8 / (17.0 * pi)));
}

TEST_CASE("friis_coefficient - phase stays accurate at large distance", "[channel_friis]")
{
    const ElementPattern p;
    PairGeometry g;
    g.r = 100000.25;
    const cplx c = friis_coefficient(g, p, p);
    CHECK(std::arg(c) == Approx(-pi / 4).margin(1e-9));
}

TEST_CASE("friis_coefficient - amplitude models agree on axis", "[channel_friis]")
{
    ElementPattern a, r;
    a.peak_gain = 4.0;
    r.peak_gain = 9.0;
    PairGeometry g;
    g.r = 3.0;
    const cplx gm = friis_coefficient(g, a, r, AmplitudeModel::geometric_mean);
    const cplx pp = friis_coefficient(g, a, r, AmplitudeModel::pattern_product);
    CHECK(std::abs(gm) == Approx(6.0 / (6.0 * pi)));
    CHECK(std::abs(pp - gm) < 1e-15);

    g.az_a = pi / 3; // G_A drops to a quarter
    CHECK(std::abs(friis_coefficient(g, a, r, AmplitudeModel::geometric_mean)) == Approx(std::abs(gm) * 0.5));
    CHECK(std::abs(friis_coefficient(g, a, r, AmplitudeModel::pattern_product)) == Approx(std::abs(gm) * 0.25));
}

TEST_CASE("friis_coefficient - zero outside either front hemisphere", "[channel_friis]")
{
    const ElementPattern p;
    PairGeometry g;
    g.r = 2.0;
    g.az_r = pi / 2;
    CHECK(friis_coefficient(g, p, p) == cplx(0.0, 0.0));
    g.az_r = 0.0;
    g.el_a = -pi;
    CHECK(friis_coefficient(g, p, p) == cplx(0.0, 0.0));
}

TEST_CASE("friis_coefficient - rejects non-positive distance", "[channel_friis]")
{
    const ElementPattern p;
    PairGeometry g;
    g.r = 0.0;
    CHECK_THROWS_AS(friis_coefficient(g, p, p), ValidationError);
    g.r = -1.0;
    CHECK_THROWS_AS(friis_coefficient(g, p, p), ValidationError);
    g.r = std::nan("");
    CHECK_THROWS_AS(friis_coefficient(g, p, p), ValidationError);
}

TEST_CASE("build_t_friis - every entry matches a direct evaluation", "[channel_friis]")
{
    const auto sys = place_feed(build_ura(16, 16), build_ura(2, 2), 8.0);
    const ElementPattern p;
    const auto t = build_t_friis(sys, p);
    REQUIRE(t.n_ris() == 256);
    REQUIRE(t.n_amaf() == 4);
    CHECK(t.provenance == Provenance::friis);
    CHECK(t.frequency_ghz == 150.0);
    CHECK_FALSE(t.passivity_scaled);

    double worst = 0.0;
    for (int jr = 0; jr < 16; ++jr)
        for (int ir = 0; ir < 16; ++ir)
            for (int ja = 0; ja < 2; ++ja)
                for (int ia = 0; ia < 2; ++ia)
                {
                    const Vec3 ris(ir - 7.5, jr - 7.5, 0.0);
                    const Vec3 amaf(ia - 0.5, ja - 0.5, 8.0);
                    const Vec3 d = ris - amaf;
                    const double r = d.norm();
                    const double ga = cos2_gain(5.8, d, -Vec3::UnitZ());
                    const double gr = cos2_gain(5.8, -d, Vec3::UnitZ());
                    const cplx expect = std::sqrt(ga * gr) / (2.0 * pi * r) * std::exp(cplx(0.0, -pi * r));
                    const cplx got = t.entries(jr * 16 + ir, ja * 2 + ia);
                    worst = std::max(worst, std::abs(got - expect) / std::abs(expect));
                }
    CHECK(worst < 1e-12);
}

TEST_CASE("build_t_friis - mirror symmetry of the centered geometry", "[channel_friis]")
{
    const auto sys = place_feed(build_ura(6, 4), build_ura(2, 2), 5.0);
    const auto t = build_t_friis(sys, ElementPattern{});
    // Mirroring x maps RIS (i, j) -> (5 - i, j) and AMAF (a, b) -> (1 - a, b)
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 6; ++i)
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a)
                {
                    const cplx x = t.entries(j * 6 + i, b * 2 + a);
                    const cplx y = t.entries(j * 6 + (5 - i), b * 2 + (1 - a));
                    CHECK(std::abs(x - y) < 1e-14);
                }
}

TEST_CASE("build_t_friis - 1x1 system is a single on-axis entry", "[channel_friis]")
{
    const auto sys = place_feed(build_ura(1, 1), build_ura(1, 1), 8.0);
    const auto t = build_t_friis(sys, ElementPattern{});
    REQUIRE(t.entries.size() == 1);
    CHECK(t.entries(0, 0).real() == Approx(5.8 / (16.0 * pi)));
}

TEST_CASE("amplitude model names round-trip", "[channel_friis]")
{
    for (auto m : {AmplitudeModel::geometric_mean, AmplitudeModel::pattern_product})
        CHECK(amplitude_model_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(amplitude_model_from_string("sqrt"), ValidationError);
    CHECK(to_string(Provenance::fullwave) == "fullwave");
}

TEST_CASE("validate - channel matrix", "[channel_friis]")
{
    ChannelMatrix t;
    CHECK_THROWS_AS(validate(t), ValidationError);
    t.entries = CMatrix::Ones(2, 2);
    CHECK_NOTHROW(validate(t));
    t.entries(1, 0) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(validate(t), ValidationError);
}
