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

#ifndef AMAFRIS_FARFIELD_HPP
#define AMAFRIS_FARFIELD_HPP

#include "amafris/channel_friis.hpp"
#include "amafris/geometry.hpp"
#include "amafris/pem.hpp"
#include "amafris/types.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace amafris
{
    // Direction in the RIS boresight frame, radians, same split as local_angles():
    // unit vector (cos(el) sin(az), sin(el), cos(el) cos(az))
    struct Direction
    {
        double az = 0.0;
        double el = 0.0;
    };

    Vec3 direction_vector(const Direction &d);

    // Wraps into [0, 2 pi)
    double wrap_phase(double phase);

    struct PhaseConfig
    {
        std::vector<double> phases; // radians in [0, 2 pi), RIS layout order
        std::optional<int> bits;    // absent = continuous
    };

    // Phase gradient that adds all element contributions coherently toward a
    // far-field direction: phase_p = -pi * (p . d). With an excitation the
    // incident phase is conjugated as well: phase_p = -pi * (p . d) - arg(e_p).
    PhaseConfig steering_phases(const ArrayLayout &layout, const Direction &direction);
    PhaseConfig steering_phases(const ArrayLayout &layout, const Direction &direction, const ExcitationVector &excitation);

    // Nearest point of the uniform 2^bits grid {2 pi m / 2^bits}; ties go to the lower index
    PhaseConfig quantize_phases(const PhaseConfig &cfg, int bits);

    enum class GainNormalization
    {
        array_gain, // G_elem(d) |AF(d)|^2 / sum |e_p|^2, uncoupled lossless elements
        directivity // 4 pi P(d) / (grid integral of P)
    };

    struct GridSpec
    {
        double step_deg = 0.25;
        double az_min_deg = -90.0;
        double az_max_deg = 90.0;
        double el_min_deg = -90.0;
        double el_max_deg = 90.0;
    };

    inline constexpr double gain_floor_dbi = -200.0;

    struct PatternGrid
    {
        std::vector<double> az_deg;
        std::vector<double> el_deg;
        std::vector<double> gain_dbi; // index i_el * az_deg.size() + i_az
        double step_deg = 0.0;
        GainNormalization normalization = GainNormalization::array_gain;

        std::size_t n_az() const { return az_deg.size(); }
        std::size_t n_el() const { return el_deg.size(); }
        double gain(std::size_t i_el, std::size_t i_az) const { return gain_dbi[i_el * az_deg.size() + i_az]; }
    };

    PatternGrid radiation_pattern(const ArrayLayout &layout, const ExcitationVector &excitation, const PhaseConfig &cfg,
                                  const ElementPattern &element, const GridSpec &grid = {},
                                  GainNormalization normalization = GainNormalization::array_gain);

    // Array gain (dBi) toward one direction, same normalization as array_gain
    double gain_toward(const ArrayLayout &layout, const ExcitationVector &excitation, const PhaseConfig &cfg,
                       const ElementPattern &element, const Direction &direction);

    // Integral of the linear gain over the grid's solid angle (trapezoid, cos(el) Jacobian)
    double solid_angle_integral(const PatternGrid &grid);

    struct PatternMetrics
    {
        double peak_dbi = 0.0;
        double peak_az_deg = 0.0;
        double peak_el_deg = 0.0;
        std::optional<double> sll_db;            // highest sidelobe relative to the peak; empty if there is none
        std::optional<double> sidelobe_peak_dbi; // same sidelobe in absolute terms
        double hpbw_az_deg = 0.0;                // along the constant-elevation cut through the peak
        double hpbw_el_deg = 0.0;                // along the constant-azimuth cut through the peak
    };

    // Main beam = region reachable from the global peak by non-increasing steps
    // (bounded by the first-null ring). SLL is the highest sample outside it.
    PatternMetrics pattern_metrics(const PatternGrid &grid);

    // az_deg,el_deg,gain_dBi
    void write_pattern_grid_csv(std::ostream &os, const PatternGrid &grid);

    enum class CutAxis
    {
        azimuth,  // constant elevation through the peak
        elevation // constant azimuth through the peak
    };

    void write_pattern_cut_csv(std::ostream &os, const PatternGrid &grid, CutAxis axis);
}

#endif
