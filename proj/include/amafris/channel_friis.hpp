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

#ifndef AMAFRIS_CHANNEL_FRIIS_HPP
#define AMAFRIS_CHANNEL_FRIIS_HPP

#include "amafris/geometry.hpp"
#include "amafris/types.hpp"

#include <string>

namespace amafris
{
    // Axisymmetric patch power pattern G(az, el) = peak_gain * cos^2(az) * cos^2(el)
    // over the front hemisphere, zero behind.
    struct ElementPattern
    {
        double peak_gain = 5.8;             // linear, 7.63 dBi
        double nominal_hpbw_deg = 32.8;     // datasheet metadata only, not used in any computation

        double gain(double az, double el) const;
    };

    double patch_gain(const ElementPattern &pattern, double az, double el);

    // How the two element gains combine into the amplitude of one Friis coefficient.
    enum class AmplitudeModel
    {
        geometric_mean, // sqrt(G_A * G_R)
        pattern_product // G_A * G_R / sqrt(peak_A * peak_R); same boresight value, steeper roll-off
    };

    std::string to_string(AmplitudeModel model);
    AmplitudeModel amplitude_model_from_string(const std::string &name);

    enum class Provenance
    {
        friis,
        fullwave
    };

    std::string to_string(Provenance provenance);

    // N_p x N_a AMAF-to-RIS transmission matrix. Rows follow the RIS layout
    // ordering, columns the AMAF layout ordering.
    struct ChannelMatrix
    {
        CMatrix entries;
        Provenance provenance = Provenance::friis;
        double frequency_ghz = 0.0;
        bool passivity_scaled = false;
        double applied_scale = 1.0;

        Eigen::Index n_ris() const { return entries.rows(); }
        Eigen::Index n_amaf() const { return entries.cols(); }
    };

    // Throws ValidationError on empty or non-finite entries
    void validate(const ChannelMatrix &t);

    // Complex field coefficient sqrt(G_A G_R) / (2 pi r) * exp(-j pi r), r in half-wavelengths.
    cplx friis_coefficient(const PairGeometry &pair, const ElementPattern &pattern_amaf,
                           const ElementPattern &pattern_ris,
                           AmplitudeModel model = AmplitudeModel::geometric_mean);

    ChannelMatrix build_t_friis(const SystemGeometry &sys, const ElementPattern &pattern,
                                double frequency_ghz = 150.0,
                                AmplitudeModel model = AmplitudeModel::geometric_mean);
}

#endif
