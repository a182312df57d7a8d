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

#include "amafris/channel_friis.hpp"

#include <cmath>

namespace amafris
{
    double ElementPattern::gain(double az, double el) const
    {
        if (!(std::abs(az) < 0.5 * pi) || !(std::abs(el) < 0.5 * pi))
            return 0.0;
        const double ca = std::cos(az);
        const double ce = std::cos(el);
        return peak_gain * ca * ca * ce * ce;
    }

    double patch_gain(const ElementPattern &pattern, double az, double el)
    {
        return pattern.gain(az, el);
    }

    std::string to_string(AmplitudeModel model)
    {
        return model == AmplitudeModel::geometric_mean ? "geometric-mean" : "pattern-product";
    }

    AmplitudeModel amplitude_model_from_string(const std::string &name)
    {
        if (name == "geometric-mean")
            return AmplitudeModel::geometric_mean;
        if (name == "pattern-product")
            return AmplitudeModel::pattern_product;
        throw ValidationError("unknown amplitude model '" + name + "' (expected geometric-mean or pattern-product)");
    }

    std::string to_string(Provenance provenance)
    {
        return provenance == Provenance::friis ? "friis" : "fullwave";
    }

    void validate(const ChannelMatrix &t)
    {
        if (t.entries.size() == 0)
            throw ValidationError("channel matrix is empty");
        if (!t.entries.allFinite())
            throw ValidationError("channel matrix has non-finite entries");
    }

    cplx friis_coefficient(const PairGeometry &pair, const ElementPattern &pattern_amaf,
                           const ElementPattern &pattern_ris, AmplitudeModel model)
    {
        if (!(pair.r > 0.0) || !std::isfinite(pair.r))
            throw ValidationError("friis_coefficient: distance must be positive");

        const double g_a = pattern_amaf.gain(pair.az_a, pair.el_a);
        const double g_r = pattern_ris.gain(pair.az_r, pair.el_r);
        double amplitude = 0.0;
        if (model == AmplitudeModel::geometric_mean)
            amplitude = std::sqrt(g_a * g_r);
        else
            amplitude = g_a * g_r / std::sqrt(pattern_amaf.peak_gain * pattern_ris.peak_gain);

        if (amplitude == 0.0)
            return {0.0, 0.0};

        // exp(-j pi r) with the phase reduced mod 2 pi first; for r up to ~1e5 this
        // keeps the argument exact to a few ulp
        const double phase = -pi * std::fmod(pair.r, 2.0);
        return std::polar(amplitude / (2.0 * pi * pair.r), phase);
    }

    ChannelMatrix build_t_friis(const SystemGeometry &sys, const ElementPattern &pattern,
                                double frequency_ghz, AmplitudeModel model)
    {
        ChannelMatrix t;
        t.entries.resize(Eigen::Index(sys.ris.size()), Eigen::Index(sys.amaf.size()));
        for (std::size_t k = 0; k < sys.ris.size(); ++k)
            for (std::size_t l = 0; l < sys.amaf.size(); ++l)
                t.entries(Eigen::Index(k), Eigen::Index(l)) =
                    friis_coefficient(pair_geometry(sys, k, l), pattern, pattern, model);
        t.provenance = Provenance::friis;
        t.frequency_ghz = frequency_ghz;
        return t;
    }
}
