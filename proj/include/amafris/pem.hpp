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

#ifndef AMAFRIS_PEM_HPP
#define AMAFRIS_PEM_HPP

#include "amafris/channel_friis.hpp"
#include "amafris/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>

namespace amafris
{
    // Principal singular triplet T w1 = sigma1 u1.
    // w1 drives the AMAF ports (feed weights), u1 is the resulting RIS-side mode.
    struct SingularTriplet
    {
        double sigma1 = 0.0;
        CVector w1;
        CVector u1;
        int iterations = 0;
        double residual = 0.0; // || T^H u1 - sigma1 w1 ||
    };

    struct PowerIterationOptions
    {
        double tol = 1e-10; // relative change of the sigma1 estimate
        int max_iter = 10000;
        std::uint64_t seed = 1;
    };

    class ConvergenceError : public std::runtime_error
    {
    public:
        ConvergenceError(const std::string &message, SingularTriplet best)
            : std::runtime_error(message), best_(std::move(best)) {}
        const SingularTriplet &best_estimate() const { return best_; }

    private:
        SingularTriplet best_;
    };

    // Power iteration on T^H T from a seeded Gaussian start vector. The global
    // phase is fixed by making the largest-magnitude entry of w1 real-positive.
    SingularTriplet principal_triplet(const ChannelMatrix &t, const PowerIterationOptions &opt = {});
    SingularTriplet principal_triplet(const CMatrix &t, const PowerIterationOptions &opt = {});

    struct CeilingResult
    {
        ChannelMatrix matrix;
        double applied_scale = 1.0;
        double sigma1_before = 0.0;
    };

    // Rescales the whole matrix by 1/sigma1 when sigma1 > 1; identity otherwise.
    CeilingResult apply_passivity_ceiling(const ChannelMatrix &t, const PowerIterationOptions &opt = {});

    // Complex excitation across the RIS aperture, ordered like the RIS layout
    struct ExcitationVector
    {
        CVector values;
        std::size_t n_x = 0;
        std::size_t n_y = 0;

        Eigen::Index size() const { return values.size(); }
    };

    // values = T w
    ExcitationVector ris_excitation(const ChannelMatrix &t, const CVector &w, std::size_t n_x, std::size_t n_y);

    struct PowerTaper
    {
        double db = 0.0;      // 10 log10(max|e|^2 / min|e|^2); +inf when has_null
        bool has_null = false; // at least one entry exactly zero
    };

    PowerTaper power_taper_db(const ExcitationVector &e);

    // n_y rows of n_x comma-separated values, |e| normalized to a maximum of 1
    void write_excitation_grid_csv(std::ostream &os, const ExcitationVector &e);
}

#endif
