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

#ifndef AMAFRIS_GEOMETRY_HPP
#define AMAFRIS_GEOMETRY_HPP

#include "amafris/types.hpp"

#include <cstddef>
#include <vector>

// All lengths are in half-wavelength units. Conversion to meters happens only
// at I/O boundaries (see half_wavelength_m).
namespace amafris
{
    // Planar rectangular array.
    //
    // Element (i, j) with i < n_x, j < n_y is stored at index j * n_x + i
    // (row-major, x fastest). Every matrix, vector and file in this project uses
    // that ordering.
    struct ArrayLayout
    {
        std::size_t n_x = 0;
        std::size_t n_y = 0;
        double spacing = 1.0;
        std::vector<Vec3> positions;
        Vec3 boresight = Vec3::UnitZ();
        Vec3 x_axis = Vec3::UnitX(); // local azimuth reference; local y = boresight x x_axis

        std::size_t size() const { return positions.size(); }
        std::size_t index(std::size_t i, std::size_t j) const { return j * n_x + i; }
        Vec3 centroid() const;
        Vec3 y_axis() const { return boresight.cross(x_axis); }
    };

    // Centered row-major grid in the z = 0 plane, boresight +z.
    ArrayLayout build_ura(std::size_t n_x, std::size_t n_y, double spacing = 1.0);

    // RIS at the origin facing +z, AMAF centered on the z axis at the focal
    // distance facing -z.
    struct SystemGeometry
    {
        ArrayLayout ris;
        ArrayLayout amaf;
        double focal_distance = 0.0;
        double f_over_d = 0.0; // focal_distance / (ris.n_x * ris.spacing)
    };

    SystemGeometry place_feed(const ArrayLayout &ris, const ArrayLayout &amaf, double focal_distance);

    // Azimuth/elevation of a displacement in a boresight frame:
    //   az = atan2(d.x', d.z'),  el = atan2(d.y', hypot(d.x', d.z'))
    // where z' is the boresight and x', y' the layout's in-plane axes. With this
    // split cos(az) * cos(el) equals the cosine of the off-boresight angle.
    struct LocalAngles
    {
        double az = 0.0;
        double el = 0.0;
    };

    LocalAngles local_angles(const Vec3 &displacement, const Vec3 &boresight, const Vec3 &x_axis);

    struct PairGeometry
    {
        double r = 0.0;    // center-to-center distance
        double az_a = 0.0; // RIS element seen from the AMAF element
        double el_a = 0.0;
        double az_r = 0.0; // AMAF element seen from the RIS element
        double el_r = 0.0;
    };

    PairGeometry pair_geometry(const SystemGeometry &sys, std::size_t ris_index, std::size_t amaf_index);
}

#endif
