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

#include "amafris/geometry.hpp"

#include <cmath>
#include <string>

namespace amafris
{
    Vec3 ArrayLayout::centroid() const
    {
        Vec3 c = Vec3::Zero();
        for (const auto &p : positions)
            c += p;
        return positions.empty() ? c : Vec3(c / double(positions.size()));
    }

    ArrayLayout build_ura(std::size_t n_x, std::size_t n_y, double spacing)
    {
        if (n_x == 0 || n_y == 0)
            throw ValidationError("build_ura: element counts must be >= 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw ValidationError("build_ura: spacing must be positive and finite");

        ArrayLayout layout;
        layout.n_x = n_x;
        layout.n_y = n_y;
        layout.spacing = spacing;
        layout.positions.reserve(n_x * n_y);
        const double cx = 0.5 * double(n_x - 1);
        const double cy = 0.5 * double(n_y - 1);
        for (std::size_t j = 0; j < n_y; ++j)
            for (std::size_t i = 0; i < n_x; ++i)
                layout.positions.emplace_back((double(i) - cx) * spacing, (double(j) - cy) * spacing, 0.0);
        return layout;
    }

    SystemGeometry place_feed(const ArrayLayout &ris, const ArrayLayout &amaf, double focal_distance)
    {
        if (!(focal_distance > 0.0) || !std::isfinite(focal_distance))
            throw ValidationError("place_feed: focal distance must be positive");
        if (ris.size() == 0 || amaf.size() == 0)
            throw ValidationError("place_feed: empty array layout");

        SystemGeometry sys;
        sys.focal_distance = focal_distance;

        sys.ris = ris;
        const Vec3 ris_c = ris.centroid();
        for (auto &p : sys.ris.positions)
            p -= ris_c;
        sys.ris.boresight = Vec3::UnitZ();
        sys.ris.x_axis = Vec3::UnitX();

        sys.amaf = amaf;
        const Vec3 amaf_c = amaf.centroid();
        for (auto &p : sys.amaf.positions)
        {
            p -= amaf_c;
            p.z() = focal_distance;
        }
        sys.amaf.boresight = -Vec3::UnitZ();
        sys.amaf.x_axis = Vec3::UnitX();

        sys.f_over_d = focal_distance / (double(ris.n_x) * ris.spacing);
        return sys;
    }

    LocalAngles local_angles(const Vec3 &d, const Vec3 &boresight, const Vec3 &x_axis)
    {
        const double dz = d.dot(boresight);
        const double dx = d.dot(x_axis);
        const double dy = d.dot(boresight.cross(x_axis));
        return {std::atan2(dx, dz), std::atan2(dy, std::hypot(dx, dz))};
    }

    PairGeometry pair_geometry(const SystemGeometry &sys, std::size_t k, std::size_t l)
    {
        if (k >= sys.ris.size())
            throw ValidationError("pair_geometry: RIS index " + std::to_string(k) + " out of range");
        if (l >= sys.amaf.size())
            throw ValidationError("pair_geometry: AMAF index " + std::to_string(l) + " out of range");

        const Vec3 d = sys.ris.positions[k] - sys.amaf.positions[l]; // AMAF -> RIS
        const auto seen_by_amaf = local_angles(d, sys.amaf.boresight, sys.amaf.x_axis);
        const auto seen_by_ris = local_angles(-d, sys.ris.boresight, sys.ris.x_axis);
        return {d.norm(), seen_by_amaf.az, seen_by_amaf.el, seen_by_ris.az, seen_by_ris.el};
    }
}
