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

#include "amafris/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <ostream>

namespace amafris
{
    Vec3 direction_vector(const Direction &d)
    {
        const double ce = std::cos(d.el);
        return {ce * std::sin(d.az), std::sin(d.el), ce * std::cos(d.az)};
    }

    double wrap_phase(double phase)
    {
        double w = std::fmod(phase, 2.0 * pi);
        if (w < 0.0)
            w += 2.0 * pi;
        return w >= 2.0 * pi ? 0.0 : w;
    }

    namespace
    {
        void check_front(const Direction &d)
        {
            if (!(std::abs(d.az) < 0.5 * pi) || !(std::abs(d.el) < 0.5 * pi))
                throw ValidationError("steering direction must lie in the front hemisphere");
        }

        std::vector<double> axis(double lo, double hi, double step)
        {
            if (!(step > 0.0) || !(hi >= lo))
                throw ValidationError("pattern grid: step must be positive and max >= min");
            const auto n = std::size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = lo + double(i) * step;
            return v;
        }

        CVector weighted(const ExcitationVector &e, const PhaseConfig &cfg, std::size_t n)
        {
            if (std::size_t(e.size()) != n || cfg.phases.size() != n)
                throw ValidationError("radiation pattern: layout has " + std::to_string(n) + " elements, excitation " +
                                      std::to_string(e.size()) + ", phase config " + std::to_string(cfg.phases.size()));
            CVector a(e.values.size());
            for (Eigen::Index p = 0; p < a.size(); ++p)
                a(p) = e.values(p) * std::polar(1.0, cfg.phases[std::size_t(p)]);
            return a;
        }

        // Positions on a regular x/y grid in a common plane allow a separable array factor
        bool separable(const ArrayLayout &layout)
        {
            if (layout.n_x * layout.n_y != layout.size() || layout.size() == 0)
                return false;
            const Vec3 &origin = layout.positions.front();
            for (std::size_t j = 0; j < layout.n_y; ++j)
                for (std::size_t i = 0; i < layout.n_x; ++i)
                {
                    const Vec3 &p = layout.positions[layout.index(i, j)];
                    if (p.x() != layout.positions[layout.index(i, 0)].x() ||
                        p.y() != layout.positions[layout.index(0, j)].y() || p.z() != origin.z())
                        return false;
                }
            return true;
        }

        double to_dbi(double linear)
        {
            return linear > 0.0 ? std::max(10.0 * std::log10(linear), gain_floor_dbi) : gain_floor_dbi;
        }

        double trapezoid_weight(std::size_t i, std::size_t n, double step)
        {
            return (n > 1 && (i == 0 || i + 1 == n)) ? 0.5 * step : step;
        }
    }

    PhaseConfig steering_phases(const ArrayLayout &layout, const Direction &direction)
    {
        check_front(direction);
        const Vec3 d = direction_vector(direction);
        PhaseConfig cfg;
        cfg.phases.reserve(layout.size());
        for (const auto &p : layout.positions)
            cfg.phases.push_back(wrap_phase(-pi * p.dot(d)));
        return cfg;
    }

    PhaseConfig steering_phases(const ArrayLayout &layout, const Direction &direction, const ExcitationVector &excitation)
    {
        if (std::size_t(excitation.size()) != layout.size())
            throw ValidationError("steering_phases: excitation length does not match layout");
        PhaseConfig cfg = steering_phases(layout, direction);
        for (std::size_t p = 0; p < cfg.phases.size(); ++p)
            cfg.phases[p] = wrap_phase(cfg.phases[p] - std::arg(excitation.values(Eigen::Index(p))));
        return cfg;
    }

    PhaseConfig quantize_phases(const PhaseConfig &cfg, int bits)
    {
        if (bits < 1 || bits > 30)
            throw ValidationError("quantize_phases: bits must be in 1..30");
        const double levels = std::ldexp(1.0, bits);
        const double step = 2.0 * pi / levels;
        PhaseConfig out;
        out.bits = bits;
        out.phases.reserve(cfg.phases.size());
        for (double phase : cfg.phases)
        {
            double m = std::ceil(wrap_phase(phase) / step - 0.5);
            if (m >= levels)
                m -= levels;
            out.phases.push_back(m * step);
        }
        return out;
    }

    PatternGrid radiation_pattern(const ArrayLayout &layout, const ExcitationVector &excitation, const PhaseConfig &cfg,
                                  const ElementPattern &element, const GridSpec &spec, GainNormalization normalization)
    {
        const CVector a = weighted(excitation, cfg, layout.size());
        const double input_power = a.squaredNorm();
        if (!(input_power > 0.0))
            throw ValidationError("radiation pattern: all-zero excitation");

        PatternGrid grid;
        grid.az_deg = axis(spec.az_min_deg, spec.az_max_deg, spec.step_deg);
        grid.el_deg = axis(spec.el_min_deg, spec.el_max_deg, spec.step_deg);
        grid.step_deg = spec.step_deg;
        grid.normalization = normalization;
        const std::size_t n_az = grid.n_az(), n_el = grid.n_el();
        std::vector<double> power(n_az * n_el, 0.0);

        const bool sep = separable(layout);
        const std::size_t nx = layout.n_x, ny = layout.n_y;
        std::vector<double> xs(nx), ys(ny);
        if (sep)
        {
            for (std::size_t i = 0; i < nx; ++i)
                xs[i] = layout.positions[layout.index(i, 0)].x();
            for (std::size_t j = 0; j < ny; ++j)
                ys[j] = layout.positions[layout.index(0, j)].y();
        }
        std::vector<cplx> xph(nx), yph(ny);

        for (std::size_t ie = 0; ie < n_el; ++ie)
        {
            const double el = deg2rad(grid.el_deg[ie]);
            const double v = std::sin(el);
            if (sep)
                for (std::size_t j = 0; j < ny; ++j)
                    yph[j] = std::polar(1.0, pi * ys[j] * v);
            for (std::size_t ia = 0; ia < n_az; ++ia)
            {
                const double az = deg2rad(grid.az_deg[ia]);
                const double g_elem = element.gain(az, el);
                if (g_elem == 0.0)
                    continue;
                cplx af = 0.0;
                if (sep)
                {
                    const double u = std::cos(el) * std::sin(az);
                    for (std::size_t i = 0; i < nx; ++i)
                        xph[i] = std::polar(1.0, pi * xs[i] * u);
                    for (std::size_t j = 0; j < ny; ++j)
                    {
                        cplx row = 0.0;
                        const cplx *aj = a.data() + j * nx;
                        for (std::size_t i = 0; i < nx; ++i)
                            row += aj[i] * xph[i];
                        af += row * yph[j];
                    }
                }
                else
                {
                    const Vec3 d = direction_vector({az, el});
                    for (std::size_t p = 0; p < layout.size(); ++p)
                        af += a(Eigen::Index(p)) * std::polar(1.0, pi * layout.positions[p].dot(d));
                }
                power[ie * n_az + ia] = g_elem * std::norm(af);
            }
        }

        double scale = 1.0 / input_power;
        if (normalization == GainNormalization::directivity)
        {
            double integral = 0.0;
            const double step = deg2rad(spec.step_deg);
            for (std::size_t ie = 0; ie < n_el; ++ie)
            {
                const double w_el = trapezoid_weight(ie, n_el, step) * std::cos(deg2rad(grid.el_deg[ie]));
                for (std::size_t ia = 0; ia < n_az; ++ia)
                    integral += power[ie * n_az + ia] * w_el * trapezoid_weight(ia, n_az, step);
            }
            if (!(integral > 0.0))
                throw ValidationError("radiation pattern: zero radiated power on the grid");
            scale = 4.0 * pi / integral;
        }

        grid.gain_dbi.resize(power.size());
        for (std::size_t i = 0; i < power.size(); ++i)
            grid.gain_dbi[i] = to_dbi(power[i] * scale);
        return grid;
    }

    double gain_toward(const ArrayLayout &layout, const ExcitationVector &excitation, const PhaseConfig &cfg,
                       const ElementPattern &element, const Direction &direction)
    {
        const CVector a = weighted(excitation, cfg, layout.size());
        const double input_power = a.squaredNorm();
        if (!(input_power > 0.0))
            throw ValidationError("gain_toward: all-zero excitation");
        const Vec3 d = direction_vector(direction);
        cplx af = 0.0;
        for (std::size_t p = 0; p < layout.size(); ++p)
            af += a(Eigen::Index(p)) * std::polar(1.0, pi * layout.positions[p].dot(d));
        return to_dbi(element.gain(direction.az, direction.el) * std::norm(af) / input_power);
    }

    double solid_angle_integral(const PatternGrid &grid)
    {
        const double step = deg2rad(grid.step_deg);
        double integral = 0.0;
        for (std::size_t ie = 0; ie < grid.n_el(); ++ie)
        {
            const double w_el = trapezoid_weight(ie, grid.n_el(), step) * std::cos(deg2rad(grid.el_deg[ie]));
            for (std::size_t ia = 0; ia < grid.n_az(); ++ia)
            {
                const double g = grid.gain(ie, ia);
                if (g > gain_floor_dbi)
                    integral += std::pow(10.0, g / 10.0) * w_el * trapezoid_weight(ia, grid.n_az(), step);
            }
        }
        return integral;
    }

    namespace
    {
        // -3 dB crossing walking away from the peak along one cut; linear
        // interpolation in dB between the bracketing samples
        double crossing(const std::vector<double> &coords, const std::vector<double> &values, std::size_t peak, int dir)
        {
            const double threshold = values[peak] - 3.0;
            std::size_t i = peak;
            while (true)
            {
                if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == values.size()))
                    return coords[i]; // beam wider than the grid
                const std::size_t next = dir < 0 ? i - 1 : i + 1;
                if (values[next] < threshold)
                {
                    const double t = (values[i] - threshold) / (values[i] - values[next]);
                    return coords[i] + t * (coords[next] - coords[i]);
                }
                i = next;
            }
        }
    }

    PatternMetrics pattern_metrics(const PatternGrid &grid)
    {
        const std::size_t n_az = grid.n_az(), n_el = grid.n_el();
        if (grid.gain_dbi.empty() || grid.gain_dbi.size() != n_az * n_el)
            throw ValidationError("pattern_metrics: empty or inconsistent grid");

        const auto max_it = std::max_element(grid.gain_dbi.begin(), grid.gain_dbi.end());
        const auto min_it = std::min_element(grid.gain_dbi.begin(), grid.gain_dbi.end());
        if (*max_it - *min_it < 1e-9 || *max_it <= gain_floor_dbi)
            throw ValidationError("pattern_metrics: flat pattern has no distinct peak");

        const auto peak = std::size_t(max_it - grid.gain_dbi.begin());
        const std::size_t pe = peak / n_az, pa = peak % n_az;

        PatternMetrics m;
        m.peak_dbi = *max_it;
        m.peak_az_deg = grid.az_deg[pa];
        m.peak_el_deg = grid.el_deg[pe];

        // Main beam: flood fill by non-increasing steps from the peak
        std::vector<char> in_beam(grid.gain_dbi.size(), 0);
        std::deque<std::size_t> queue{peak};
        in_beam[peak] = 1;
        while (!queue.empty())
        {
            const std::size_t c = queue.front();
            queue.pop_front();
            const std::size_t ce = c / n_az, ca = c % n_az;
            const double gc = grid.gain_dbi[c];
            auto visit = [&](std::size_t n)
            {
                if (!in_beam[n] && grid.gain_dbi[n] <= gc)
                {
                    in_beam[n] = 1;
                    queue.push_back(n);
                }
            };
            if (ca > 0)
                visit(c - 1);
            if (ca + 1 < n_az)
                visit(c + 1);
            if (ce > 0)
                visit(c - n_az);
            if (ce + 1 < n_el)
                visit(c + n_az);
        }

        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.gain_dbi.size(); ++i)
            if (!in_beam[i])
                best = std::max(best, grid.gain_dbi[i]);
        if (std::isfinite(best) && best > gain_floor_dbi)
        {
            m.sidelobe_peak_dbi = best;
            m.sll_db = best - m.peak_dbi;
        }

        std::vector<double> az_cut(n_az), el_cut(n_el);
        for (std::size_t ia = 0; ia < n_az; ++ia)
            az_cut[ia] = grid.gain(pe, ia);
        for (std::size_t ie = 0; ie < n_el; ++ie)
            el_cut[ie] = grid.gain(ie, pa);
        m.hpbw_az_deg = crossing(grid.az_deg, az_cut, pa, +1) - crossing(grid.az_deg, az_cut, pa, -1);
        m.hpbw_el_deg = crossing(grid.el_deg, el_cut, pe, +1) - crossing(grid.el_deg, el_cut, pe, -1);
        return m;
    }

    void write_pattern_grid_csv(std::ostream &os, const PatternGrid &grid)
    {
        os << "az_deg,el_deg,gain_dBi\n" << std::setprecision(10);
        for (std::size_t ie = 0; ie < grid.n_el(); ++ie)
            for (std::size_t ia = 0; ia < grid.n_az(); ++ia)
                os << grid.az_deg[ia] << ',' << grid.el_deg[ie] << ',' << grid.gain(ie, ia) << '\n';
    }

    void write_pattern_cut_csv(std::ostream &os, const PatternGrid &grid, CutAxis cut)
    {
        const auto peak = std::size_t(std::max_element(grid.gain_dbi.begin(), grid.gain_dbi.end()) - grid.gain_dbi.begin());
        const std::size_t pe = peak / grid.n_az(), pa = peak % grid.n_az();
        os << std::setprecision(10);
        if (cut == CutAxis::azimuth)
        {
            os << "az_deg,gain_dBi\n";
            for (std::size_t ia = 0; ia < grid.n_az(); ++ia)
                os << grid.az_deg[ia] << ',' << grid.gain(pe, ia) << '\n';
        }
        else
        {
            os << "el_deg,gain_dBi\n";
            for (std::size_t ie = 0; ie < grid.n_el(); ++ie)
                os << grid.el_deg[ie] << ',' << grid.gain(ie, pa) << '\n';
        }
    }
}
