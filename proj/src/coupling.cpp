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

#include "amafris/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace amafris
{
    std::string to_string(CouplingClass c)
    {
        switch (c)
        {
        case CouplingClass::adjacent:
            return "adjacent";
        case CouplingClass::diagonal:
            return "diagonal";
        case CouplingClass::distant:
            return "distant";
        }
        return {};
    }

    namespace
    {
        double to_db(cplx v)
        {
            const double mag = std::abs(v);
            return mag > 0.0 ? std::max(20.0 * std::log10(mag), coupling_floor_db) : coupling_floor_db;
        }

        CouplingClass classify(const ArrayLayout &amaf, std::size_t a, std::size_t b)
        {
            const auto ia = long(a % amaf.n_x), ja = long(a / amaf.n_x);
            const auto ib = long(b % amaf.n_x), jb = long(b / amaf.n_x);
            const long di = std::labs(ia - ib), dj = std::labs(ja - jb);
            if (di + dj == 1)
                return CouplingClass::adjacent;
            if (di == 1 && dj == 1)
                return CouplingClass::diagonal;
            return CouplingClass::distant;
        }
    }

    CouplingReport coupling_report(const SParameterDataset &ds, const ArrayLayout &amaf)
    {
        if (!ds.port_map)
            throw DataError("coupling_report: dataset has no port map");
        const auto &pm = *ds.port_map;
        if (pm.n_amaf() != amaf.size())
            throw ValidationError("coupling_report: dataset has " + std::to_string(pm.n_amaf()) +
                                  " AMAF ports, layout has " + std::to_string(amaf.size()));
        for (std::size_t f = 0; f < ds.n_frequencies(); ++f)
            if (!ds.has_amaf_block(f))
            {
                std::ostringstream msg;
                msg << "coupling_report: AMAF-AMAF block absent at " << ds.frequencies_ghz[f] << " GHz";
                throw DataError(msg.str());
            }

        CouplingReport report;
        report.frequencies_ghz = ds.frequencies_ghz;
        for (std::size_t i = 0; i < pm.n_amaf(); ++i)
            for (std::size_t j = i + 1; j < pm.n_amaf(); ++j)
            {
                CouplingPair pair;
                pair.i = i;
                pair.j = j;
                pair.cls = classify(amaf, i, j);
                for (std::size_t f = 0; f < ds.n_frequencies(); ++f)
                {
                    pair.s_ij_db.push_back(to_db(ds.at(f, pm.amaf_port(i), pm.amaf_port(j))));
                    pair.s_ji_db.push_back(to_db(ds.at(f, pm.amaf_port(j), pm.amaf_port(i))));
                    pair.max_asymmetry_db =
                        std::max(pair.max_asymmetry_db, std::abs(pair.s_ij_db.back() - pair.s_ji_db.back()));
                }
                report.pairs.push_back(std::move(pair));
            }

        for (auto cls : {CouplingClass::adjacent, CouplingClass::diagonal, CouplingClass::distant})
        {
            CouplingClassSummary sum;
            sum.cls = cls;
            sum.min_db = std::numeric_limits<double>::infinity();
            sum.max_db = -std::numeric_limits<double>::infinity();
            for (const auto &p : report.pairs)
            {
                if (p.cls != cls)
                    continue;
                ++sum.pairs;
                for (const auto *trace : {&p.s_ij_db, &p.s_ji_db})
                    for (double v : *trace)
                    {
                        sum.min_db = std::min(sum.min_db, v);
                        sum.max_db = std::max(sum.max_db, v);
                    }
            }
            if (sum.pairs > 0)
                report.summary.push_back(sum);
        }

        const CouplingClassSummary *adjacent = nullptr;
        const CouplingClassSummary *diagonal = nullptr;
        for (const auto &s : report.summary)
        {
            if (s.cls == CouplingClass::adjacent)
                adjacent = &s;
            if (s.cls == CouplingClass::diagonal)
                diagonal = &s;
        }
        std::ostringstream msg;
        if (adjacent && adjacent->max_db > coupling_warn_adjacent_db)
        {
            msg << "WARN: adjacent AMAF coupling reaches " << adjacent->max_db << " dB (above "
                << coupling_warn_adjacent_db << " dB)";
            report.warnings.push_back(msg.str());
            msg.str({});
        }
        if (adjacent && diagonal && diagonal->max_db > adjacent->max_db)
        {
            msg << "WARN: diagonal coupling (" << diagonal->max_db << " dB) exceeds adjacent coupling ("
                << adjacent->max_db << " dB)";
            report.warnings.push_back(msg.str());
        }
        return report;
    }

    void write_coupling_csv(std::ostream &os, const CouplingReport &report)
    {
        os << "i,j,class,freq_GHz,s_ij_dB,s_ji_dB\n" << std::setprecision(17);
        for (const auto &p : report.pairs)
            for (std::size_t f = 0; f < report.frequencies_ghz.size(); ++f)
                os << p.i + 1 << ',' << p.j + 1 << ',' << to_string(p.cls) << ',' << report.frequencies_ghz[f] << ','
                   << p.s_ij_db[f] << ',' << p.s_ji_db[f] << '\n';
    }
}
