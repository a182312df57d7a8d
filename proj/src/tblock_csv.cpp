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
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace amafris
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos)
                return {};
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        }

        double parse_double(const std::string &field, std::size_t line_no, const char *what)
        {
            char *end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (field.empty() || end != field.c_str() + field.size())
                throw ParseError(line_no, std::string("non-numeric ") + what + " '" + field + "'");
            if (!std::isfinite(v))
                throw ParseError(line_no, std::string("non-finite ") + what + " '" + field + "'");
            return v;
        }

        std::size_t parse_index(const std::string &field, std::size_t line_no, const char *what)
        {
            std::size_t pos = 0;
            unsigned long v = 0;
            try
            {
                v = std::stoul(field, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (pos == 0 || pos != field.size() || v == 0 || field.front() == '-' || field.front() == '+')
                throw ParseError(line_no, std::string("invalid ") + what + " '" + field + "' (1-based index expected)");
            return std::size_t(v);
        }

        struct Row
        {
            std::size_t line = 0;
            bool amaf_out = false; // ris_port column held "A<m>"
            std::size_t out = 0;   // 1-based element
            std::size_t in = 0;    // 1-based AMAF element
            cplx value;
        };
    }

    SParameterDataset parse_tblock_csv(std::istream &is)
    {
        std::string line;
        std::size_t line_no = 0;
        bool header_seen = false;

        // freq -> rows; frequency keys are compared exactly as parsed
        std::map<double, std::vector<Row>> by_freq;
        std::size_t last_data_line = 0;

        while (std::getline(is, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
                line.erase(0, 3);
            if (trim(line).empty())
                continue;

            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ','))
                fields.push_back(trim(field));
            if (!line.empty() && line.back() == ',')
                fields.emplace_back();

            if (!header_seen)
            {
                const std::vector<std::string> expected{"freq_GHz", "ris_port", "amaf_port", "re", "im"};
                if (fields != expected)
                    throw ParseError(line_no, "expected header 'freq_GHz,ris_port,amaf_port,re,im'");
                header_seen = true;
                continue;
            }
            if (fields.size() != 5)
                throw ParseError(line_no, "expected 5 fields, found " + std::to_string(fields.size()));

            Row row;
            row.line = line_no;
            const double f = parse_double(fields[0], line_no, "frequency");
            if (!(f > 0.0))
                throw ParseError(line_no, "frequency must be positive");
            if (!fields[1].empty() && (fields[1][0] == 'A' || fields[1][0] == 'a'))
            {
                row.amaf_out = true;
                row.out = parse_index(fields[1].substr(1), line_no, "AMAF port");
            }
            else
                row.out = parse_index(fields[1], line_no, "ris_port");
            row.in = parse_index(fields[2], line_no, "amaf_port");
            row.value = {parse_double(fields[3], line_no, "real part"), parse_double(fields[4], line_no, "imaginary part")};
            by_freq[f].push_back(row);
            last_data_line = line_no;
        }
        if (!header_seen)
            throw ParseError(0, "empty file: missing header 'freq_GHz,ris_port,amaf_port,re,im'");
        if (by_freq.empty())
            throw ParseError(0, "no data rows");

        std::size_t n_ris = 0;
        std::size_t n_amaf = 0;
        for (const auto &[f, rows] : by_freq)
            for (const auto &r : rows)
            {
                n_amaf = std::max(n_amaf, r.in);
                if (r.amaf_out)
                    n_amaf = std::max(n_amaf, r.out);
                else
                    n_ris = std::max(n_ris, r.out);
            }
        if (n_ris == 0)
            throw ParseError(0, "no RIS<-AMAF rows");

        SParameterDataset ds;
        ds.n_ports = n_ris + n_amaf;
        ds.partial = true;
        ds.port_map = PortMap::canonical(n_ris, n_amaf);
        const auto n = Eigen::Index(ds.n_ports);

        for (const auto &[f, rows] : by_freq)
        {
            CMatrix s = CMatrix::Zero(n, n);
            SParameterDataset::Mask mask = SParameterDataset::Mask::Constant(n, n, false);
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_line;
            bool any_amaf = false;
            for (const auto &r : rows)
            {
                const std::size_t out = r.amaf_out ? n_ris + r.out - 1 : r.out - 1;
                const std::size_t in = n_ris + r.in - 1;
                const auto key = std::make_pair(out, in);
                if (auto it = first_line.find(key); it != first_line.end())
                {
                    std::ostringstream msg;
                    msg << "duplicate row for " << (r.amaf_out ? "A" : "") << r.out << "<-" << r.in << " at " << f
                        << " GHz (first seen on line " << it->second << ")";
                    throw ParseError(r.line, msg.str());
                }
                first_line.emplace(key, r.line);
                s(Eigen::Index(out), Eigen::Index(in)) = r.value;
                mask(Eigen::Index(out), Eigen::Index(in)) = true;
                any_amaf = any_amaf || r.amaf_out;
            }

            // The RIS<-AMAF block is always declared complete; the AMAF block is
            // complete (off-diagonal) as soon as one of its rows appears.
            for (std::size_t k = 0; k < n_ris; ++k)
                for (std::size_t l = 0; l < n_amaf; ++l)
                    if (!mask(Eigen::Index(k), Eigen::Index(n_ris + l)))
                    {
                        std::ostringstream msg;
                        msg << "missing row ris_port=" << k + 1 << " amaf_port=" << l + 1 << " at " << f
                            << " GHz (file ends after this data row)";
                        throw ParseError(last_data_line, msg.str());
                    }
            if (any_amaf)
                for (std::size_t i = 0; i < n_amaf; ++i)
                    for (std::size_t j = 0; j < n_amaf; ++j)
                        if (i != j && !mask(Eigen::Index(n_ris + i), Eigen::Index(n_ris + j)))
                        {
                            std::ostringstream msg;
                            msg << "missing AMAF coupling row A" << i + 1 << "<-" << j + 1 << " at " << f
                                << " GHz (file ends after this data row)";
                            throw ParseError(last_data_line, msg.str());
                        }

            ds.frequencies_ghz.push_back(f);
            ds.coefficients.push_back(std::move(s));
            ds.present.push_back(std::move(mask));
        }
        return ds;
    }

    void write_tblock_csv(std::ostream &os, const SParameterDataset &ds)
    {
        validate(ds);
        if (!ds.port_map)
            throw ValidationError("write_tblock_csv: dataset has no port map");
        const auto &pm = *ds.port_map;
        os << "freq_GHz,ris_port,amaf_port,re,im\n" << std::setprecision(17);
        for (std::size_t f = 0; f < ds.n_frequencies(); ++f)
        {
            if (!ds.has_transmission_block(f))
                throw ValidationError("write_tblock_csv: RIS<-AMAF block incomplete");
            const double freq = ds.frequencies_ghz[f];
            for (std::size_t k = 0; k < pm.n_ris(); ++k)
                for (std::size_t l = 0; l < pm.n_amaf(); ++l)
                {
                    const cplx v = ds.at(f, pm.ris_port(k), pm.amaf_port(l));
                    os << freq << ',' << k + 1 << ',' << l + 1 << ',' << v.real() << ',' << v.imag() << '\n';
                }
            if (!ds.has_amaf_block(f))
                continue;
            for (std::size_t i = 0; i < pm.n_amaf(); ++i)
                for (std::size_t j = 0; j < pm.n_amaf(); ++j)
                {
                    if (!ds.has(f, pm.amaf_port(i), pm.amaf_port(j)))
                        continue;
                    const cplx v = ds.at(f, pm.amaf_port(i), pm.amaf_port(j));
                    os << freq << ",A" << i + 1 << ',' << j + 1 << ',' << v.real() << ',' << v.imag() << '\n';
                }
        }
    }
}
