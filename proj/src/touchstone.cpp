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
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace amafris
{
    namespace
    {
        std::string upper(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::toupper(c)); });
            return s;
        }

        struct OptionLine
        {
            double to_ghz = 1.0;
            TouchstoneFormat format = TouchstoneFormat::ma;
            double reference_ohm = 50.0;
        };

        OptionLine parse_option_line(const std::string &body, std::size_t line_no)
        {
            OptionLine opt;
            std::istringstream ss(body);
            std::string tok;
            while (ss >> tok)
            {
                const std::string t = upper(tok);
                if (t == "HZ")
                    opt.to_ghz = 1e-9;
                else if (t == "KHZ")
                    opt.to_ghz = 1e-6;
                else if (t == "MHZ")
                    opt.to_ghz = 1e-3;
                else if (t == "GHZ")
                    opt.to_ghz = 1.0;
                else if (t == "S")
                    ;
                else if (t == "Y" || t == "Z" || t == "H" || t == "G")
                    throw ParseError(line_no, "malformed option line: only S-parameters are supported, got '" + tok + "'");
                else if (t == "RI")
                    opt.format = TouchstoneFormat::ri;
                else if (t == "MA")
                    opt.format = TouchstoneFormat::ma;
                else if (t == "DB")
                    opt.format = TouchstoneFormat::db;
                else if (t == "R")
                {
                    std::string value;
                    if (!(ss >> value))
                        throw ParseError(line_no, "malformed option line: 'R' without a reference impedance");
                    char *end = nullptr;
                    opt.reference_ohm = std::strtod(value.c_str(), &end);
                    if (end != value.c_str() + value.size() || !(opt.reference_ohm > 0.0))
                        throw ParseError(line_no, "malformed option line: bad reference impedance '" + value + "'");
                }
                else
                    throw ParseError(line_no, "malformed option line: unexpected token '" + tok + "'");
            }
            return opt;
        }

        struct Record
        {
            std::size_t first_line = 0;
            std::size_t last_line = 0;
            std::vector<double> values;
        };

        cplx decode(double a, double b, TouchstoneFormat fmt)
        {
            switch (fmt)
            {
            case TouchstoneFormat::ri:
                return {a, b};
            case TouchstoneFormat::ma:
                return std::polar(a, deg2rad(b));
            case TouchstoneFormat::db:
                return std::polar(std::pow(10.0, a / 20.0), deg2rad(b));
            }
            return {};
        }

        // (out, in) of the m-th coefficient in a record
        std::pair<std::size_t, std::size_t> coefficient_position(std::size_t m, std::size_t n)
        {
            if (n == 2) // S11 S21 S12 S22
                return {m % 2, m / 2};
            return {m / n, m % n};
        }

        std::size_t isqrt_exact(std::size_t v)
        {
            auto r = std::size_t(std::llround(std::sqrt(double(v))));
            return r * r == v ? r : 0;
        }
    }

    std::optional<std::size_t> touchstone_ports_from_extension(const std::filesystem::path &path)
    {
        static const std::regex pattern(R"(^\.[sS]([0-9]+)[pP]$)");
        const std::string ext = path.extension().string();
        std::smatch m;
        if (std::regex_match(ext, m, pattern))
        {
            const auto n = std::stoul(m[1].str());
            if (n > 0)
                return std::size_t(n);
        }
        return std::nullopt;
    }

    SParameterDataset parse_touchstone(std::istream &is, std::optional<std::size_t> n_ports)
    {
        std::optional<OptionLine> option;
        std::vector<Record> records;
        std::string line;
        std::size_t line_no = 0;

        while (std::getline(is, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (const auto bang = line.find('!'); bang != std::string::npos)
                line.erase(bang);
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos)
                continue;
            if (line[first] == '#')
            {
                if (!option) // later option lines are ignored
                    option = parse_option_line(line.substr(first + 1), line_no);
                continue;
            }
            if (line[first] == '[')
                throw ParseError(line_no, "Touchstone v2 keyword '" + line.substr(first) + "' is not supported");
            if (!option)
                throw ParseError(line_no, "data before the option line");

            std::istringstream ss(line);
            std::string tok;
            std::vector<double> values;
            while (ss >> tok)
            {
                char *end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end != tok.c_str() + tok.size() || tok.empty())
                    throw ParseError(line_no, "non-numeric token '" + tok + "'");
                if (!std::isfinite(v))
                    throw ParseError(line_no, "non-finite value '" + tok + "'");
                values.push_back(v);
            }

            // A record starts on a line with an odd value count (frequency + pairs);
            // continuation lines carry whole pairs only.
            if (values.size() % 2 == 1 || records.empty())
                records.push_back({line_no, line_no, {}});
            auto &rec = records.back();
            rec.last_line = line_no;
            rec.values.insert(rec.values.end(), values.begin(), values.end());
        }

        if (!option)
            throw ParseError(0, "missing option line");
        if (records.empty())
            throw ParseError(0, "no data records");

        std::size_t n = 0;
        if (n_ports)
            n = *n_ports;
        else
        {
            const std::size_t count = records.front().values.size();
            n = count % 2 == 1 ? isqrt_exact((count - 1) / 2) : 0;
            if (n == 0)
                throw ParseError(records.front().first_line,
                                 "cannot infer port count from a record of " + std::to_string(count) + " values");
        }
        const std::size_t expected = 1 + 2 * n * n;

        SParameterDataset ds;
        ds.n_ports = n;
        ds.reference_ohm = option->reference_ohm;
        const auto np = Eigen::Index(n);
        for (std::size_t r = 0; r < records.size(); ++r)
        {
            const auto &rec = records[r];
            if (rec.values.size() != expected)
            {
                std::string msg = "record has " + std::to_string(rec.values.size()) + " values, a " +
                                  std::to_string(n) + "-port record needs " + std::to_string(expected);
                if (rec.last_line != rec.first_line)
                    msg += " (record spans lines " + std::to_string(rec.first_line) + "-" +
                           std::to_string(rec.last_line) + ")";
                if (r + 1 == records.size() && rec.values.size() < expected)
                {
                    msg = "truncated record: " + msg + "; last complete record ends at line " +
                          (r > 0 ? std::to_string(records[r - 1].last_line) : std::string("(none)"));
                }
                throw ParseError(rec.first_line, msg);
            }
            const double f = rec.values[0] * option->to_ghz;
            if (!(f > 0.0))
                throw ParseError(rec.first_line, "frequency must be positive");
            if (!ds.frequencies_ghz.empty() && !(f > ds.frequencies_ghz.back()))
                throw ParseError(rec.first_line,
                                 "frequencies must be strictly increasing (noise parameter blocks are not supported)");

            CMatrix s(np, np);
            for (std::size_t m = 0; m < n * n; ++m)
            {
                const auto [out, in] = coefficient_position(m, n);
                s(Eigen::Index(out), Eigen::Index(in)) =
                    decode(rec.values[1 + 2 * m], rec.values[2 + 2 * m], option->format);
            }
            ds.frequencies_ghz.push_back(f);
            ds.coefficients.push_back(std::move(s));
            ds.present.push_back(SParameterDataset::Mask::Constant(np, np, true));
        }
        return ds;
    }

    void write_touchstone(std::ostream &os, const SParameterDataset &ds, TouchstoneFormat format)
    {
        validate(ds);
        for (const auto &mask : ds.present)
            if (!mask.all())
                throw ValidationError("write_touchstone: dataset is partial; Touchstone needs every coefficient");

        const char *fmt_name = format == TouchstoneFormat::ri ? "RI" : (format == TouchstoneFormat::ma ? "MA" : "DB");
        os << "! " << ds.n_ports << "-port S-parameters written by amafris\n";
        os << "# GHz S " << fmt_name << " R " << std::setprecision(17) << ds.reference_ohm << '\n';

        auto encode = [&](cplx v) -> std::pair<double, double>
        {
            switch (format)
            {
            case TouchstoneFormat::ri:
                return {v.real(), v.imag()};
            case TouchstoneFormat::ma:
                return {std::abs(v), rad2deg(std::arg(v))};
            case TouchstoneFormat::db:
            {
                const double mag = std::abs(v);
                return {mag > 0.0 ? 20.0 * std::log10(mag) : -400.0, rad2deg(std::arg(v))};
            }
            }
            return {};
        };

        const std::size_t n = ds.n_ports;
        for (std::size_t f = 0; f < ds.n_frequencies(); ++f)
        {
            const auto &s = ds.coefficients[f];
            os << ds.frequencies_ghz[f];
            if (n <= 2)
            {
                for (std::size_t m = 0; m < n * n; ++m)
                {
                    const auto [out, in] = coefficient_position(m, n);
                    const auto [a, b] = encode(s(Eigen::Index(out), Eigen::Index(in)));
                    os << ' ' << a << ' ' << b;
                }
                os << '\n';
                continue;
            }
            for (std::size_t row = 0; row < n; ++row)
            {
                for (std::size_t col = 0; col < n; ++col)
                {
                    if (col % 4 == 0 && !(row == 0 && col == 0))
                        os << "\n ";
                    const auto [a, b] = encode(s(Eigen::Index(row), Eigen::Index(col)));
                    os << ' ' << a << ' ' << b;
                }
            }
            os << '\n';
        }
    }
}
