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
#include <fstream>
#include <sstream>

namespace amafris
{
    PortMap PortMap::canonical(std::size_t n_ris, std::size_t n_amaf)
    {
        std::vector<std::size_t> order(n_ris + n_amaf);
        for (std::size_t c = 0; c < order.size(); ++c)
            order[c] = c + 1;
        return from_solver_order(order, n_ris, n_amaf);
    }

    PortMap PortMap::from_solver_order(const std::vector<std::size_t> &solver_ports, std::size_t n_ris,
                                       std::size_t n_amaf)
    {
        const std::size_t n = n_ris + n_amaf;
        if (n_ris == 0 || n_amaf == 0)
            throw ValidationError("port map: RIS and AMAF element counts must be >= 1");
        if (solver_ports.size() != n)
            throw ValidationError("port map: " + std::to_string(solver_ports.size()) + " entries for " +
                                  std::to_string(n) + " ports");

        PortMap map;
        map.roles_.resize(n);
        map.ris_port_.resize(n_ris);
        map.amaf_port_.resize(n_amaf);
        std::vector<bool> seen(n, false);
        for (std::size_t c = 0; c < n; ++c)
        {
            const std::size_t p = solver_ports[c];
            if (p < 1 || p > n)
                throw ValidationError("port map: solver port " + std::to_string(p) + " outside 1.." + std::to_string(n));
            if (seen[p - 1])
                throw ValidationError("port map: solver port " + std::to_string(p) + " assigned twice");
            seen[p - 1] = true;
            if (c < n_ris)
            {
                map.roles_[p - 1] = {PortKind::ris, c};
                map.ris_port_[c] = p - 1;
            }
            else
            {
                map.roles_[p - 1] = {PortKind::amaf, c - n_ris};
                map.amaf_port_[c - n_ris] = p - 1;
            }
        }
        return map;
    }

    std::vector<std::size_t> parse_port_order(const std::string &spec)
    {
        std::vector<std::size_t> out;
        std::stringstream ss(spec);
        std::string item;
        auto to_index = [&](const std::string &s) -> std::size_t
        {
            std::size_t pos = 0;
            unsigned long v = 0;
            try
            {
                v = std::stoul(s, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (pos == 0 || pos != s.size())
                throw ValidationError("port order: '" + s + "' is not a port number");
            return std::size_t(v);
        };
        while (std::getline(ss, item, ','))
        {
            item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                       item.end());
            if (item.empty())
                continue;
            const auto dash = item.find('-');
            if (dash == std::string::npos)
            {
                out.push_back(to_index(item));
                continue;
            }
            const std::size_t a = to_index(item.substr(0, dash));
            const std::size_t b = to_index(item.substr(dash + 1));
            if (b < a)
                throw ValidationError("port order: descending range '" + item + "'");
            for (std::size_t p = a; p <= b; ++p)
                out.push_back(p);
        }
        if (out.empty())
            throw ValidationError("port order: empty list");
        return out;
    }

    bool SParameterDataset::has(std::size_t f, std::size_t out, std::size_t in) const
    {
        return f < present.size() && out < n_ports && in < n_ports &&
               present[f](Eigen::Index(out), Eigen::Index(in));
    }

    cplx SParameterDataset::at(std::size_t f, std::size_t out, std::size_t in) const
    {
        if (!has(f, out, in))
            throw DataError("coefficient S(" + std::to_string(out + 1) + "," + std::to_string(in + 1) +
                            ") is absent from the dataset");
        return coefficients[f](Eigen::Index(out), Eigen::Index(in));
    }

    bool SParameterDataset::has_transmission_block(std::size_t f) const
    {
        if (!port_map)
            throw DataError("dataset has no port map");
        for (std::size_t k = 0; k < port_map->n_ris(); ++k)
            for (std::size_t l = 0; l < port_map->n_amaf(); ++l)
                if (!has(f, port_map->ris_port(k), port_map->amaf_port(l)))
                    return false;
        return true;
    }

    bool SParameterDataset::has_amaf_block(std::size_t f) const
    {
        if (!port_map)
            throw DataError("dataset has no port map");
        for (std::size_t i = 0; i < port_map->n_amaf(); ++i)
            for (std::size_t j = 0; j < port_map->n_amaf(); ++j)
                if (i != j && !has(f, port_map->amaf_port(i), port_map->amaf_port(j)))
                    return false;
        return true;
    }

    void validate(const SParameterDataset &ds)
    {
        if (ds.frequencies_ghz.empty())
            throw ValidationError("dataset has no frequency samples");
        if (ds.coefficients.size() != ds.frequencies_ghz.size() || ds.present.size() != ds.frequencies_ghz.size())
            throw ValidationError("dataset: per-frequency storage does not match frequency list");
        for (std::size_t f = 0; f < ds.frequencies_ghz.size(); ++f)
        {
            if (!std::isfinite(ds.frequencies_ghz[f]) || ds.frequencies_ghz[f] <= 0.0)
                throw ValidationError("dataset: invalid frequency");
            if (f > 0 && !(ds.frequencies_ghz[f] > ds.frequencies_ghz[f - 1]))
                throw ValidationError("dataset: frequencies must be strictly increasing");
            const auto n = Eigen::Index(ds.n_ports);
            if (ds.coefficients[f].rows() != n || ds.coefficients[f].cols() != n || ds.present[f].rows() != n ||
                ds.present[f].cols() != n)
                throw ValidationError("dataset: coefficient matrix shape does not match port count");
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    if (ds.present[f](i, j) && !std::isfinite(std::abs(ds.coefficients[f](i, j))))
                        throw ValidationError("dataset: non-finite coefficient");
        }
        if (ds.port_map && ds.port_map->n_ports() != ds.n_ports)
            throw ValidationError("dataset: port map covers " + std::to_string(ds.port_map->n_ports()) +
                                  " ports, dataset has " + std::to_string(ds.n_ports));
    }

    void assign_port_map(SParameterDataset &ds, PortMap map)
    {
        if (map.n_ports() != ds.n_ports)
            throw ValidationError("port map covers " + std::to_string(map.n_ports()) + " ports but the dataset has " +
                                  std::to_string(ds.n_ports));
        ds.port_map = std::move(map);
    }

    void check_against_geometry(const SParameterDataset &ds, const SystemGeometry &sys)
    {
        if (!ds.port_map)
            throw ValidationError("dataset has no port map");
        if (ds.port_map->n_ris() != sys.ris.size() || ds.port_map->n_amaf() != sys.amaf.size())
            throw ValidationError("dataset maps " + std::to_string(ds.port_map->n_ris()) + " RIS / " +
                                  std::to_string(ds.port_map->n_amaf()) + " AMAF ports, geometry has " +
                                  std::to_string(sys.ris.size()) + " / " + std::to_string(sys.amaf.size()));
    }

    namespace
    {
        SParameterDataset from_blocks(const std::vector<double> &freqs, const std::vector<CMatrix> &t_blocks,
                                      const std::vector<CMatrix> &amaf_blocks, bool partial)
        {
            if (freqs.empty() || t_blocks.size() != freqs.size())
                throw ValidationError("dataset_from_blocks: one T block per frequency required");
            if (!amaf_blocks.empty() && amaf_blocks.size() != freqs.size())
                throw ValidationError("dataset_from_blocks: one AMAF block per frequency required");
            const auto n_ris = t_blocks.front().rows();
            const auto n_amaf = t_blocks.front().cols();
            if (n_ris == 0 || n_amaf == 0)
                throw ValidationError("dataset_from_blocks: empty T block");

            SParameterDataset ds;
            ds.frequencies_ghz = freqs;
            ds.n_ports = std::size_t(n_ris + n_amaf);
            ds.partial = partial;
            ds.port_map = PortMap::canonical(std::size_t(n_ris), std::size_t(n_amaf));
            const auto n = Eigen::Index(ds.n_ports);
            for (std::size_t f = 0; f < freqs.size(); ++f)
            {
                if (t_blocks[f].rows() != n_ris || t_blocks[f].cols() != n_amaf)
                    throw ValidationError("dataset_from_blocks: T block shapes differ across frequencies");
                CMatrix s = CMatrix::Zero(n, n);
                SParameterDataset::Mask mask = SParameterDataset::Mask::Constant(n, n, !partial);
                s.block(0, n_ris, n_ris, n_amaf) = t_blocks[f];
                mask.block(0, n_ris, n_ris, n_amaf).setConstant(true);
                if (!amaf_blocks.empty())
                {
                    if (amaf_blocks[f].rows() != n_amaf || amaf_blocks[f].cols() != n_amaf)
                        throw ValidationError("dataset_from_blocks: AMAF block must be N_a x N_a");
                    s.block(n_ris, n_ris, n_amaf, n_amaf) = amaf_blocks[f];
                    mask.block(n_ris, n_ris, n_amaf, n_amaf).setConstant(true);
                }
                ds.coefficients.push_back(std::move(s));
                ds.present.push_back(std::move(mask));
            }
            validate(ds);
            return ds;
        }
    }

    SParameterDataset dataset_from_blocks(const std::vector<double> &freqs, const std::vector<CMatrix> &t_blocks,
                                          const std::vector<CMatrix> &amaf_blocks)
    {
        return from_blocks(freqs, t_blocks, amaf_blocks, false);
    }

    SParameterDataset partial_dataset_from_blocks(const std::vector<double> &freqs,
                                                  const std::vector<CMatrix> &t_blocks,
                                                  const std::vector<CMatrix> &amaf_blocks)
    {
        return from_blocks(freqs, t_blocks, amaf_blocks, true);
    }

    FileFormat detect_format(const std::filesystem::path &path)
    {
        std::string ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        if (ext == ".csv")
            return FileFormat::tblock_csv;
        if (ext == ".ts" || touchstone_ports_from_extension(path))
            return FileFormat::touchstone;
        throw ValidationError("cannot infer file format from extension '" + ext + "' (use .csv, .sNp or .ts)");
    }

    SParameterDataset load_dataset(const std::filesystem::path &path, std::optional<FileFormat> format,
                                   std::size_t n_ris, std::size_t n_amaf,
                                   const std::optional<std::vector<std::size_t>> &solver_order)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ValidationError("cannot open '" + path.string() + "'");
        const FileFormat fmt = format ? *format : detect_format(path);

        SParameterDataset ds;
        if (fmt == FileFormat::touchstone)
        {
            ds = parse_touchstone(in, touchstone_ports_from_extension(path));
            if (solver_order)
                assign_port_map(ds, PortMap::from_solver_order(*solver_order, n_ris, n_amaf));
            else
                assign_port_map(ds, PortMap::canonical(n_ris, n_amaf));
        }
        else
        {
            ds = parse_tblock_csv(in);
            if (solver_order)
                throw ValidationError("a port remap applies to Touchstone files only; T-block CSV uses element indices");
            if (ds.port_map->n_ris() != n_ris || ds.port_map->n_amaf() != n_amaf)
                throw ValidationError("'" + path.string() + "' covers " + std::to_string(ds.port_map->n_ris()) +
                                      " RIS x " + std::to_string(ds.port_map->n_amaf()) + " AMAF elements, expected " +
                                      std::to_string(n_ris) + " x " + std::to_string(n_amaf));
        }
        return ds;
    }

    ChannelMatrix extract_t(const SParameterDataset &ds, double freq_ghz)
    {
        if (!ds.port_map)
            throw DataError("extract_t: dataset has no port map");
        const auto &fs = ds.frequencies_ghz;
        if (fs.empty())
            throw DataError("extract_t: dataset has no samples");
        if (!std::isfinite(freq_ghz) || freq_ghz < fs.front() || freq_ghz > fs.back())
        {
            std::ostringstream msg;
            msg << "extract_t: " << freq_ghz << " GHz outside the sampled range [" << fs.front() << ", " << fs.back()
                << "] GHz";
            throw DataError(msg.str());
        }

        const auto &pm = *ds.port_map;
        ChannelMatrix t;
        t.provenance = Provenance::fullwave;
        t.frequency_ghz = freq_ghz;
        t.entries.resize(Eigen::Index(pm.n_ris()), Eigen::Index(pm.n_amaf()));

        auto require_block = [&](std::size_t f)
        {
            if (!ds.has_transmission_block(f))
            {
                std::ostringstream msg;
                msg << "extract_t: RIS<-AMAF block absent at " << fs[f] << " GHz";
                throw DataError(msg.str());
            }
        };
        auto copy_block = [&](std::size_t f)
        {
            for (std::size_t k = 0; k < pm.n_ris(); ++k)
                for (std::size_t l = 0; l < pm.n_amaf(); ++l)
                    t.entries(Eigen::Index(k), Eigen::Index(l)) =
                        ds.coefficients[f](Eigen::Index(pm.ris_port(k)), Eigen::Index(pm.amaf_port(l)));
        };

        const auto hi_it = std::lower_bound(fs.begin(), fs.end(), freq_ghz);
        const auto hi = std::size_t(hi_it - fs.begin());
        if (fs[hi] == freq_ghz)
        {
            require_block(hi);
            copy_block(hi);
            return t;
        }

        const std::size_t lo = hi - 1;
        require_block(lo);
        require_block(hi);
        const double a = (freq_ghz - fs[lo]) / (fs[hi] - fs[lo]);
        for (std::size_t k = 0; k < pm.n_ris(); ++k)
            for (std::size_t l = 0; l < pm.n_amaf(); ++l)
            {
                const auto out = Eigen::Index(pm.ris_port(k));
                const auto in = Eigen::Index(pm.amaf_port(l));
                const cplx s0 = ds.coefficients[lo](out, in);
                const cplx s1 = ds.coefficients[hi](out, in);
                t.entries(Eigen::Index(k), Eigen::Index(l)) =
                    cplx((1.0 - a) * s0.real() + a * s1.real(), (1.0 - a) * s0.imag() + a * s1.imag());
            }
        return t;
    }
}
