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

#ifndef AMAFRIS_INGEST_HPP
#define AMAFRIS_INGEST_HPP

#include "amafris/channel_friis.hpp"
#include "amafris/geometry.hpp"
#include "amafris/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace amafris
{
    enum class PortKind
    {
        ris,
        amaf
    };

    struct PortRole
    {
        PortKind kind = PortKind::ris;
        std::size_t element = 0; // 0-based element index in the layout's row-major order
    };

    // Assignment of dataset ports (0-based) to RIS and AMAF elements.
    //
    // The canonical order mirrors the block layout of the scattering matrix:
    // RIS ports first, then AMAF ports. Solver files with another numbering are
    // reconciled with from_solver_order().
    class PortMap
    {
    public:
        PortMap() = default;

        static PortMap canonical(std::size_t n_ris, std::size_t n_amaf);

        // solver_ports[c] is the 1-based solver port that carries canonical port c.
        // Must be a permutation of 1..n_ris+n_amaf.
        static PortMap from_solver_order(const std::vector<std::size_t> &solver_ports, std::size_t n_ris,
                                         std::size_t n_amaf);

        std::size_t n_ris() const { return ris_port_.size(); }
        std::size_t n_amaf() const { return amaf_port_.size(); }
        std::size_t n_ports() const { return roles_.size(); }
        std::size_t ris_port(std::size_t k) const { return ris_port_.at(k); }
        std::size_t amaf_port(std::size_t l) const { return amaf_port_.at(l); }
        const PortRole &role(std::size_t port) const { return roles_.at(port); }

    private:
        std::vector<PortRole> roles_;
        std::vector<std::size_t> ris_port_;
        std::vector<std::size_t> amaf_port_;
    };

    // "5-260,1-4" style list of 1-based solver ports in canonical order
    std::vector<std::size_t> parse_port_order(const std::string &spec);

    // Multi-frequency S-parameters. Coefficients are indexed (port_out, port_in),
    // 0-based, i.e. b_out = S(out, in) a_in.
    //
    // Partial datasets (the T-block CSV) carry a presence mask; asking for a
    // coefficient that was never stored is an error, never a silent zero.
    struct SParameterDataset
    {
        using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

        std::vector<double> frequencies_ghz;
        std::size_t n_ports = 0;
        std::vector<CMatrix> coefficients; // one n_ports x n_ports matrix per frequency
        std::vector<Mask> present;         // same shape; all true for complete datasets
        bool partial = false;
        double reference_ohm = 50.0;
        std::optional<PortMap> port_map;

        std::size_t n_frequencies() const { return frequencies_ghz.size(); }
        bool has(std::size_t f, std::size_t out, std::size_t in) const;
        cplx at(std::size_t f, std::size_t out, std::size_t in) const;

        // Port map required; block presence at one frequency index
        bool has_transmission_block(std::size_t f) const;
        bool has_amaf_block(std::size_t f) const;
    };

    // Checks frequency ordering, finiteness, mask shapes and (if set) the port map size
    void validate(const SParameterDataset &ds);

    // Attaches a port map; the dataset's port count must equal n_ris + n_amaf
    void assign_port_map(SParameterDataset &ds, PortMap map);

    // Port map must exist and agree with the RIS/AMAF element counts of the geometry
    void check_against_geometry(const SParameterDataset &ds, const SystemGeometry &sys);

    // Complete single- or multi-frequency dataset in canonical port order, built
    // from known blocks. Unspecified coefficients are zero (a complete dataset can
    // always be written as Touchstone).
    SParameterDataset dataset_from_blocks(const std::vector<double> &frequencies_ghz,
                                          const std::vector<CMatrix> &t_blocks,
                                          const std::vector<CMatrix> &amaf_blocks = {});

    // Same, but marked partial with only the given blocks present (T-block CSV semantics)
    SParameterDataset partial_dataset_from_blocks(const std::vector<double> &frequencies_ghz,
                                                  const std::vector<CMatrix> &t_blocks,
                                                  const std::vector<CMatrix> &amaf_blocks = {});

    // --- Touchstone v1 -----------------------------------------------------

    enum class TouchstoneFormat
    {
        ri,
        ma,
        db
    };

    // "s4p" -> 4; nullopt for other extensions
    std::optional<std::size_t> touchstone_ports_from_extension(const std::filesystem::path &path);

    // Option line "# <Hz|kHz|MHz|GHz> S <RI|MA|DB> R <ohm>", '!' comments. Without
    // n_ports the port count is inferred from the record structure.
    SParameterDataset parse_touchstone(std::istream &is, std::optional<std::size_t> n_ports = std::nullopt);

    // Frequencies written in GHz. Dataset must be complete.
    void write_touchstone(std::ostream &os, const SParameterDataset &ds, TouchstoneFormat format = TouchstoneFormat::ri);

    // --- T-block CSV ---------------------------------------------------------
    //
    //   freq_GHz,ris_port,amaf_port,re,im
    //
    // ris_port / amaf_port are 1-based element indices. A row whose ris_port
    // field is "A<m>" carries the AMAF-to-AMAF coefficient S(AMAF m <- AMAF amaf_port).

    SParameterDataset parse_tblock_csv(std::istream &is);
    void write_tblock_csv(std::ostream &os, const SParameterDataset &ds);

    enum class FileFormat
    {
        touchstone,
        tblock_csv
    };

    // By extension: .csv -> tblock_csv, .sNp / .ts -> touchstone
    FileFormat detect_format(const std::filesystem::path &path);

    // Reads a file of either format. Touchstone datasets get a canonical port map
    // when n_ris / n_amaf are given and no remap is supplied.
    SParameterDataset load_dataset(const std::filesystem::path &path, std::optional<FileFormat> format,
                                   std::size_t n_ris, std::size_t n_amaf,
                                   const std::optional<std::vector<std::size_t>> &solver_order = std::nullopt);

    // --- extraction ----------------------------------------------------------

    // T(k, l) = S(port(RIS k), port(AMAF l)) at freq; entrywise linear
    // interpolation of (re, im) between bracketing samples.
    ChannelMatrix extract_t(const SParameterDataset &ds, double freq_ghz);

    // --- AMAF mutual coupling ---------------------------------------------------

    enum class CouplingClass
    {
        adjacent, // 4-neighbours in the AMAF grid
        diagonal, // diagonal neighbours
        distant
    };

    std::string to_string(CouplingClass c);

    inline constexpr double coupling_floor_db = -200.0;

    struct CouplingPair
    {
        std::size_t i = 0; // AMAF elements, 0-based, i < j
        std::size_t j = 0;
        CouplingClass cls = CouplingClass::adjacent;
        std::vector<double> s_ij_db; // |S(i <- j)| per frequency
        std::vector<double> s_ji_db; // |S(j <- i)| per frequency
        double max_asymmetry_db = 0.0;
    };

    struct CouplingClassSummary
    {
        CouplingClass cls = CouplingClass::adjacent;
        std::size_t pairs = 0;
        double min_db = 0.0;
        double max_db = 0.0;
    };

    struct CouplingReport
    {
        std::vector<double> frequencies_ghz;
        std::vector<CouplingPair> pairs;
        std::vector<CouplingClassSummary> summary; // only classes that occur
        std::vector<std::string> warnings;
    };

    inline constexpr double coupling_warn_adjacent_db = -10.0;

    CouplingReport coupling_report(const SParameterDataset &ds, const ArrayLayout &amaf);

    // pair rows: i,j,class,freq_GHz,s_ij_dB,s_ji_dB (1-based elements)
    void write_coupling_csv(std::ostream &os, const CouplingReport &report);
}

#endif
