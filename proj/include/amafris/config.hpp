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

#ifndef AMAFRIS_CONFIG_HPP
#define AMAFRIS_CONFIG_HPP

#include "amafris/channel_friis.hpp"
#include "amafris/geometry.hpp"
#include "amafris/ingest.hpp"
#include "amafris/syssim.hpp"
#include "amafris/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace amafris
{
    // Missing/unreadable config or bad key (CLI exit code 2)
    class ConfigError : public ValidationError
    {
    public:
        using ValidationError::ValidationError;
    };

    struct GeometryConfig
    {
        std::size_t ris_nx = 16;
        std::size_t ris_ny = 16;
        std::size_t amaf_nx = 2;
        std::size_t amaf_ny = 2;
        double ris_spacing = 1.0;  // half-wavelengths
        double amaf_spacing = 1.0; // half-wavelengths
        double focal_distance = 8.0;
        double frequency_ghz = 150.0;
    };

    struct PatternConfig
    {
        double peak_gain = 5.8;
        AmplitudeModel amplitude_model = AmplitudeModel::geometric_mean;
        double grid_step_deg = 0.25;
    };

    enum class TSourceKind
    {
        friis,
        fullwave
    };

    struct TSourceConfig
    {
        TSourceKind kind = TSourceKind::friis;
        std::filesystem::path file;           // resolved against the config file's directory
        std::optional<FileFormat> format;     // empty = by extension
        std::optional<double> frequency_ghz;  // empty = geometry frequency
        std::optional<std::vector<std::size_t>> port_order;
    };

    struct RunConfig
    {
        GeometryConfig geometry;
        PatternConfig pattern;
        ScenarioConfig scenario; // carrier_ghz mirrors geometry.frequency_ghz
        TSourceConfig tsource;
        bool sigma_ceiling = true;
        std::string source_text; // config file contents as read
    };

    // INI-style sections [geometry], [pattern], [scenario], [tsource]. Unknown
    // sections or keys are errors.
    RunConfig parse_run_config(std::istream &is, const std::filesystem::path &base_dir = {});
    RunConfig load_run_config(const std::filesystem::path &path);

    SystemGeometry make_geometry(const GeometryConfig &g);
    ElementPattern make_pattern(const PatternConfig &p);

    // T for the configured source at the configured frequency, before any ceiling
    ChannelMatrix load_channel(const RunConfig &cfg, const SystemGeometry &sys, TSourceKind kind);

    // Canonical key=value listing of every setting (used for fingerprints)
    std::string canonical_text(const RunConfig &cfg);
}

#endif
