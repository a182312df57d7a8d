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

#include "amafris/cli.hpp"
#include "amafris/types.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#ifndef AMAFRIS_VERSION
#define AMAFRIS_VERSION "unknown"
#endif

namespace amafris::cli
{
    namespace fs = std::filesystem;

    OutputStage::OutputStage(fs::path out_dir) : out_dir_(std::move(out_dir)) {}

    void OutputStage::add(const std::string &name, std::string content)
    {
        if (name == "manifest.json")
            throw std::logic_error("manifest.json is reserved");
        for (auto &f : files_)
            if (f.first == name)
            {
                f.second = std::move(content);
                return;
            }
        files_.emplace_back(name, std::move(content));
    }

    void OutputStage::add_input(const fs::path &path)
    {
        inputs_.emplace_back(path.generic_string(), sha256_file(path));
    }

    void OutputStage::set_config(const std::string &source_text, const std::string &canonical)
    {
        config_text_ = source_text;
        config_canonical_ = canonical;
    }

    void OutputStage::record_timing(const std::string &stage, double seconds)
    {
        timings_.emplace_back(stage, seconds);
    }

    std::vector<fs::path> OutputStage::commit()
    {
        fs::create_directories(out_dir_);
        std::random_device rd;
        std::ostringstream tag;
        tag << std::hex << rd() << rd();
        const fs::path staging = out_dir_ / (".amafris-staging-" + tag.str());
        fs::create_directory(staging);

        std::vector<fs::path> written;
        try
        {
            nlohmann::ordered_json manifest;
            manifest["tool"] = "amafris";
            manifest["version"] = AMAFRIS_VERSION;
            manifest["command"] = command_;
            manifest["config"] = {{"text", config_text_}, {"canonical", config_canonical_}};
            auto &inputs = manifest["inputs"] = nlohmann::ordered_json::array();
            for (const auto &[path, hash] : inputs_)
                inputs.push_back({{"path", path}, {"sha256", hash}});
            auto &outputs = manifest["outputs"] = nlohmann::ordered_json::array();
            for (const auto &[name, content] : files_)
            {
                std::ofstream out(staging / name, std::ios::binary);
                out << content;
                out.close();
                if (!out)
                    throw DataError("cannot write '" + (staging / name).string() + "'");
                outputs.push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
            }
            auto &timings = manifest["timings_s"] = nlohmann::ordered_json::object();
            for (const auto &[stage, seconds] : timings_)
                timings[stage] = seconds;
            {
                std::ofstream out(staging / "manifest.json", std::ios::binary);
                out << manifest.dump(2) << '\n';
                out.close();
                if (!out)
                    throw DataError("cannot write manifest");
            }
            for (const auto &[name, content] : files_)
            {
                fs::rename(staging / name, out_dir_ / name);
                written.push_back(out_dir_ / name);
            }
            fs::rename(staging / "manifest.json", out_dir_ / "manifest.json");
            written.push_back(out_dir_ / "manifest.json");
            fs::remove_all(staging);
        }
        catch (...)
        {
            std::error_code ec;
            fs::remove_all(staging, ec);
            for (const auto &p : written)
                fs::remove(p, ec);
            throw;
        }
        return written;
    }
}
