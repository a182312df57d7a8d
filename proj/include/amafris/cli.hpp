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

#ifndef AMAFRIS_CLI_HPP
#define AMAFRIS_CLI_HPP

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace amafris::cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_runtime = 1,
        exit_usage = 2,
        exit_parse = 3
    };

    std::string sha256_hex(const std::string &bytes);
    std::string sha256_file(const std::filesystem::path &path);

    // Collects outputs in memory; commit() writes them into a staging directory
    // next to the destination, then renames each file into place. The manifest
    // goes last. Nothing is written when commit() is never reached.
    class OutputStage
    {
    public:
        explicit OutputStage(std::filesystem::path out_dir);

        void add(const std::string &name, std::string content);
        void add_input(const std::filesystem::path &path);
        void set_config(const std::string &source_text, const std::string &canonical);
        void record_timing(const std::string &stage, double seconds);
        void set_command(const std::string &command) { command_ = command; }

        const std::filesystem::path &out_dir() const { return out_dir_; }
        std::vector<std::filesystem::path> commit();

    private:
        std::filesystem::path out_dir_;
        std::string command_;
        std::vector<std::pair<std::string, std::string>> files_;
        std::vector<std::pair<std::string, std::string>> inputs_; // path, sha256
        std::vector<std::pair<std::string, double>> timings_;
        std::string config_text_;
        std::string config_canonical_;
    };

    class StageTimer
    {
    public:
        StageTimer() : start_(std::chrono::steady_clock::now()) {}
        double seconds() const
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        }

    private:
        std::chrono::steady_clock::time_point start_;
    };

    int run_cli(int argc, char **argv);
}

#endif
