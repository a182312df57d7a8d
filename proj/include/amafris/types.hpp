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

#ifndef AMAFRIS_TYPES_HPP
#define AMAFRIS_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace amafris
{
    using cplx = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double speed_of_light = 299792458.0; // m/s

    // Half-wavelength in meters at a carrier frequency in GHz
    inline double half_wavelength_m(double frequency_ghz)
    {
        return speed_of_light / (2.0 * frequency_ghz * 1e9);
    }

    inline double deg2rad(double deg) { return deg * pi / 180.0; }
    inline double rad2deg(double rad) { return rad * 180.0 / pi; }

    // Invalid argument or inconsistent input (maps to CLI exit code 2)
    class ValidationError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Malformed input file; carries the 1-based line number (0 = whole stream)
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(std::size_t line, const std::string &message)
            : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
              line_(line) {}
        std::size_t line() const { return line_; }

    private:
        std::size_t line_;
    };

    // Requested data not present in a dataset (absent block, frequency out of range)
    class DataError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
