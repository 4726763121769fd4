// SPDX-License-Identifier: Apache-2.0
//
// risbf - joint active/passive beamforming for RIS-aided MIMO links
// Copyright (C) 2026 The risbf authors
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

#ifndef RISBF_TYPES_HPP
#define RISBF_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace risbf
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;
    using Position3D = Eigen::Vector3d;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kSpeedOfLight = 299792458.0;

    // Invalid user input: bad config values, inconsistent array sizes, unknown keys.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A numerical routine reached a state it cannot continue from
    // (indefinite covariance, singular MSE matrix, bracket failure).
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline CMatrix hermitize(const CMatrix &m)
    {
        return 0.5 * (m + m.adjoint());
    }

    // exp(-j * 2*pi * distance / lambda), with the distance reduced modulo lambda
    // first so the phase argument stays within [0, 2*pi) for large distances.
    inline cdouble propagation_phase(double distance, double lambda)
    {
        const double frac = std::fmod(distance, lambda) / lambda;
        return std::polar(1.0, -2.0 * kPi * frac);
    }
}

#endif
