// SPDX-License-Identifier: Apache-2.0
//
// slepbeam: broadband array beamforming via Slepian subspace embeddings
// Copyright (C) 2026 the slepbeam authors
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

#ifndef SLEPBEAM_TYPES_HPP
#define SLEPBEAM_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slepbeam
{
    using cplx = std::complex<double>;
    using MatC = Eigen::MatrixXcd;
    using VecC = Eigen::VectorXcd;
    using MatR = Eigen::MatrixXd;
    using VecR = Eigen::VectorXd;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // A linear system or solver failed in a way the caller cannot recover from
    // by adjusting inputs (singular MMSE system, non-converged SDP, ...).
    class numerical_error : public std::runtime_error
    {
    public:
        explicit numerical_error(const std::string &what) : std::runtime_error(what) {}
    };

    // Randomized rounding exhausted its trials without a constraint-feasible
    // candidate. Carries the measurement row that failed (0 if standalone).
    class infeasible_design : public std::runtime_error
    {
    public:
        infeasible_design(const std::string &what, std::size_t row) : std::runtime_error(what), row_index(row) {}
        std::size_t row_index;
    };

} // namespace slepbeam

#endif
