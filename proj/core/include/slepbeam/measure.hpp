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

#ifndef SLEPBEAM_MEASURE_HPP
#define SLEPBEAM_MEASURE_HPP

#include <cstdint>
#include <string>

#include "slepbeam/geometry.hpp"
#include "slepbeam/slepian.hpp"
#include "slepbeam/types.hpp"

namespace slepbeam::measure
{
    enum class Family
    {
        slepian,
        unimodular,
        random_gaussian,
        binary_iq
    };

    std::string to_string(Family f);
    Family family_from_string(const std::string &name);

    // Scale applied on top of the stored entries when the matrix is used.
    // Alphabet-constrained families (unimodular, binary-IQ) keep their exact
    // entries in `entries`; normalization for ||Phi|| <= 1 comparisons lives
    // here instead.
    struct NormPolicy
    {
        bool normalized = false;
        double scale = 1.0;
    };

    struct MeasurementMatrix
    {
        MatC entries; // K x M, family-exact
        Family family = Family::random_gaussian;
        NormPolicy norm_policy;
        bool conditioning_warning = false; // near rank-deficient rows

        std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
        std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
        MatC effective() const { return norm_policy.scale * entries; }
    };

    // Phi = V_K^H: rows are the leading eigenvectors, already orthonormal.
    MeasurementMatrix slepian_measurements(const slepian::CovarianceModel &model, std::size_t k);

    // Phi[k,m] = exp(j 2 pi f_k tau_m): one steering row per frequency.
    MeasurementMatrix unimodular_measurements(const VecR &freqs_hz, const geometry::DelayProfile &delays,
                                              bool normalize);

    // Midpoint grid of K frequencies covering [f_c - Omega, f_c + Omega];
    // K = 1 gives the carrier itself.
    VecR default_frequency_grid(double carrier_hz, double omega_hz, std::size_t k);

    // Entries i.i.d. CN(0,1).
    MeasurementMatrix random_measurements(std::size_t k, std::size_t m, std::uint64_t seed, bool normalize);

    // Wrap raw entries (imports, externally designed rows).
    MeasurementMatrix from_entries(MatC entries, Family family, bool normalize);

    // w = Phi y + eta with eta ~ CN(0, sigma2 I); deterministic per seed.
    VecC apply_readout(const MeasurementMatrix &phi, const VecC &y, double sigma2, std::uint64_t seed);

    double spectral_norm(const MatC &a);

} // namespace slepbeam::measure

#endif
