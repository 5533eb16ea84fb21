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

#ifndef SLEPBEAM_SLEPIAN_HPP
#define SLEPBEAM_SLEPIAN_HPP

#include <cstdint>

#include "slepbeam/geometry.hpp"
#include "slepbeam/rng.hpp"
#include "slepbeam/signal.hpp"
#include "slepbeam/types.hpp"

namespace slepbeam::slepian
{
    // Dimensionless sample positions (half-carrier-period units) plus the
    // half-bandwidth W in [0, 1/2]. For a half-wavelength ULA seen end-on the
    // lags are the integers 0..M-1.
    struct ProlateSpec
    {
        VecR normalized_lags;
        double half_bandwidth = 0.0; // W

        std::size_t size() const { return static_cast<std::size_t>(normalized_lags.size()); }
    };

    // B[m,n] = 2W on the diagonal, sin(2 pi W (m-n)) / (pi (m-n)) off it.
    // Real symmetric, eigenvalues in [0, 1], trace exactly 2WM.
    MatR prolate_matrix(double w, std::size_t m);

    // Same kernel on arbitrary lags: 2W sinc(2W (lag_m - lag_n)). Reduces to
    // prolate_matrix for integer lags; symmetric PSD.
    MatR generalized_prolate(const ProlateSpec &spec);

    // Hermitian PSD covariance R = gamma * E B E^H with eagerly cached
    // eigendecomposition (descending eigenvalues, clamped at zero). Immutable.
    class CovarianceModel
    {
    public:
        CovarianceModel(MatR kernel, ProlateSpec spec, VecR delays_s, double carrier_hz, double power);

        const MatC &matrix() const { return r_; }
        const VecR &eigenvalues() const { return eigenvalues_; }
        const MatC &eigenvectors() const { return eigenvectors_; }
        MatC leading_eigenvectors(std::size_t k) const; // V_K, M x K

        std::size_t dim() const { return static_cast<std::size_t>(r_.rows()); }
        double power() const { return power_; }
        double carrier_hz() const { return carrier_hz_; }
        double trace() const { return eigenvalues_.sum(); }
        const ProlateSpec &prolate_spec() const { return spec_; }
        const VecR &delays_s() const { return delays_s_; }
        const VecC &modulation() const { return modulation_; } // diag(E)

    private:
        MatC r_;
        VecR eigenvalues_;
        MatC eigenvectors_;
        ProlateSpec spec_;
        VecR delays_s_;
        VecC modulation_;
        double carrier_hz_ = 0.0;
        double power_ = 1.0;
    };

    // Snapshot covariance for a source seen by an array. W = Omega/(2 f_c)
    // with the arrival angle absorbed into the normalized lags; throws
    // std::domain_error when W would exceed 1/2 (spatial aliasing). The
    // Omega = 0 limit is the rank-one tone: B -> all-ones.
    CovarianceModel covariance(const geometry::ArrayGeometry &g, const signal::SourceSpec &src,
                               const geometry::DirectionOfArrival &doa);

    // Same model built directly from a prolate spec (integer-lag uniform case
    // included); modulation defaults to none.
    CovarianceModel covariance_from_spec(const ProlateSpec &spec, double power);

    // sum_{k > K} lambda_k
    double tail_energy(const CovarianceModel &model, std::size_t k);

    // number of eigenvalues in (lo*lambda_1, hi*lambda_1)
    std::size_t plateau_width(const CovarianceModel &model, double lo, double hi);

    // Exact draw y ~ CN(0, R) through the cached eigendecomposition.
    VecC gaussian_snapshot(const CovarianceModel &model, Rng &rng);

    // Low-rank factorization R ~= left * right^H. The left factor starts with
    // the in-band (modulated) Fourier columns; the remainder is a truncated
    // eigendecomposition of the projection residual, sized to meet the
    // requested spectral-norm error. For uniform lags the Fourier block is
    // applied with an FFT.
    struct LowRankFactor
    {
        MatC left;  // C_K, M x K
        MatC right; // U_K, M x K
        double epsilon = 0.0;
        std::size_t fourier_column_count = 0;

        // FFT fast path (uniform lags only)
        bool uniform_lags = false;
        double lag_spacing = 0.0;
        std::vector<std::ptrdiff_t> fourier_bins; // DFT bin of each Fourier column
        VecC modulation;                          // diag(E), empty if none
        MatC fourier_coupling;                    // A = Q^H R Q (L x L)
        MatC correction;                          // residual eigenvectors, M x k2
        VecR correction_values;                   // residual eigenvalues

        std::size_t rank() const { return static_cast<std::size_t>(left.cols()); }
    };

    LowRankFactor low_rank_factor(const CovarianceModel &model, double eps);

    // y = left * (right^H x); identical to the dense product up to roundoff.
    VecC fast_apply(const LowRankFactor &f, const VecC &x);

    // Export helper: eigen-spectrum rows (k, lambda_k, lambda_k / lambda_1).
    MatR spectrum_table(const CovarianceModel &model);

} // namespace slepbeam::slepian

#endif
