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

#ifndef SLEPBEAM_SIGNAL_HPP
#define SLEPBEAM_SIGNAL_HPP

#include <cstdint>

#include "slepbeam/geometry.hpp"
#include "slepbeam/types.hpp"

namespace slepbeam::signal
{
    // One plane-wave source: flat PSD of height `power` over
    // [carrier_hz - half_bandwidth_hz, carrier_hz + half_bandwidth_hz].
    struct SourceSpec
    {
        double carrier_hz = 0.0;
        double half_bandwidth_hz = 0.0; // Omega
        double power = 1.0;             // gamma
        geometry::DirectionOfArrival doa;

        // W = Omega / (2 f_c): the half-bandwidth in half-carrier-period units.
        double normalized_half_bandwidth() const { return half_bandwidth_hz / (2.0 * carrier_hz); }
    };

    inline constexpr std::size_t default_tone_count = 256;

    // Sum of random tones: s(t) = sum_i a_i exp(j 2 pi f_i t), with f_i i.i.d.
    // uniform on the source band and a_i i.i.d. complex Gaussian. Evaluates
    // exactly at arbitrary (nonuniform) times; Gaussianity is approximate for
    // small tone counts. Power convention: E|s(t)|^2 = 2 W gamma, matching the
    // covariance model's trace (the band measured in half-carrier-period
    // units; gamma alone for the zero-bandwidth tone).
    class SyntheticSignal
    {
    public:
        SyntheticSignal(VecR freqs_hz, VecC amps) : freqs_hz_(std::move(freqs_hz)), amps_(std::move(amps)) {}

        cplx operator()(double t) const;
        VecC evaluate(const VecR &times) const;

        const VecR &tone_frequencies_hz() const { return freqs_hz_; }
        const VecC &tone_amplitudes() const { return amps_; }

    private:
        VecR freqs_hz_;
        VecC amps_;
    };

    SyntheticSignal synthesize(const SourceSpec &src, std::size_t n_tones, std::uint64_t seed);

    // Time-stamped array snapshots y(t_i); one row per timestamp.
    struct SnapshotEnsemble
    {
        VecR timestamps_s;
        MatC samples; // count x M
        double carrier_hz = 0.0;

        std::size_t count() const { return static_cast<std::size_t>(timestamps_s.size()); }
    };

    // y_m = s(t0 - tau_m), delays from the arrival direction.
    VecC snapshot(const SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                  const geometry::DirectionOfArrival &doa, double t0);

    SnapshotEnsemble ensemble(const SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                              const geometry::DirectionOfArrival &doa, double t_start, double period_s,
                              std::size_t count);

    struct DecimationSchedule
    {
        double nyquist_period_s = 0.0;   // T_s = 1/(2 Omega)
        double decimated_period_s = 0.0; // T_d = A / c
        double ratio = 0.0;              // T_d / T_s = 2 Omega A / c
    };

    // Throws std::domain_error when the aperture is degenerate (broadside):
    // no rate reduction is possible there.
    DecimationSchedule decimation_schedule(const geometry::ArrayGeometry &g, const geometry::DirectionOfArrival &doa,
                                           double omega_hz);

} // namespace slepbeam::signal

#endif
