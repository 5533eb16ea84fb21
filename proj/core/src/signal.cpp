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

#include "slepbeam/signal.hpp"

#include <cmath>

#include "slepbeam/rng.hpp"

namespace slepbeam::signal
{

    cplx SyntheticSignal::operator()(double t) const
    {
        cplx acc(0.0, 0.0);
        for (Eigen::Index i = 0; i < freqs_hz_.size(); ++i)
        {
            double ph = 2.0 * pi * freqs_hz_[i] * t;
            acc += amps_[i] * cplx(std::cos(ph), std::sin(ph));
        }
        return acc;
    }

    VecC SyntheticSignal::evaluate(const VecR &times) const
    {
        VecC out(times.size());
        for (Eigen::Index i = 0; i < times.size(); ++i)
            out[i] = (*this)(times[i]);
        return out;
    }

    SyntheticSignal synthesize(const SourceSpec &src, std::size_t n_tones, std::uint64_t seed)
    {
        if (n_tones < 1)
            throw std::invalid_argument("need at least one tone");
        if (src.half_bandwidth_hz < 0.0 || !(src.power > 0.0) || !(src.carrier_hz > 0.0))
            throw std::invalid_argument("invalid source spec");

        Rng rng(seed);
        const auto n = static_cast<Eigen::Index>(n_tones);
        VecR freqs(n);
        if (src.half_bandwidth_hz > 0.0)
        {
            std::uniform_real_distribution<double> band(src.carrier_hz - src.half_bandwidth_hz,
                                                        src.carrier_hz + src.half_bandwidth_hz);
            for (Eigen::Index i = 0; i < n; ++i)
                freqs[i] = band(rng);
        }
        else
        {
            freqs.setConstant(src.carrier_hz); // degenerate band: pure tone at f_c
        }

        double total_power = src.half_bandwidth_hz > 0.0 ? 2.0 * src.normalized_half_bandwidth() * src.power
                                                         : src.power;
        double amp_sigma2 = total_power / static_cast<double>(n_tones);
        VecC amps(n);
        for (Eigen::Index i = 0; i < n; ++i)
            amps[i] = std::sqrt(amp_sigma2) * complex_normal(rng);
        return {std::move(freqs), std::move(amps)};
    }

    VecC snapshot(const SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                  const geometry::DirectionOfArrival &doa, double t0)
    {
        auto prof = geometry::delays(g, doa);
        VecC y(prof.delays_s.size());
        for (Eigen::Index m = 0; m < prof.delays_s.size(); ++m)
            y[m] = sig(t0 - prof.delays_s[m]);
        return y;
    }

    SnapshotEnsemble ensemble(const SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                              const geometry::DirectionOfArrival &doa, double t_start, double period_s,
                              std::size_t count)
    {
        if (!(period_s > 0.0))
            throw std::invalid_argument("period must be positive");
        auto prof = geometry::delays(g, doa);
        SnapshotEnsemble e;
        e.carrier_hz = g.carrier_hz;
        e.timestamps_s.resize(static_cast<Eigen::Index>(count));
        e.samples.resize(static_cast<Eigen::Index>(count), prof.delays_s.size());
        for (Eigen::Index i = 0; i < e.timestamps_s.size(); ++i)
        {
            double t0 = t_start + static_cast<double>(i) * period_s;
            e.timestamps_s[i] = t0;
            for (Eigen::Index m = 0; m < prof.delays_s.size(); ++m)
                e.samples(i, m) = sig(t0 - prof.delays_s[m]);
        }
        return e;
    }

    DecimationSchedule decimation_schedule(const geometry::ArrayGeometry &g, const geometry::DirectionOfArrival &doa,
                                           double omega_hz)
    {
        if (!(omega_hz > 0.0))
            throw std::invalid_argument("bandwidth must be positive");
        double a = geometry::effective_aperture(g, doa);
        if (!(a > 0.0))
            throw std::domain_error("degenerate aperture: sampling rate cannot be reduced at broadside");
        DecimationSchedule s;
        s.nyquist_period_s = 1.0 / (2.0 * omega_hz);
        s.decimated_period_s = a / speed_of_light;
        s.ratio = s.decimated_period_s / s.nyquist_period_s;
        return s;
    }

} // namespace slepbeam::signal
