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

#ifndef SLEPBEAM_RNG_HPP
#define SLEPBEAM_RNG_HPP

#include <cstdint>
#include <random>

#include "slepbeam/types.hpp"

namespace slepbeam
{
    using Rng = std::mt19937_64;

    // SplitMix64 step; used to derive independent per-trial / per-point seeds
    // from a master seed without correlated streams.
    inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index)
    {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    inline double standard_normal(Rng &rng)
    {
        std::normal_distribution<double> dist(0.0, 1.0);
        return dist(rng);
    }

    // CN(0,1): real and imaginary parts N(0, 1/2), so E|z|^2 = 1.
    inline cplx complex_normal(Rng &rng)
    {
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
        double re = dist(rng);
        double im = dist(rng);
        return {re, im};
    }

} // namespace slepbeam

#endif
