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

#include "slepbeam/measure.hpp"

#include <cmath>

#include "slepbeam/rng.hpp"

namespace slepbeam::measure
{

    std::string to_string(Family f)
    {
        switch (f)
        {
        case Family::slepian:
            return "slepian";
        case Family::unimodular:
            return "unimodular";
        case Family::random_gaussian:
            return "random";
        case Family::binary_iq:
            return "binary-iq";
        }
        return "random";
    }

    Family family_from_string(const std::string &name)
    {
        if (name == "slepian")
            return Family::slepian;
        if (name == "unimodular")
            return Family::unimodular;
        if (name == "random" || name == "random_gaussian")
            return Family::random_gaussian;
        if (name == "binary-iq" || name == "binary_iq")
            return Family::binary_iq;
        throw std::invalid_argument("unknown measurement family: " + name);
    }

    double spectral_norm(const MatC &a)
    {
        if (a.rows() == 0 || a.cols() == 0)
            return 0.0;
        // sigma_max via the small Gram side
        if (a.rows() <= a.cols())
        {
            MatC g = a * a.adjoint();
            Eigen::SelfAdjointEigenSolver<MatC> es(g);
            return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
        }
        MatC g = a.adjoint() * a;
        Eigen::SelfAdjointEigenSolver<MatC> es(g);
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }

    static bool nearly_rank_deficient(const MatC &a)
    {
        MatC g = a.rows() <= a.cols() ? MatC(a * a.adjoint()) : MatC(a.adjoint() * a);
        Eigen::SelfAdjointEigenSolver<MatC> es(g);
        double hi = es.eigenvalues().maxCoeff();
        double lo = es.eigenvalues().minCoeff();
        return hi > 0.0 && lo < 1e-20 * hi; // singular value ratio < 1e-10
    }

    MeasurementMatrix slepian_measurements(const slepian::CovarianceModel &model, std::size_t k)
    {
        if (k < 1 || k > model.dim())
            throw std::invalid_argument("measurement count out of range");
        MeasurementMatrix mm;
        mm.entries = model.leading_eigenvectors(k).adjoint();
        mm.family = Family::slepian;
        return mm;
    }

    MeasurementMatrix unimodular_measurements(const VecR &freqs_hz, const geometry::DelayProfile &delays,
                                              bool normalize)
    {
        if (freqs_hz.size() < 1)
            throw std::invalid_argument("need at least one measurement frequency");
        const auto k = freqs_hz.size();
        const auto m = delays.delays_s.size();
        MeasurementMatrix mm;
        mm.entries.resize(k, m);
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < m; ++c)
            {
                double ph = 2.0 * pi * freqs_hz[r] * delays.delays_s[c];
                mm.entries(r, c) = cplx(std::cos(ph), std::sin(ph));
            }
        mm.family = Family::unimodular;
        mm.conditioning_warning = nearly_rank_deficient(mm.entries);
        if (normalize)
        {
            mm.norm_policy.normalized = true;
            mm.norm_policy.scale = 1.0 / spectral_norm(mm.entries);
        }
        return mm;
    }

    VecR default_frequency_grid(double carrier_hz, double omega_hz, std::size_t k)
    {
        if (k < 1)
            throw std::invalid_argument("grid needs at least one point");
        VecR f(static_cast<Eigen::Index>(k));
        double step = 2.0 * omega_hz / static_cast<double>(k);
        for (Eigen::Index i = 0; i < f.size(); ++i)
            f[i] = carrier_hz - omega_hz + (static_cast<double>(i) + 0.5) * step;
        return f;
    }

    MeasurementMatrix random_measurements(std::size_t k, std::size_t m, std::uint64_t seed, bool normalize)
    {
        if (k < 1 || m < 1)
            throw std::invalid_argument("matrix dimensions must be nonzero");
        Rng rng(seed);
        MeasurementMatrix mm;
        mm.entries.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
        for (Eigen::Index r = 0; r < mm.entries.rows(); ++r)
            for (Eigen::Index c = 0; c < mm.entries.cols(); ++c)
                mm.entries(r, c) = complex_normal(rng);
        mm.family = Family::random_gaussian;
        if (normalize)
        {
            mm.norm_policy.normalized = true;
            mm.norm_policy.scale = 1.0 / spectral_norm(mm.entries);
        }
        return mm;
    }

    MeasurementMatrix from_entries(MatC entries, Family family, bool normalize)
    {
        MeasurementMatrix mm;
        mm.entries = std::move(entries);
        mm.family = family;
        mm.conditioning_warning = nearly_rank_deficient(mm.entries);
        if (normalize)
        {
            mm.norm_policy.normalized = true;
            mm.norm_policy.scale = 1.0 / spectral_norm(mm.entries);
        }
        return mm;
    }

    VecC apply_readout(const MeasurementMatrix &phi, const VecC &y, double sigma2, std::uint64_t seed)
    {
        if (y.size() != phi.entries.cols())
            throw std::invalid_argument("snapshot length does not match measurement matrix");
        if (sigma2 < 0.0)
            throw std::invalid_argument("noise variance must be nonnegative");
        VecC w = phi.norm_policy.scale * (phi.entries * y);
        if (sigma2 > 0.0)
        {
            Rng rng(seed);
            double s = std::sqrt(sigma2);
            for (Eigen::Index i = 0; i < w.size(); ++i)
                w[i] += s * complex_normal(rng);
        }
        return w;
    }

} // namespace slepbeam::measure
