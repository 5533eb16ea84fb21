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

#include "slepbeam/slepian.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

namespace slepbeam::slepian
{

    // sin(2 pi W d) / (pi d), continuous through d = 0 where it equals 2W.
    static double band_kernel(double w, double d)
    {
        double arg = 2.0 * pi * w * d;
        if (std::abs(arg) < 1e-7)
            return 2.0 * w * (1.0 - arg * arg / 6.0);
        return std::sin(arg) / (pi * d);
    }

    MatR prolate_matrix(double w, std::size_t m)
    {
        if (w < 0.0 || w > 0.5)
            throw std::domain_error("prolate half-bandwidth W must lie in [0, 1/2]");
        if (m < 1)
            throw std::invalid_argument("prolate matrix needs at least one row");
        const auto n = static_cast<Eigen::Index>(m);
        MatR b(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            b(i, i) = 2.0 * w;
            for (Eigen::Index j = 0; j < i; ++j)
            {
                double v = std::sin(2.0 * pi * w * static_cast<double>(i - j)) / (pi * static_cast<double>(i - j));
                b(i, j) = v;
                b(j, i) = v;
            }
        }
        return b;
    }

    MatR generalized_prolate(const ProlateSpec &spec)
    {
        double w = spec.half_bandwidth;
        if (w < 0.0 || w > 0.5)
            throw std::domain_error("prolate half-bandwidth W must lie in [0, 1/2]");
        const auto n = spec.normalized_lags.size();
        if (n < 1)
            throw std::invalid_argument("prolate spec needs at least one lag");
        if (!spec.normalized_lags.allFinite())
            throw std::invalid_argument("lags must be finite");
        MatR b(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            b(i, i) = 2.0 * w;
            for (Eigen::Index j = 0; j < i; ++j)
            {
                double d = spec.normalized_lags[i] - spec.normalized_lags[j];
                double v = d == 0.0 ? 2.0 * w : band_kernel(w, d);
                b(i, j) = v;
                b(j, i) = v;
            }
        }
        return b;
    }

    CovarianceModel::CovarianceModel(MatR kernel, ProlateSpec spec, VecR delays_s, double carrier_hz, double power)
        : spec_(std::move(spec)), delays_s_(std::move(delays_s)), carrier_hz_(carrier_hz), power_(power)
    {
        const auto m = kernel.rows();
        if (delays_s_.size() == 0)
            delays_s_ = VecR::Zero(m);
        modulation_.resize(m);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            double ph = -2.0 * pi * carrier_hz_ * delays_s_[i];
            modulation_[i] = cplx(std::cos(ph), std::sin(ph));
        }
        r_ = power_ * (modulation_.asDiagonal() * kernel.cast<cplx>() * modulation_.asDiagonal().toDenseMatrix().adjoint());
        // exact Hermitian symmetrization before factorizing
        r_ = 0.5 * (r_ + r_.adjoint()).eval();

        Eigen::SelfAdjointEigenSolver<MatC> es(r_);
        if (es.info() != Eigen::Success)
            throw numerical_error("covariance eigendecomposition failed");
        const auto idx = es.eigenvalues().size();
        eigenvalues_.resize(idx);
        eigenvectors_.resize(m, idx);
        for (Eigen::Index k = 0; k < idx; ++k)
        {
            double lam = es.eigenvalues()[idx - 1 - k]; // descending
            eigenvalues_[k] = lam > 0.0 ? lam : 0.0;
            eigenvectors_.col(k) = es.eigenvectors().col(idx - 1 - k);
        }
    }

    MatC CovarianceModel::leading_eigenvectors(std::size_t k) const
    {
        if (k < 1 || k > dim())
            throw std::invalid_argument("eigenvector count out of range");
        return eigenvectors_.leftCols(static_cast<Eigen::Index>(k));
    }

    CovarianceModel covariance(const geometry::ArrayGeometry &g, const signal::SourceSpec &src,
                               const geometry::DirectionOfArrival &doa)
    {
        if (src.half_bandwidth_hz < 0.0)
            throw std::invalid_argument("bandwidth must be nonnegative");
        double w = src.half_bandwidth_hz / (2.0 * g.carrier_hz);
        if (w > 0.5)
            throw std::domain_error("spatial aliasing: source band exceeds the array's half-wavelength design "
                                    "(W = Omega / 2 f_c > 1/2)");
        auto prof = geometry::delays(g, doa);
        ProlateSpec spec{prof.normalized_lags, w};
        MatR kernel;
        if (src.half_bandwidth_hz == 0.0)
        {
            // zero-bandwidth limit: rank-one tone, unit power normalization
            kernel = MatR::Ones(prof.normalized_lags.size(), prof.normalized_lags.size());
        }
        else
        {
            kernel = generalized_prolate(spec);
        }
        return CovarianceModel(std::move(kernel), std::move(spec), prof.delays_s, g.carrier_hz, src.power);
    }

    CovarianceModel covariance_from_spec(const ProlateSpec &spec, double power)
    {
        return CovarianceModel(generalized_prolate(spec), spec, VecR(), 0.0, power);
    }

    double tail_energy(const CovarianceModel &model, std::size_t k)
    {
        if (k > model.dim())
            throw std::invalid_argument("tail index exceeds dimension");
        const auto &lam = model.eigenvalues();
        double acc = 0.0;
        for (Eigen::Index i = static_cast<Eigen::Index>(k); i < lam.size(); ++i)
            acc += lam[i];
        return acc;
    }

    std::size_t plateau_width(const CovarianceModel &model, double lo, double hi)
    {
        if (!(0.0 < lo && lo < hi))
            throw std::invalid_argument("need 0 < lo < hi");
        const auto &lam = model.eigenvalues();
        double top = lam.size() ? lam[0] : 0.0;
        std::size_t n = 0;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            if (lam[i] > lo * top && lam[i] < hi * top)
                ++n;
        return n;
    }

    VecC gaussian_snapshot(const CovarianceModel &model, Rng &rng)
    {
        const auto m = static_cast<Eigen::Index>(model.dim());
        VecC g(m);
        for (Eigen::Index i = 0; i < m; ++i)
            g[i] = std::sqrt(model.eigenvalues()[i]) * complex_normal(rng);
        return model.eigenvectors() * g;
    }

    // ---- low-rank factorization ------------------------------------------

    namespace
    {
        // DFT bins ordered by |frequency|: 0, +1, -1, +2, -2, ...
        std::vector<std::ptrdiff_t> centered_bins(std::size_t count)
        {
            std::vector<std::ptrdiff_t> bins;
            bins.reserve(count);
            std::ptrdiff_t j = 0;
            while (bins.size() < count)
            {
                bins.push_back(j);
                if (bins.size() >= count)
                    break;
                bins.push_back(-(j + 1));
                ++j;
            }
            return bins;
        }

        bool detect_uniform(const VecR &lags, double &spacing)
        {
            if (lags.size() < 2)
                return false;
            spacing = lags[1] - lags[0];
            if (spacing == 0.0)
                return false;
            double scale = std::max(1.0, lags.cwiseAbs().maxCoeff());
            for (Eigen::Index i = 2; i < lags.size(); ++i)
                if (std::abs(lags[i] - lags[i - 1] - spacing) > 1e-9 * scale)
                    return false;
            return true;
        }

        double spectral_norm_hermitian(const MatC &a)
        {
            // power iteration; a is Hermitian so |lambda|_max = ||a||_2
            if (a.rows() == 0)
                return 0.0;
            VecC v = VecC::Ones(a.rows()).normalized();
            double prev = 0.0;
            for (int it = 0; it < 60; ++it)
            {
                VecC w = a * v;
                double nrm = w.norm();
                if (nrm == 0.0)
                    return 0.0;
                v = w / nrm;
                if (std::abs(nrm - prev) <= 1e-12 * nrm)
                    return nrm;
                prev = nrm;
            }
            return prev;
        }
    } // namespace

    LowRankFactor low_rank_factor(const CovarianceModel &model, double eps)
    {
        if (!(eps > 0.0))
            throw std::invalid_argument("eps must be positive");
        const auto m = static_cast<Eigen::Index>(model.dim());
        LowRankFactor f;
        f.modulation = model.modulation();

        double lam1 = model.eigenvalues().size() ? model.eigenvalues()[0] : 0.0;
        if (eps >= lam1)
        {
            // the zero factor already meets the bound
            f.left.resize(m, 0);
            f.right.resize(m, 0);
            f.epsilon = lam1;
            return f;
        }

        const VecR &lags = model.prolate_spec().normalized_lags;
        double w = model.prolate_spec().half_bandwidth;
        double spacing = 0.0;
        bool uniform = detect_uniform(lags, spacing);
        double span = lags.maxCoeff() - lags.minCoeff();
        double u_eff = m > 1 ? span / static_cast<double>(m - 1) : 1.0;

        auto L = static_cast<Eigen::Index>(
            std::min<double>(static_cast<double>(m),
                             std::max(1.0, std::ceil(2.0 * w * static_cast<double>(m) * std::abs(u_eff)))));

        const MatC &r = model.matrix();
        MatC q; // orthonormal in-band block, M x L
        if (uniform)
        {
            f.uniform_lags = true;
            f.lag_spacing = spacing;
            f.fourier_bins = centered_bins(static_cast<std::size_t>(L));
            q.resize(m, L);
            double root = std::sqrt(static_cast<double>(m));
            for (Eigen::Index c = 0; c < L; ++c)
            {
                double freq = 2.0 * pi * static_cast<double>(f.fourier_bins[static_cast<std::size_t>(c)]) /
                              static_cast<double>(m);
                for (Eigen::Index i = 0; i < m; ++i)
                {
                    double ph = freq * static_cast<double>(i);
                    q(i, c) = f.modulation[i] * cplx(std::cos(ph), std::sin(ph)) / root;
                }
            }
        }
        else
        {
            // nonuniform lags: in-band complex exponentials, then orthonormalize
            auto bins = centered_bins(static_cast<std::size_t>(L));
            MatC cols(m, L);
            for (Eigen::Index c = 0; c < L; ++c)
            {
                double xi = static_cast<double>(bins[static_cast<std::size_t>(c)]) /
                            (static_cast<double>(m) * u_eff);
                for (Eigen::Index i = 0; i < m; ++i)
                {
                    double ph = 2.0 * pi * xi * lags[i];
                    cols(i, c) = f.modulation[i] * cplx(std::cos(ph), std::sin(ph));
                }
            }
            Eigen::HouseholderQR<MatC> qr(cols);
            q = qr.householderQ() * MatC::Identity(m, L);
        }
        f.fourier_column_count = static_cast<std::size_t>(L);

        MatC rq = r * q;
        MatC a = q.adjoint() * rq; // L x L, Hermitian up to roundoff
        a = 0.5 * (a + a.adjoint()).eval();
        MatC d = r - q * a * q.adjoint();
        d = 0.5 * (d + d.adjoint()).eval();

        Eigen::SelfAdjointEigenSolver<MatC> es(d);
        if (es.info() != Eigen::Success)
            throw numerical_error("residual eigendecomposition failed");
        std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j)
                  { return std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[j]); });

        Eigen::Index kept = 0;
        while (kept < m && std::abs(es.eigenvalues()[order[static_cast<std::size_t>(kept)]]) > eps)
            ++kept;
        double achieved = kept < m ? std::abs(es.eigenvalues()[order[static_cast<std::size_t>(kept)]]) : 0.0;

        if (L + kept > m)
        {
            // correction alone cannot stay profitable; fall back to plain
            // eigen-truncation of R (always meets eps with K <= M)
            const auto &lam = model.eigenvalues();
            Eigen::Index k = m;
            while (k > 0 && lam[k - 1] <= eps)
                --k;
            LowRankFactor g;
            g.left = model.eigenvectors().leftCols(k) * lam.head(k).asDiagonal();
            g.right = model.eigenvectors().leftCols(k);
            g.epsilon = k < m ? lam[k] : 0.0;
            g.fourier_column_count = 0;
            g.modulation = model.modulation();
            return g;
        }

        f.correction.resize(m, kept);
        f.correction_values.resize(kept);
        for (Eigen::Index i = 0; i < kept; ++i)
        {
            f.correction.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
            f.correction_values[i] = es.eigenvalues()[order[static_cast<std::size_t>(i)]];
        }
        f.fourier_coupling = a;

        f.left.resize(m, L + kept);
        f.left.leftCols(L) = q;
        f.left.rightCols(kept) = f.correction;
        f.right.resize(m, L + kept);
        f.right.leftCols(L) = q * a; // (Q A)^H = A Q^H since A is Hermitian
        f.right.rightCols(kept) = f.correction * f.correction_values.asDiagonal();
        f.epsilon = achieved;
        return f;
    }

    namespace
    {
        std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe

        VecC fft_forward(const VecC &x)
        {
            const auto n = x.size();
            VecC out(n);
            {
                std::lock_guard<std::mutex> lk(fftw_plan_mutex);
                fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                                  reinterpret_cast<fftw_complex *>(const_cast<cplx *>(x.data())),
                                                  reinterpret_cast<fftw_complex *>(out.data()),
                                                  FFTW_FORWARD, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
                fftw_execute(plan);
                fftw_destroy_plan(plan);
            }
            return out;
        }

        VecC fft_backward(const VecC &x)
        {
            const auto n = x.size();
            VecC out(n);
            {
                std::lock_guard<std::mutex> lk(fftw_plan_mutex);
                fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                                  reinterpret_cast<fftw_complex *>(const_cast<cplx *>(x.data())),
                                                  reinterpret_cast<fftw_complex *>(out.data()),
                                                  FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
                fftw_execute(plan);
                fftw_destroy_plan(plan);
            }
            return out;
        }
    } // namespace

    VecC fast_apply(const LowRankFactor &f, const VecC &x)
    {
        const auto m = f.left.rows();
        const auto k = f.left.cols();
        if (k == 0)
            return VecC::Zero(m);
        if (x.size() == k && k != m)
            return f.left * x; // coefficient-space form C_K x
        if (x.size() != m)
            throw std::invalid_argument("fast_apply dimension mismatch");

        if (!f.uniform_lags || f.fourier_column_count == 0)
            return f.left * (f.right.adjoint() * x);

        const auto L = static_cast<Eigen::Index>(f.fourier_column_count);
        double root = std::sqrt(static_cast<double>(m));

        // coefficients against the Fourier block: (Q^H x)_l = DFT(conj(E) .* x)[bin_l] / sqrt(M)
        VecC demod(m);
        for (Eigen::Index i = 0; i < m; ++i)
            demod[i] = std::conj(f.modulation[i]) * x[i];
        VecC spectrum = fft_forward(demod);
        VecC qhx(L);
        for (Eigen::Index l = 0; l < L; ++l)
        {
            auto b = f.fourier_bins[static_cast<std::size_t>(l)];
            auto idx = static_cast<Eigen::Index>(b < 0 ? b + m : b);
            qhx[l] = spectrum[idx] / root;
        }

        VecC z1 = f.fourier_coupling * qhx;

        // back out through the Fourier block with an inverse FFT
        VecC padded = VecC::Zero(m);
        for (Eigen::Index l = 0; l < L; ++l)
        {
            auto b = f.fourier_bins[static_cast<std::size_t>(l)];
            auto idx = static_cast<Eigen::Index>(b < 0 ? b + m : b);
            padded[idx] += z1[l];
        }
        VecC y = fft_backward(padded) / root;
        for (Eigen::Index i = 0; i < m; ++i)
            y[i] *= f.modulation[i];

        if (f.correction.cols() > 0)
        {
            VecC z2 = f.correction_values.asDiagonal() * (f.correction.adjoint() * x);
            y += f.correction * z2;
        }
        return y;
    }

    MatR spectrum_table(const CovarianceModel &model)
    {
        const auto &lam = model.eigenvalues();
        double top = lam.size() && lam[0] > 0.0 ? lam[0] : 1.0;
        MatR t(lam.size(), 3);
        for (Eigen::Index i = 0; i < lam.size(); ++i)
        {
            t(i, 0) = static_cast<double>(i + 1);
            t(i, 1) = lam[i];
            t(i, 2) = lam[i] / top;
        }
        return t;
    }

} // namespace slepbeam::slepian
