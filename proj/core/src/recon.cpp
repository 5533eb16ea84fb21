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

#include "slepbeam/recon.hpp"

#include <algorithm>
#include <cmath>

#include "slepbeam/rng.hpp"

namespace slepbeam::recon
{

    namespace
    {
        // Hermitian positive-(semi)definite solve with an explicit singularity
        // check; no jitter is added at sigma2 = 0.
        Eigen::LDLT<MatC> factor_readout_gram(const MatC &a)
        {
            Eigen::LDLT<MatC> ldlt(a);
            VecR d = ldlt.vectorD().real();
            double hi = d.cwiseAbs().maxCoeff();
            double lo = d.cwiseAbs().minCoeff();
            if (!(hi > 0.0) || lo <= 1e-14 * hi || ldlt.info() != Eigen::Success)
                throw numerical_error("readout Gram matrix is numerically singular; "
                                      "reduce K or add measurement noise");
            return ldlt;
        }

        double sinc(double x)
        {
            if (std::abs(x) < 1e-8)
            {
                double a = pi * x;
                return 1.0 - a * a / 6.0;
            }
            return std::sin(pi * x) / (pi * x);
        }
    } // namespace

    VecC mmse_estimate(const MatC &phi, const slepian::CovarianceModel &model, double sigma2, const VecC &w)
    {
        if (phi.cols() != static_cast<Eigen::Index>(model.dim()))
            throw std::invalid_argument("measurement matrix does not match covariance dimension");
        if (w.size() != phi.rows())
            throw std::invalid_argument("readout length does not match measurement count");
        if (sigma2 < 0.0)
            throw std::invalid_argument("noise variance must be nonnegative");
        MatC g = phi * model.matrix(); // K x M
        MatC a = g * phi.adjoint();
        a.diagonal().array() += sigma2;
        a = 0.5 * (a + a.adjoint()).eval();
        auto ldlt = factor_readout_gram(a);
        return g.adjoint() * ldlt.solve(w);
    }

    VecC mmse_estimate(const measure::MeasurementMatrix &phi, const slepian::CovarianceModel &model, double sigma2,
                       const VecC &w)
    {
        return mmse_estimate(MatC(phi.effective()), model, sigma2, w);
    }

    MseResult mse_closed_form(const MatC &phi, const slepian::CovarianceModel &model, double sigma2)
    {
        if (phi.cols() != static_cast<Eigen::Index>(model.dim()))
            throw std::invalid_argument("measurement matrix does not match covariance dimension");
        if (sigma2 < 0.0)
            throw std::invalid_argument("noise variance must be nonnegative");
        MatC g = phi * model.matrix(); // K x M
        MatC a = g * phi.adjoint();
        a.diagonal().array() += sigma2;
        a = 0.5 * (a + a.adjoint()).eval();
        auto ldlt = factor_readout_gram(a);
        MatC gg = g * g.adjoint(); // K x K
        double captured = ldlt.solve(gg).trace().real();
        MseResult res;
        double tr = model.trace();
        res.raw = std::max(0.0, tr - captured);
        res.normalized = tr > 0.0 ? res.raw / tr : 0.0;
        return res;
    }

    MseResult mse_closed_form(const measure::MeasurementMatrix &phi, const slepian::CovarianceModel &model,
                              double sigma2)
    {
        return mse_closed_form(MatC(phi.effective()), model, sigma2);
    }

    McMseResult mc_mse(const MatC &phi, const slepian::CovarianceModel &model, double sigma2, std::size_t trials,
                       std::uint64_t seed)
    {
        if (trials < 1)
            throw std::invalid_argument("need at least one trial");
        MatC g = phi * model.matrix();
        MatC a = g * phi.adjoint();
        a.diagonal().array() += sigma2;
        a = 0.5 * (a + a.adjoint()).eval();
        auto ldlt = factor_readout_gram(a);
        MatC w_op = ldlt.solve(g).adjoint(); // M x K estimator, y_hat = w_op * w

        Rng rng(seed);
        double sum = 0.0, sum2 = 0.0;
        double noise_sigma = std::sqrt(sigma2);
        for (std::size_t t = 0; t < trials; ++t)
        {
            VecC y0 = slepian::gaussian_snapshot(model, rng);
            VecC w = phi * y0;
            if (sigma2 > 0.0)
                for (Eigen::Index i = 0; i < w.size(); ++i)
                    w[i] += noise_sigma * complex_normal(rng);
            double e = (w_op * w - y0).squaredNorm();
            sum += e;
            sum2 += e * e;
        }
        McMseResult res;
        double n = static_cast<double>(trials);
        res.mean = sum / n;
        double var = std::max(0.0, sum2 / n - res.mean * res.mean);
        res.std_error = std::sqrt(var / n);
        return res;
    }

    CompositeCovariance composite_covariance(const SceneModel &scene, const geometry::ArrayGeometry &g)
    {
        auto r0 = slepian::covariance(g, scene.source, scene.source.doa);
        const auto m = static_cast<Eigen::Index>(r0.dim());
        MatC ri = MatC::Zero(m, m);
        for (const auto &src : scene.interferers)
            ri += slepian::covariance(g, src, src.doa).matrix();
        return {std::move(r0), std::move(ri)};
    }

    VecC mmse_interference_estimate(const MatC &phi, const MatC &r0, const MatC &ri, double sigma2, const VecC &w)
    {
        MatC g0 = phi * r0;
        MatC a = g0 * phi.adjoint() + phi * ri * phi.adjoint();
        a.diagonal().array() += sigma2;
        a = 0.5 * (a + a.adjoint()).eval();
        auto ldlt = factor_readout_gram(a);
        return g0.adjoint() * ldlt.solve(w);
    }

    double mse_with_interference(const MatC &phi, const MatC &r0, const MatC &ri, double sigma2)
    {
        MatC g0 = phi * r0;
        MatC a = g0 * phi.adjoint() + phi * ri * phi.adjoint();
        a.diagonal().array() += sigma2;
        a = 0.5 * (a + a.adjoint()).eval();
        auto ldlt = factor_readout_gram(a);
        MatC gg = g0 * g0.adjoint();
        double captured = ldlt.solve(gg).trace().real();
        return std::max(0.0, r0.trace().real() - captured);
    }

    bool angular_separation(const signal::SourceSpec &a, const signal::SourceSpec &b)
    {
        auto center = [](const signal::SourceSpec &s)
        { return s.doa.unit_normal().x() / 2.0; };
        auto width = [](const signal::SourceSpec &s)
        { return s.normalized_half_bandwidth() * std::abs(s.doa.unit_normal().x()); };
        return std::abs(center(a) - center(b)) >= width(a) + width(b);
    }

    ReconstructionReport reconstruction_report(const measure::MeasurementMatrix &phi,
                                               const slepian::CovarianceModel &model, double sigma2)
    {
        ReconstructionReport rep;
        auto mse = mse_closed_form(phi, model, sigma2);
        rep.mse_raw = mse.raw;
        rep.mse_normalized = mse.normalized;
        rep.k = phi.rows();
        rep.family = phi.family;
        rep.sigma2 = sigma2;
        return rep;
    }

    // ---- streaming least squares -------------------------------------------

    FrameBasisPlan::FrameBasisPlan(std::vector<Frame> frames, double carrier_hz, double omega_hz,
                                   std::size_t basis_size, BasisFamily family)
        : frames_(std::move(frames)), carrier_hz_(carrier_hz), omega_hz_(omega_hz), family_(family)
    {
        if (frames_.size() < 1)
            throw std::invalid_argument("plan needs at least one frame");
        if (!(omega_hz_ > 0.0))
            throw std::invalid_argument("bandwidth must be positive");
        for (std::size_t i = 0; i < frames_.size(); ++i)
        {
            if (!(frames_[i].t_left < frames_[i].t_right))
                throw std::invalid_argument("frame interval is empty");
            if (i + 1 < frames_.size() && !(frames_[i + 1].t_left < frames_[i].t_right))
                throw std::invalid_argument("consecutive frames must overlap: t_left[i+1] < t_right[i]");
            if (i + 2 < frames_.size() && !(frames_[i].t_right < frames_[i + 2].t_left))
                throw std::invalid_argument("frame overlap must not span three frames");
        }

        double width = frames_[0].t_right - frames_[0].t_left;
        if (basis_size == 0)
            basis_size = static_cast<std::size_t>(std::ceil(2.0 * width * omega_hz_)) + 4;
        basis_size_ = basis_size;

        grid_step_ = 1.0 / (4.0 * omega_hz_); // 2x oversampled grid
        for (const auto &fr : frames_)
        {
            double w = fr.t_right - fr.t_left;
            auto g_count = static_cast<Eigen::Index>(std::max<double>(std::ceil(w / grid_step_) + 1.0,
                                                                      static_cast<double>(basis_size_)));
            VecR grid(g_count);
            double step = w / static_cast<double>(g_count - 1);
            for (Eigen::Index i = 0; i < g_count; ++i)
                grid[i] = fr.t_left + static_cast<double>(i) * step;
            grid_times_.push_back(grid);

            MatR basis(g_count, static_cast<Eigen::Index>(basis_size_));
            if (family_ == BasisFamily::sampled_slepian)
            {
                double w_grid = std::min(0.5, omega_hz_ * step);
                MatR b = slepian::prolate_matrix(w_grid, static_cast<std::size_t>(g_count));
                Eigen::SelfAdjointEigenSolver<MatR> es(b);
                for (std::size_t n = 0; n < basis_size_; ++n)
                    basis.col(static_cast<Eigen::Index>(n)) = es.eigenvectors().col(g_count - 1 -
                                                                                    static_cast<Eigen::Index>(n));
            }
            else
            {
                // real Fourier modes on the frame
                for (std::size_t n = 0; n < basis_size_; ++n)
                    for (Eigen::Index i = 0; i < g_count; ++i)
                    {
                        double ph = 2.0 * pi * static_cast<double>((n + 1) / 2) *
                                    static_cast<double>(i) / static_cast<double>(g_count);
                        basis(i, static_cast<Eigen::Index>(n)) = n % 2 == 0 ? std::cos(ph) : std::sin(ph);
                    }
            }
            grid_basis_.push_back(basis);
        }
    }

    cplx FrameBasisPlan::basis_value(std::size_t frame, std::size_t n, double t) const
    {
        const VecR &grid = grid_times_[frame];
        const MatR &basis = grid_basis_[frame];
        double step = grid[1] - grid[0];
        double acc = 0.0;
        for (Eigen::Index g = 0; g < grid.size(); ++g)
            acc += basis(g, static_cast<Eigen::Index>(n)) * sinc((t - grid[g]) / step);
        double t_center = 0.5 * (frames_[frame].t_left + frames_[frame].t_right);
        double ph = 2.0 * pi * carrier_hz_ * (t - t_center);
        return acc * cplx(std::cos(ph), std::sin(ph));
    }

    std::pair<double, double> FrameBasisPlan::batch_window(std::size_t i) const
    {
        double lo = i == 0 ? -std::numeric_limits<double>::infinity() : frames_[i - 1].t_right;
        double hi = i + 1 < frames_.size() ? frames_[i + 1].t_left : std::numeric_limits<double>::infinity();
        return {lo, hi};
    }

    StreamingLeastSquares::StreamingLeastSquares(FrameBasisPlan plan) : plan_(std::move(plan)) {}

    void StreamingLeastSquares::push(const VecR &times, const VecC &values)
    {
        if (processed_ >= plan_.frames().size())
            throw std::invalid_argument("more batches than frames in the plan");
        if (times.size() != values.size())
            throw std::invalid_argument("times and values must match");
        const std::size_t i = processed_;
        auto [lo, hi] = plan_.batch_window(i);
        for (Eigen::Index s = 0; s < times.size(); ++s)
            if (!(times[s] >= lo && times[s] <= hi))
                throw std::invalid_argument("sample time falls outside its batch window");

        const auto n = static_cast<Eigen::Index>(plan_.basis_size());
        MatC a(times.size(), n), b(times.size(), n);
        for (Eigen::Index s = 0; s < times.size(); ++s)
            for (Eigen::Index c = 0; c < n; ++c)
            {
                a(s, c) = plan_.basis_value(i, static_cast<std::size_t>(c), times[s]);
                b(s, c) = i == 0 ? cplx(0.0, 0.0)
                                 : plan_.basis_value(i - 1, static_cast<std::size_t>(c), times[s]);
            }

        if (i == 0)
        {
            s_ = a.adjoint() * a;
            r_ = a.adjoint() * values;
            back_c.emplace_back();
            back_d.emplace_back();
            processed_ = 1;
            return;
        }

        // eliminate alpha_{i-1} from the joint quadratic in (alpha_{i-1}, alpha_i)
        MatC p = s_ + b.adjoint() * b;
        Eigen::LDLT<MatC> ldlt(p);
        VecR d = ldlt.vectorD().real();
        double dmax = d.cwiseAbs().maxCoeff();
        if (!(dmax > 0.0) || d.cwiseAbs().minCoeff() <= 1e-13 * dmax)
            rank_warning_ = true; // insufficient samples so far; solution not unique

        MatC c_step = ldlt.solve(b.adjoint() * a);
        VecC d_step = ldlt.solve(r_ + b.adjoint() * values);
        s_ = a.adjoint() * a - (a.adjoint() * b) * c_step;
        r_ = a.adjoint() * values - (a.adjoint() * b) * d_step;
        back_c.push_back(std::move(c_step));
        back_d.push_back(std::move(d_step));
        processed_ = i + 1;
    }

    std::vector<VecC> StreamingLeastSquares::coefficients() const
    {
        if (processed_ == 0)
            return {};
        std::vector<VecC> alpha(processed_);
        Eigen::LDLT<MatC> ldlt(s_);
        alpha[processed_ - 1] = ldlt.solve(r_);
        for (std::size_t i = processed_ - 1; i > 0; --i)
            alpha[i - 1] = back_d[i] - back_c[i] * alpha[i];
        return alpha;
    }

    VecC StreamingLeastSquares::reconstruct(const VecR &times) const
    {
        auto alpha = coefficients();
        VecC out = VecC::Zero(times.size());
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (Eigen::Index s = 0; s < times.size(); ++s)
                for (Eigen::Index n = 0; n < alpha[i].size(); ++n)
                    out[s] += alpha[i][n] * plan_.basis_value(i, static_cast<std::size_t>(n), times[s]);
        return out;
    }

    // ---- nonuniform -> uniform recovery --------------------------------------

    CgdResult cgd_uniform_recovery(const VecR &sample_times_s, const VecC &samples, double carrier_hz,
                                   double omega_hz, double delta, double eps, int max_iterations)
    {
        if (sample_times_s.size() != samples.size())
            throw std::invalid_argument("times and samples must match");
        if (sample_times_s.size() < 2)
            throw std::invalid_argument("need at least two samples");
        if (!(delta > 0.0))
            throw std::invalid_argument("regularization delta must be positive");
        if (!(omega_hz > 0.0))
            throw std::invalid_argument("bandwidth must be positive");

        const auto n = sample_times_s.size();
        VecC y(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double ph = -2.0 * pi * carrier_hz * sample_times_s[i];
            y[i] = samples[i] * cplx(std::cos(ph), std::sin(ph)); // demodulate to baseband
        }

        MatR gram(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            gram(i, i) = 1.0 + delta;
            for (Eigen::Index j = 0; j < i; ++j)
            {
                double v = sinc(2.0 * omega_hz * (sample_times_s[i] - sample_times_s[j]));
                gram(i, j) = v;
                gram(j, i) = v;
            }
        }

        // conjugate-residual iterations: ||r|| is nonincreasing by construction
        CgdResult res;
        VecC x = VecC::Zero(n);
        VecC r = y;
        VecC p = r;
        VecC ar = gram * r;
        VecC ap = ar;
        double norm_y = y.norm();
        cplx rar = r.dot(ar); // dot() conjugates the left argument
        int it = 0;
        double rel = norm_y > 0.0 ? r.norm() / norm_y : 0.0;
        while (rel > eps && it < max_iterations)
        {
            cplx alpha = rar / ap.dot(ap);
            x += alpha * p;
            r -= alpha * ap;
            ar = gram * r;
            cplx rar_next = r.dot(ar);
            cplx beta = rar_next / rar;
            rar = rar_next;
            p = r + beta * p;
            ap = ar + beta * ap;
            ++it;
            rel = norm_y > 0.0 ? r.norm() / norm_y : 0.0;
            res.residual_history.push_back(rel);
        }
        res.iterations = it;
        res.final_residual = rel;
        res.converged = rel <= eps;

        double t0 = sample_times_s.minCoeff();
        double t1 = sample_times_s.maxCoeff();
        double step = 1.0 / (2.0 * omega_hz);
        auto count = static_cast<Eigen::Index>(std::floor((t1 - t0) / step)) + 1;
        res.grid_times_s.resize(count);
        res.uniform_samples.resize(count);
        for (Eigen::Index k = 0; k < count; ++k)
        {
            double t = t0 + static_cast<double>(k) * step;
            res.grid_times_s[k] = t;
            cplx acc(0.0, 0.0);
            for (Eigen::Index i = 0; i < n; ++i)
                acc += x[i] * sinc(2.0 * omega_hz * (t - sample_times_s[i]));
            res.uniform_samples[k] = acc;
        }
        return res;
    }

    // ---- beamforming baselines ------------------------------------------------

    BeamsumResult fractional_delay_beamsum(const signal::SnapshotEnsemble &ensemble,
                                           const geometry::DelayProfile &delays)
    {
        return fractional_delay_beamsum(ensemble, delays, FractionalDelayOptions{});
    }

    BeamsumResult fractional_delay_beamsum(const signal::SnapshotEnsemble &ensemble,
                                           const geometry::DelayProfile &delays, const FractionalDelayOptions &opt)
    {
        const auto n = ensemble.timestamps_s.size();
        const auto m = ensemble.samples.cols();
        if (n < 2)
            throw std::invalid_argument("ensemble too short for interpolation");
        if (delays.delays_s.size() != m)
            throw std::invalid_argument("delay profile does not match ensemble width");
        double step = ensemble.timestamps_s[1] - ensemble.timestamps_s[0];
        for (Eigen::Index i = 2; i < n; ++i)
            if (std::abs(ensemble.timestamps_s[i] - ensemble.timestamps_s[i - 1] - step) > 1e-9 * std::abs(step))
                throw std::invalid_argument("ensemble timestamps must be uniform");

        const int h = opt.half_taps;
        const double beta = opt.kaiser_beta;
        const double i0_beta = std::cyl_bessel_i(0.0, beta);
        const double fc = ensemble.carrier_hz;

        BeamsumResult out;
        out.times_s = ensemble.timestamps_s;
        out.output = VecC::Zero(n);

        Eigen::Index lead_max = 0, lag_max = 0;
        for (Eigen::Index e = 0; e < m; ++e)
        {
            double shift = delays.delays_s[e] / step; // advance by +tau_m
            auto base = static_cast<Eigen::Index>(std::floor(shift));
            double frac = shift - static_cast<double>(base);

            // windowed-sinc taps at fractional offset
            VecR kernel(2 * h);
            for (int l = -h + 1; l <= h; ++l)
            {
                double xk = static_cast<double>(l) - frac;
                double win_arg = 1.0 - (xk / static_cast<double>(h)) * (xk / static_cast<double>(h));
                double win = win_arg > 0.0 ? std::cyl_bessel_i(0.0, beta * std::sqrt(win_arg)) / i0_beta : 0.0;
                kernel[l + h - 1] = sinc(xk) * win;
            }
            lead_max = std::max(lead_max, -(base - static_cast<Eigen::Index>(h) + 1));
            lag_max = std::max(lag_max, base + static_cast<Eigen::Index>(h));

            for (Eigen::Index i = 0; i < n; ++i)
            {
                cplx acc(0.0, 0.0);
                for (int l = -h + 1; l <= h; ++l)
                {
                    Eigen::Index idx = i + base + l;
                    if (idx < 0 || idx >= n)
                        continue;
                    // demodulate, interpolate at baseband
                    double ph = -2.0 * pi * fc * ensemble.timestamps_s[idx];
                    acc += kernel[l + h - 1] * ensemble.samples(idx, e) * cplx(std::cos(ph), std::sin(ph));
                }
                double ph = 2.0 * pi * fc * (ensemble.timestamps_s[i] + delays.delays_s[e]);
                out.output[i] += acc * cplx(std::cos(ph), std::sin(ph));
            }
        }
        out.output /= static_cast<double>(m);
        out.valid_begin = std::min(n, std::max<Eigen::Index>(0, lead_max));
        out.valid_end = std::max<Eigen::Index>(0, n - lag_max);
        return out;
    }

    VecC true_time_delay_reference(const signal::SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                                   const geometry::DirectionOfArrival &doa, const VecR &times, double sigma2,
                                   std::uint64_t seed)
    {
        (void)doa; // the aligned noiseless sum is s(t) for every arrival direction
        const double m = static_cast<double>(g.size());
        VecC out = sig.evaluate(times);
        if (sigma2 > 0.0)
        {
            Rng rng(seed);
            double s = std::sqrt(sigma2 / m); // incoherent average of M element noises
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out[i] += s * complex_normal(rng);
        }
        return out;
    }

    VecC narrowband_beamsum(const signal::SnapshotEnsemble &ensemble, const geometry::DelayProfile &delays)
    {
        const auto n = ensemble.timestamps_s.size();
        const auto m = ensemble.samples.cols();
        if (delays.delays_s.size() != m)
            throw std::invalid_argument("delay profile does not match ensemble width");
        VecC weights(m);
        for (Eigen::Index e = 0; e < m; ++e)
        {
            double ph = 2.0 * pi * ensemble.carrier_hz * delays.delays_s[e];
            weights[e] = cplx(std::cos(ph), std::sin(ph));
        }
        VecC out(n);
        for (Eigen::Index i = 0; i < n; ++i)
            out[i] = (ensemble.samples.row(i) * weights)(0) / static_cast<double>(m);
        return out;
    }

} // namespace slepbeam::recon
