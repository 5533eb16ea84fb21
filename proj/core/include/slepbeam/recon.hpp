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

#ifndef SLEPBEAM_RECON_HPP
#define SLEPBEAM_RECON_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "slepbeam/measure.hpp"
#include "slepbeam/signal.hpp"
#include "slepbeam/slepian.hpp"
#include "slepbeam/types.hpp"

namespace slepbeam::recon
{
    // ---- MMSE reconstruction from linear readout ---------------------------

    // y_hat = R Phi^H (Phi R Phi^H + sigma2 I)^{-1} w, realized as a Hermitian
    // solve. With sigma2 = 0 a numerically singular system throws
    // numerical_error instead of being jittered.
    VecC mmse_estimate(const MatC &phi, const slepian::CovarianceModel &model, double sigma2, const VecC &w);
    VecC mmse_estimate(const measure::MeasurementMatrix &phi, const slepian::CovarianceModel &model, double sigma2,
                       const VecC &w);

    struct MseResult
    {
        double raw = 0.0;
        double normalized = 0.0; // raw / trace(R)
    };

    // trace(R - R Phi^H (Phi R Phi^H + sigma2 I)^{-1} Phi R)
    MseResult mse_closed_form(const MatC &phi, const slepian::CovarianceModel &model, double sigma2);
    MseResult mse_closed_form(const measure::MeasurementMatrix &phi, const slepian::CovarianceModel &model,
                              double sigma2);

    struct McMseResult
    {
        double mean = 0.0;
        double std_error = 0.0; // standard error of the mean
    };

    // Monte Carlo estimate over exact Gaussian draws y ~ CN(0, R) plus fresh
    // readout noise; deterministic per seed.
    McMseResult mc_mse(const MatC &phi, const slepian::CovarianceModel &model, double sigma2, std::size_t trials,
                       std::uint64_t seed);

    // ---- interference -------------------------------------------------------

    struct SceneModel
    {
        signal::SourceSpec source;
        std::vector<signal::SourceSpec> interferers;
        double noise_var = 0.0;
    };

    struct CompositeCovariance
    {
        slepian::CovarianceModel signal_model; // R0 with eigen-cache
        MatC interference;                     // R_I = sum of interferer covariances
    };

    CompositeCovariance composite_covariance(const SceneModel &scene, const geometry::ArrayGeometry &g);

    VecC mmse_interference_estimate(const MatC &phi, const MatC &r0, const MatC &ri, double sigma2, const VecC &w);

    // trace(R0 - R0 Phi^H (Phi R0 Phi^H + Phi RI Phi^H + sigma2 I)^{-1} Phi R0)
    double mse_with_interference(const MatC &phi, const MatC &r0, const MatC &ri, double sigma2);

    // Angular-band separation of two sources seen along the x axis:
    // |f_a - f_b| >= W_a + W_b with f = cos(theta)/2 and W = Omega/(2 f_c)|cos(theta)|.
    // Labels sweep regimes; not enforced anywhere.
    bool angular_separation(const signal::SourceSpec &a, const signal::SourceSpec &b);

    // Sweep/report row used by the harness CSV emitters.
    struct ReconstructionReport
    {
        double mse_raw = 0.0;
        double mse_normalized = 0.0;
        std::optional<double> empirical_mse;
        std::size_t k = 0;
        measure::Family family = measure::Family::slepian;
        double sigma2 = 0.0;
    };

    ReconstructionReport reconstruction_report(const measure::MeasurementMatrix &phi,
                                               const slepian::CovarianceModel &model, double sigma2);

    // ---- streaming least squares over overlapping frames --------------------

    struct Frame
    {
        double t_left = 0.0;
        double t_right = 0.0;
    };

    // Per-frame basis: discrete Slepian vectors on an oversampled grid over
    // the frame, band-interpolated so they can be evaluated at arbitrary
    // times, carrier-modulated. Frames must satisfy the overlap ordering
    // t_left[i] < t_right[i-1] < t_left[i+1].
    class FrameBasisPlan
    {
    public:
        enum class BasisFamily
        {
            sampled_slepian,
            fourier
        };

        FrameBasisPlan(std::vector<Frame> frames, double carrier_hz, double omega_hz, std::size_t basis_size = 0,
                       BasisFamily family = BasisFamily::sampled_slepian);

        cplx basis_value(std::size_t frame, std::size_t n, double t) const;
        std::size_t basis_size() const { return basis_size_; }
        const std::vector<Frame> &frames() const { return frames_; }
        double carrier_hz() const { return carrier_hz_; }

        // window [t_right[i-1], t_left[i+1]] that batch i must fall into
        std::pair<double, double> batch_window(std::size_t i) const;

    private:
        std::vector<Frame> frames_;
        double carrier_hz_ = 0.0;
        double omega_hz_ = 0.0;
        std::size_t basis_size_ = 0;
        BasisFamily family_ = BasisFamily::sampled_slepian;
        double grid_step_ = 0.0;
        std::vector<VecR> grid_times_; // per frame
        std::vector<MatR> grid_basis_; // per frame, G x N (real Slepian vectors)
    };

    // Online solver for min sum_i || z_i - A_i a_i - B_i a_{i-1} ||^2 with
    // A_i[m,n] = psi_{i,n}(t_m), B_i[m,n] = psi_{i-1,n}(t_m). After each batch
    // the recoverable coefficients equal the full batch re-solve. Single
    // owner; not shareable mid-update.
    class StreamingLeastSquares
    {
    public:
        explicit StreamingLeastSquares(FrameBasisPlan plan);

        void push(const VecR &times, const VecC &values); // batch for the next frame
        std::size_t batches() const { return processed_; }
        bool rank_warning() const { return rank_warning_; }

        std::vector<VecC> coefficients() const; // alpha_0 .. alpha_{I-1}
        VecC reconstruct(const VecR &times) const;
        const FrameBasisPlan &plan() const { return plan_; }

    private:
        FrameBasisPlan plan_;
        std::size_t processed_ = 0;
        bool rank_warning_ = false;
        MatC s_;                  // marginal normal matrix for the newest frame
        VecC r_;                  // marginal right-hand side
        std::vector<MatC> back_c; // alpha_{i-1} = d_i - C_i alpha_i
        std::vector<VecC> back_d;
    };

    // ---- nonuniform -> uniform recovery (conjugate residual iterations) ----

    struct CgdResult
    {
        VecR grid_times_s;
        VecC uniform_samples; // complex baseband (demodulated by f_c)
        int iterations = 0;
        double final_residual = 0.0; // relative
        bool converged = false;
        std::vector<double> residual_history;
    };

    // Tikhonov-regularized sinc-kernel system (G + delta I) c = demod(y),
    // G[i,j] = sinc(2 Omega (t_i - t_j)), solved by conjugate-residual
    // iterations (residual norm nonincreasing); the uniform samples are the
    // kernel expansion evaluated on the 1/(2 Omega) grid.
    CgdResult cgd_uniform_recovery(const VecR &sample_times_s, const VecC &samples, double carrier_hz,
                                   double omega_hz, double delta, double eps, int max_iterations = 200);

    // ---- beamforming baselines ---------------------------------------------

    struct BeamsumResult
    {
        VecR times_s;
        VecC output;
        // indices outside [valid_begin, valid_end) see filter edge effects
        Eigen::Index valid_begin = 0;
        Eigen::Index valid_end = 0;
    };

    // Digital true-time-delay: per-element Kaiser-windowed-sinc fractional
    // delay at baseband plus carrier phase, summed and scaled by 1/M.
    BeamsumResult fractional_delay_beamsum(const signal::SnapshotEnsemble &ensemble,
                                           const geometry::DelayProfile &delays);

    struct FractionalDelayOptions
    {
        int half_taps = 32;       // window half-length
        double kaiser_beta = 8.0; // window shape
    };
    BeamsumResult fractional_delay_beamsum(const signal::SnapshotEnsemble &ensemble,
                                           const geometry::DelayProfile &delays, const FractionalDelayOptions &opt);

    // Exact delay-and-sum from the tone representation; optionally adds the
    // averaged per-element noise so array-gain statistics can be measured.
    VecC true_time_delay_reference(const signal::SyntheticSignal &sig, const geometry::ArrayGeometry &g,
                                   const geometry::DirectionOfArrival &doa, const VecR &times, double sigma2 = 0.0,
                                   std::uint64_t seed = 0);

    // Single narrowband weight-and-sum with phi_m = exp(j w0 tau_m), scaled 1/M.
    VecC narrowband_beamsum(const signal::SnapshotEnsemble &ensemble, const geometry::DelayProfile &delays);

} // namespace slepbeam::recon

#endif
