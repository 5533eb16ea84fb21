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

#ifndef SLEPBEAM_IQDESIGN_HPP
#define SLEPBEAM_IQDESIGN_HPP

#include <cstdint>
#include <vector>

#include "slepbeam/measure.hpp"
#include "slepbeam/slepian.hpp"
#include "slepbeam/types.hpp"

namespace slepbeam::iqdesign
{
    // Real lifting of the covariance eigenbasis split V = [V_K V_perp]:
    //   U      = [[Re V_K^H,    -Im V_K^H],    [Im V_K^H,    Re V_K^H]]
    //   U_perp = [[Re V_perp^H, -Im V_perp^H], [Im V_perp^H, Re V_perp^H]]
    // so that || V_perp^H phi ||^2 = || U_perp h ||^2 for h = [Re phi; Im phi].
    struct RealifiedSubspaces
    {
        MatR subspace;   // U, 2K x 2M
        MatR complement; // U_perp, 2(M-K) x 2M
        std::size_t m = 0;
        std::size_t k = 0;
    };

    RealifiedSubspaces realify(const slepian::CovarianceModel &model, std::size_t k);

    // Block realification of a complex matrix / vector.
    MatR realify_matrix(const MatC &a);
    VecR realify_vector(const VecC &v);
    VecC derealify_vector(const VecR &h);

    // One lifted quadratic constraint <g g^T, T> <= threshold.
    struct SdpConstraint
    {
        VecR g;
        double threshold = 0.0;
    };

    // min <Q, T>  s.t.  T psd, diag(T) = 1, constraints
    struct SdpProblem
    {
        MatR objective; // Q, 2M x 2M symmetric PSD
        std::vector<SdpConstraint> constraints;
        double alpha = 0.0; // reference threshold (reporting only)
    };

    // Constraint set for designing row k against prior rows: for each prior h
    // both <U h, U h'> and the quarter-turn <U h, U (J h')> are bounded by
    // alpha/2, which caps the complex Gram alignment |<V_K^H phi, V_K^H phi'>|^2
    // at alpha.
    SdpProblem make_row_problem(const RealifiedSubspaces &sub, const std::vector<VecR> &prior_rows, double alpha);

    struct SdpOptions
    {
        double eps_rel = 1e-6;      // primal/dual residual tolerance
        double diag_tol = 1e-6;     // unit-diagonal tolerance (satisfied exactly on output)
        int max_iterations = 4000;
        double rho = 1.0;           // initial ADMM penalty
        bool throw_on_failure = false;
    };

    struct SdpSolution
    {
        MatR t; // symmetric, unit diagonal, min eigenvalue >= -eps
        double objective = 0.0;
        int iterations = 0;
        double primal_residual = 0.0;
        double dual_residual = 0.0;
        bool converged = false;
    };

    // Two-block ADMM splitting: least-squares projection onto the affine set
    // (unit diagonal + slack-completed inequality rows) alternated with
    // projection onto the PSD cone x nonnegative slacks.
    SdpSolution solve_sdp(const SdpProblem &p, const SdpOptions &opt = {});

    struct RoundResult
    {
        VecR h; // best feasible sign vector
        double objective = 0.0;
        int feasible_candidates = 0;
        int trials_used = 0;
    };

    // MAXCUT-style randomized rounding: draw v ~ N(0, T), take sign(v), then
    // greedily flip entries, first to repair constraint violations, then to
    // descend the objective while staying feasible. Deterministic per seed;
    // throws infeasible_design when no candidate satisfies the constraints.
    RoundResult randomized_round(const SdpSolution &sol, std::size_t trials, const SdpProblem &p, std::uint64_t seed);

    // phi[m] = (h[m] + j h[M+m]) * (1-j)/2, exactly in {1, -1, j, -j}.
    VecC to_alphabet(const VecR &h);

    struct DesignRowReport
    {
        double sdp_objective = 0.0;
        double rounded_objective = 0.0;
        int sdp_iterations = 0;
        int feasible_candidates = 0;
        int trials = 0;
        double alpha_used = 0.0;
    };

    struct DesignReport
    {
        std::size_t k = 0;
        double alpha = 0.0; // as configured (0 = auto)
        std::vector<DesignRowReport> rows;

        std::string to_json() const;
    };

    inline constexpr std::size_t default_round_trials = 2000;

    // Sequential binary-IQ measurement design. alpha <= 0 selects the
    // documented default 0.1 * mean diag(U h h^T U^T) over the prior rows
    // (usually far too strict at large M; scenario configs carry an explicit
    // alpha instead).
    measure::MeasurementMatrix design_binary_iq(const slepian::CovarianceModel &model, std::size_t k, double alpha,
                                                std::size_t trials, std::uint64_t seed,
                                                DesignReport *report = nullptr);

} // namespace slepbeam::iqdesign

#endif
