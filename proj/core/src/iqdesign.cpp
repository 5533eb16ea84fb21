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

#include "slepbeam/iqdesign.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include <json.hpp>

#include "slepbeam/rng.hpp"

namespace slepbeam::iqdesign
{

    MatR realify_matrix(const MatC &a)
    {
        const auto r = a.rows(), c = a.cols();
        MatR out(2 * r, 2 * c);
        out.topLeftCorner(r, c) = a.real();
        out.topRightCorner(r, c) = -a.imag();
        out.bottomLeftCorner(r, c) = a.imag();
        out.bottomRightCorner(r, c) = a.real();
        return out;
    }

    VecR realify_vector(const VecC &v)
    {
        VecR h(2 * v.size());
        h.head(v.size()) = v.real();
        h.tail(v.size()) = v.imag();
        return h;
    }

    VecC derealify_vector(const VecR &h)
    {
        if (h.size() % 2 != 0)
            throw std::invalid_argument("realified vector must have even length");
        const auto m = h.size() / 2;
        VecC v(m);
        for (Eigen::Index i = 0; i < m; ++i)
            v[i] = cplx(h[i], h[m + i]);
        return v;
    }

    RealifiedSubspaces realify(const slepian::CovarianceModel &model, std::size_t k)
    {
        const std::size_t m = model.dim();
        if (k < 1 || k >= m)
            throw std::invalid_argument("subspace split needs 1 <= K < M");
        RealifiedSubspaces sub;
        sub.m = m;
        sub.k = k;
        const MatC &v = model.eigenvectors();
        sub.subspace = realify_matrix(v.leftCols(static_cast<Eigen::Index>(k)).adjoint());
        sub.complement = realify_matrix(v.rightCols(static_cast<Eigen::Index>(m - k)).adjoint());
        return sub;
    }

    SdpProblem make_row_problem(const RealifiedSubspaces &sub, const std::vector<VecR> &prior_rows, double alpha)
    {
        const auto n = static_cast<Eigen::Index>(2 * sub.m);
        SdpProblem p;
        p.alpha = alpha;
        // Q = U_perp^T U_perp = I - U^T U (the lifted basis is orthogonal)
        p.objective = MatR::Identity(n, n) - sub.subspace.transpose() * sub.subspace;
        for (const auto &h : prior_rows)
        {
            if (h.size() != n)
                throw std::invalid_argument("prior row has wrong dimension");
            // quarter-turn J h represents j * phi
            VecR jh(n);
            const auto m = n / 2;
            jh.head(m) = -h.tail(m);
            jh.tail(m) = h.head(m);
            VecR uh = sub.subspace.transpose() * (sub.subspace * h);
            VecR ujh = sub.subspace.transpose() * (sub.subspace * jh);
            p.constraints.push_back({std::move(uh), alpha / 2.0});
            p.constraints.push_back({std::move(ujh), alpha / 2.0});
        }
        return p;
    }

    namespace
    {
        // dense symmetric eigendecomposition via LAPACK (ascending eigenvalues)
        void sym_eig(const MatR &a, VecR &w, MatR &v)
        {
            const auto n = a.rows();
            v = a;
            w.resize(n);
            lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), v.data(),
                                             static_cast<lapack_int>(n), w.data());
            if (info != 0)
                throw numerical_error("dsyevd failed in PSD projection");
        }

        MatR psd_project(const MatR &a, VecR *evals_out = nullptr, MatR *evecs_out = nullptr)
        {
            VecR w;
            MatR v;
            sym_eig(0.5 * (a + a.transpose()), w, v);
            MatR scaled = v;
            for (Eigen::Index c = 0; c < v.cols(); ++c)
                scaled.col(c) *= std::max(0.0, w[c]);
            if (evals_out)
                *evals_out = w;
            if (evecs_out)
                *evecs_out = v;
            return scaled * v.transpose();
        }
    } // namespace

    SdpSolution solve_sdp(const SdpProblem &p, const SdpOptions &opt)
    {
        const auto n = p.objective.rows();
        const auto nc = static_cast<Eigen::Index>(p.constraints.size());
        const double root_n = std::sqrt(static_cast<double>(n));

        // Schur complement pieces of the affine projection normal equations:
        // rows are diag picks (orthonormal) and rank-one constraint picks.
        MatR cmat(n, nc);            // C[m,i] = g_i[m]^2
        MatR dmat = MatR::Zero(nc, nc);
        for (Eigen::Index i = 0; i < nc; ++i)
        {
            const VecR &gi = p.constraints[static_cast<std::size_t>(i)].g;
            cmat.col(i) = gi.cwiseProduct(gi);
            for (Eigen::Index j = 0; j <= i; ++j)
            {
                double dot = gi.dot(p.constraints[static_cast<std::size_t>(j)].g);
                dmat(i, j) = dot * dot;
                dmat(j, i) = dmat(i, j);
            }
            dmat(i, i) += 1.0; // slack column
        }
        Eigen::LDLT<MatR> schur;
        if (nc > 0)
            schur.compute(dmat - cmat.transpose() * cmat);

        double rho = opt.rho;
        MatR t_x = MatR::Identity(n, n);
        VecR s_x = VecR::Zero(nc);
        MatR z = t_x;
        VecR s_z = s_x;
        MatR u = MatR::Zero(n, n);
        VecR u_s = VecR::Zero(nc);

        SdpSolution sol;
        const double relax = 1.6;

        for (int it = 0; it < opt.max_iterations; ++it)
        {
            // x-update: project (z - u - Q/rho, s_z - u_s) onto the affine set
            MatR t0 = z - u - p.objective / rho;
            VecR s0 = s_z - u_s;
            VecR r1 = t0.diagonal().array() - 1.0;
            if (nc > 0)
            {
                VecR r2(nc);
                for (Eigen::Index i = 0; i < nc; ++i)
                {
                    const VecR &gi = p.constraints[static_cast<std::size_t>(i)].g;
                    r2[i] = gi.dot(t0 * gi) + s0[i] - p.constraints[static_cast<std::size_t>(i)].threshold;
                }
                VecR y2 = schur.solve(r2 - cmat.transpose() * r1);
                VecR y1 = r1 - cmat * y2;
                t_x = t0;
                t_x.diagonal() -= y1;
                for (Eigen::Index i = 0; i < nc; ++i)
                    t_x.noalias() -= y2[i] * (p.constraints[static_cast<std::size_t>(i)].g *
                                              p.constraints[static_cast<std::size_t>(i)].g.transpose());
                s_x = s0 - y2;
            }
            else
            {
                t_x = t0;
                t_x.diagonal().array() = 1.0;
                s_x = s0;
            }
            t_x = 0.5 * (t_x + t_x.transpose()).eval();

            // z-update with over-relaxation: PSD cone x nonnegative slacks
            MatR t_hat = relax * t_x + (1.0 - relax) * z;
            VecR s_hat = relax * s_x + (1.0 - relax) * s_z;
            MatR z_old = z;
            VecR s_zold = s_z;
            z = psd_project(t_hat + u);
            s_z = (s_hat + u_s).cwiseMax(0.0);
            u += t_hat - z;
            u_s += s_hat - s_z;

            sol.iterations = it + 1;
            if ((it + 1) % 10 == 0 || it + 1 == opt.max_iterations)
            {
                double rp = std::sqrt((t_x - z).squaredNorm() + (s_x - s_z).squaredNorm());
                double rd = rho * std::sqrt((z - z_old).squaredNorm() + (s_z - s_zold).squaredNorm());
                double scale = std::max({t_x.norm(), z.norm(), 1.0});
                sol.primal_residual = rp / (root_n * scale);
                sol.dual_residual = rd / (root_n * scale);
                if (sol.primal_residual <= opt.eps_rel && sol.dual_residual <= opt.eps_rel)
                {
                    sol.converged = true;
                    break;
                }
                if (rp > 10.0 * rd)
                {
                    rho *= 1.5;
                    u /= 1.5;
                    u_s /= 1.5;
                }
                else if (rd > 10.0 * rp)
                {
                    rho /= 1.5;
                    u *= 1.5;
                    u_s *= 1.5;
                }
            }
        }
        sol.t = t_x; // affine side: diagonal exactly one, constraints exactly met
        sol.objective = (p.objective.cwiseProduct(t_x)).sum();
        if (!sol.converged && opt.throw_on_failure)
            throw numerical_error("SDP solver did not reach tolerance; primal residual " +
                                  std::to_string(sol.primal_residual) + ", dual residual " +
                                  std::to_string(sol.dual_residual));
        return sol;
    }

    namespace
    {
        // One candidate: repair constraint violations by greedy single flips,
        // then descend the objective with feasibility-preserving flips.
        struct Candidate
        {
            VecR h;
            double objective = 0.0;
            bool feasible = false;
        };

        Candidate polish_candidate(VecR h, const MatR &q, const std::vector<SdpConstraint> &cons, int max_passes)
        {
            const auto n = h.size();
            const auto nc = static_cast<Eigen::Index>(cons.size());
            VecR qh = q * h;
            VecR gt(nc);
            for (Eigen::Index i = 0; i < nc; ++i)
                gt[i] = cons[static_cast<std::size_t>(i)].g.dot(h);

            auto violation = [&](const VecR &gvals)
            {
                double v = 0.0;
                for (Eigen::Index i = 0; i < nc; ++i)
                    v += std::max(0.0, gvals[i] * gvals[i] - cons[static_cast<std::size_t>(i)].threshold);
                return v;
            };

            double tv = violation(gt);
            for (int pass = 0; pass < max_passes && tv > 0.0; ++pass)
            {
                bool improved = false;
                for (Eigen::Index j = 0; j < n; ++j)
                {
                    VecR ng = gt;
                    for (Eigen::Index i = 0; i < nc; ++i)
                        ng[i] -= 2.0 * h[j] * cons[static_cast<std::size_t>(i)].g[j];
                    double ntv = violation(ng);
                    if (ntv < tv - 1e-12)
                    {
                        gt = ng;
                        qh -= 2.0 * h[j] * q.col(j);
                        h[j] = -h[j];
                        tv = ntv;
                        improved = true;
                        if (tv <= 0.0)
                            break;
                    }
                }
                if (!improved)
                    break;
            }

            Candidate cand;
            for (Eigen::Index i = 0; i < nc; ++i)
                if (gt[i] * gt[i] > cons[static_cast<std::size_t>(i)].threshold + 1e-9)
                {
                    cand.h = std::move(h);
                    return cand; // infeasible
                }

            double obj = h.dot(qh);
            for (int pass = 0; pass < max_passes; ++pass)
            {
                bool improved = false;
                for (Eigen::Index j = 0; j < n; ++j)
                {
                    double delta = -4.0 * h[j] * qh[j] + 4.0 * q(j, j);
                    if (delta < -1e-12)
                    {
                        bool ok = true;
                        for (Eigen::Index i = 0; i < nc; ++i)
                        {
                            double ng = gt[i] - 2.0 * h[j] * cons[static_cast<std::size_t>(i)].g[j];
                            if (ng * ng > cons[static_cast<std::size_t>(i)].threshold + 1e-9)
                            {
                                ok = false;
                                break;
                            }
                        }
                        if (!ok)
                            continue;
                        for (Eigen::Index i = 0; i < nc; ++i)
                            gt[i] -= 2.0 * h[j] * cons[static_cast<std::size_t>(i)].g[j];
                        qh -= 2.0 * h[j] * q.col(j);
                        obj += delta;
                        h[j] = -h[j];
                        improved = true;
                    }
                }
                if (!improved)
                    break;
            }
            cand.h = std::move(h);
            cand.objective = obj;
            cand.feasible = true;
            return cand;
        }
    } // namespace

    RoundResult randomized_round(const SdpSolution &sol, std::size_t trials, const SdpProblem &p, std::uint64_t seed)
    {
        if (trials < 1)
            throw std::invalid_argument("need at least one rounding trial");
        const auto n = sol.t.rows();
        VecR w;
        MatR v;
        {
            MatR sym = 0.5 * (sol.t + sol.t.transpose());
            VecR evals;
            MatR evecs;
            psd_project(sym, &evals, &evecs); // reuse the factorization path
            w = evals.cwiseMax(0.0).cwiseSqrt();
            v = evecs;
        }

        RoundResult best;
        best.objective = std::numeric_limits<double>::infinity();
        Rng rng(seed);

        auto consider = [&](const VecR &signs)
        {
            auto cand = polish_candidate(signs, p.objective, p.constraints, 4);
            if (!cand.feasible)
                return;
            ++best.feasible_candidates;
            if (cand.objective < best.objective)
            {
                best.objective = cand.objective;
                best.h = cand.h;
            }
        };

        // rank-one fast path: round the dominant eigenvector first
        VecR top = v.col(n - 1);
        VecR signs(n);
        for (Eigen::Index i = 0; i < n; ++i)
            signs[i] = top[i] >= 0.0 ? 1.0 : -1.0;
        consider(signs);

        for (std::size_t t = 0; t < trials; ++t)
        {
            VecR gauss(n);
            for (Eigen::Index i = 0; i < n; ++i)
                gauss[i] = standard_normal(rng);
            VecR draw = v * w.cwiseProduct(gauss);
            for (Eigen::Index i = 0; i < n; ++i)
                signs[i] = draw[i] >= 0.0 ? 1.0 : -1.0;
            consider(signs);
        }
        best.trials_used = static_cast<int>(trials);
        if (!std::isfinite(best.objective))
            throw infeasible_design("randomized rounding found no constraint-feasible candidate; raise alpha or "
                                    "trials",
                                    0);
        return best;
    }

    VecC to_alphabet(const VecR &h)
    {
        if (h.size() % 2 != 0)
            throw std::invalid_argument("sign vector must have even length");
        const auto m = h.size() / 2;
        VecC phi(m);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            double re = h[i], im = h[m + i];
            if (std::abs(re) != 1.0 || std::abs(im) != 1.0)
                throw std::invalid_argument("sign vector entries must be +-1");
            // (re + j im)(1 - j)/2 lands exactly on {1, -1, j, -j}
            if (re == 1.0 && im == 1.0)
                phi[i] = cplx(1.0, 0.0);
            else if (re == -1.0 && im == 1.0)
                phi[i] = cplx(0.0, 1.0);
            else if (re == -1.0 && im == -1.0)
                phi[i] = cplx(-1.0, 0.0);
            else
                phi[i] = cplx(0.0, -1.0);
        }
        return phi;
    }

    std::string DesignReport::to_json() const
    {
        nlohmann::ordered_json j;
        j["K"] = k;
        j["alpha"] = alpha;
        auto rows_json = nlohmann::ordered_json::array();
        for (const auto &r : rows)
        {
            nlohmann::ordered_json rj;
            rj["sdp_objective"] = r.sdp_objective;
            rj["rounded_objective"] = r.rounded_objective;
            rj["sdp_iterations"] = r.sdp_iterations;
            rj["feasible_candidates"] = r.feasible_candidates;
            rj["rounding_trials"] = r.trials;
            rj["alpha_used"] = r.alpha_used;
            rows_json.push_back(std::move(rj));
        }
        j["rows"] = std::move(rows_json);
        return j.dump(2);
    }

    measure::MeasurementMatrix design_binary_iq(const slepian::CovarianceModel &model, std::size_t k, double alpha,
                                                std::size_t trials, std::uint64_t seed, DesignReport *report)
    {
        const std::size_t m = model.dim();
        if (k < 1 || k >= m)
            throw std::invalid_argument("design needs 1 <= K < M");
        auto sub = realify(model, k);

        if (report)
        {
            report->k = k;
            report->alpha = alpha;
            report->rows.clear();
        }

        std::vector<VecR> rows;
        MatC phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
        for (std::size_t row = 0; row < k; ++row)
        {
            double alpha_row = alpha;
            if (alpha <= 0.0 && !rows.empty())
            {
                // documented default: 0.1 * mean diagonal of U h h^T U^T
                double acc = 0.0;
                for (const auto &h : rows)
                    acc += (sub.subspace * h).squaredNorm() / static_cast<double>(2 * k);
                alpha_row = 0.1 * acc / static_cast<double>(rows.size());
            }
            auto problem = make_row_problem(sub, rows, alpha_row);
            auto sol = solve_sdp(problem);
            try
            {
                auto rounded = randomized_round(sol, trials, problem, mix_seed(seed, row));
                rows.push_back(rounded.h);
                phi.row(static_cast<Eigen::Index>(row)) = to_alphabet(rounded.h).transpose();
                if (report)
                    report->rows.push_back({sol.objective, rounded.objective, sol.iterations,
                                            rounded.feasible_candidates, rounded.trials_used, alpha_row});
            }
            catch (const infeasible_design &e)
            {
                throw infeasible_design(std::string(e.what()) + " (row " + std::to_string(row) + ")", row);
            }
        }
        return measure::from_entries(std::move(phi), measure::Family::binary_iq, false);
    }

} // namespace slepbeam::iqdesign
