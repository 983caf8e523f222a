// SPDX-License-Identifier: Apache-2.0
//
// holobeam: Lorentzian-constrained holographic beamforming for DMA-aided MISO downlink
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

#include "holobeam/weight_stage.hpp"

#include <stdexcept>

#include <spdlog/spdlog.h>

namespace holobeam {

CMatrix WeightProblem::b_matrix(int m) const {
    return b_diag.at(static_cast<std::size_t>(m)).cast<Complex>().asDiagonal();
}

CMatrix WeightProblem::c_matrix(int k, int m) const {
    const CVector& v = c.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(m));
    return v * v.adjoint();
}

WeightProblem build_weight_problem(const std::vector<CVector>& channels, const WaveguideResponse& h,
                                   const PrecoderSet& w, const ScenarioConfig& cfg) {
    const DmaLayout& lay = h.layout;
    const int n = lay.size();
    if (h.diag.size() != n) throw std::invalid_argument("waveguide length does not match the layout");

    std::vector<CVector> a;
    a.reserve(w.w.size());
    for (const auto& wm : w.w) {
        if (wm.size() != lay.n_microstrips) throw std::invalid_argument("precoder length does not match the RF chain count");
        CVector am(n);
        for (int idx = 0; idx < n; ++idx) am[idx] = h.diag[idx] * wm[lay.strip(idx)];
        a.push_back(std::move(am));
    }

    WeightProblem prob;
    for (const auto& am : a) prob.b_diag.push_back(am.cwiseAbs2());
    for (const auto& gamma : channels) {
        if (gamma.size() != n) throw std::invalid_argument("channel length does not match the layout");
        std::vector<CVector> row;
        for (const auto& am : a) row.push_back(gamma.cwiseProduct(am.conjugate()));
        prob.c.push_back(std::move(row));
    }
    prob.sinr_targets = cfg.sinr_targets;
    prob.noise_mw = cfg.noise_mw;
    return prob;
}

WeightSolution solve_ideal_weights(const WeightProblem& prob, const SolverTolerances& tol) {
    const int n = prob.dim();
    const int k_users = prob.n_users();
    if (n == 0 || k_users == 0) throw std::invalid_argument("empty weight problem");
    if (k_users > prob.n_streams()) throw std::invalid_argument("weight problem has fewer streams than users");
    if (prob.sinr_targets.size() != static_cast<std::size_t>(k_users) ||
        prob.noise_mw.size() != static_cast<std::size_t>(k_users))
        throw std::invalid_argument("SINR target / noise list does not match the user count");

    RVector cost = RVector::Zero(n);
    for (const auto& b : prob.b_diag) cost += b;

    WeightSolution out;
    out.q_ideal = CVector::Zero(n);
    const double cmax = cost.maxCoeff();
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
        if (cost[i] > 1e-14 * cmax) active.push_back(i);
    }
    if (active.empty() || !(cmax > 0.0)) {
        out.status = SdpStatus::infeasible;
        return out;
    }
    const int na = static_cast<int>(active.size());
    auto reduce = [&](const CVector& v) {
        CVector r(na);
        for (int i = 0; i < na; ++i) r[i] = v[active[i]];
        return r;
    };

    TraceSdp sdp;
    CMatrix f = CMatrix::Zero(na, na);
    for (int i = 0; i < na; ++i) f(i, i) = cost[active[i]];
    sdp.objective.push_back(std::move(f));
    for (int k = 0; k < k_users; ++k) {
        const double delta = prob.sinr_targets[static_cast<std::size_t>(k)];
        CMatrix g = CMatrix::Zero(na, na);
        for (int m = 0; m < prob.n_streams(); ++m) {
            const CVector v = reduce(prob.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]);
            g.noalias() += (m == k ? 1.0 : -delta) * (v * v.adjoint());
        }
        TraceConstraint c;
        c.coeffs.push_back(std::move(g));
        c.rhs = delta * prob.noise_mw[static_cast<std::size_t>(k)];
        sdp.constraints.push_back(std::move(c));
    }

    const SdpSolution sol = solve_sdp(sdp, tol.sdp_tol, tol.sdp_max_iters);
    out.status = sol.status;
    out.objective = sol.objective;
    if (sol.status == SdpStatus::infeasible) return out;
    out.feasible = true;
    out.eigen_ratio = sol.eigen_ratio.empty() ? 0.0 : sol.eigen_ratio.front();
    if (out.eigen_ratio > 1e-3)
        spdlog::debug("weight relaxation not tight: lambda2/lambda1 = {:.3e}", out.eigen_ratio);
    const CVector qa = dominant_rank_one(sol.blocks.front());
    for (int i = 0; i < na; ++i) out.q_ideal[active[i]] = qa[i];
    return out;
}

}  // namespace holobeam
