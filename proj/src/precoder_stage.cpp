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

#include "holobeam/precoder_stage.hpp"

#include <algorithm>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace holobeam {

namespace {

void check_qos(const std::vector<CVector>& p, const std::vector<double>& delta, const std::vector<double>& noise) {
    if (p.empty()) throw std::invalid_argument("precoder problem needs at least one user");
    if (delta.size() != p.size() || noise.size() != p.size())
        throw std::invalid_argument("SINR target / noise list does not match the user count");
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(delta[k] > 0.0) || !(noise[k] > 0.0))
            throw std::invalid_argument("SINR targets and noise powers must be positive");
    }
}

// SINR of user k for precoders u through the effective channel p_k.
std::vector<double> sinrs(const std::vector<CVector>& p, const std::vector<CVector>& u, const std::vector<double>& noise) {
    const std::size_t m = p.size();
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        double signal = 0.0, interference = 0.0;
        for (std::size_t s = 0; s < u.size(); ++s) {
            const double a = std::norm(p[k].dot(u[s]));
            (s == k ? signal : interference) += a;
        }
        out[k] = signal / (interference + noise[k]);
    }
    return out;
}

// Stream powers t_m that meet every SINR constraint with equality for fixed
// beam directions u_m. Returns false (and leaves u alone) when the system has
// no positive solution.
bool equalize_powers(const std::vector<CVector>& p, std::vector<CVector>& u,
                     const std::vector<double>& delta, const std::vector<double>& noise) {
    const int m = static_cast<int>(u.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd b(m);
    for (int k = 0; k < m; ++k) {
        for (int s = 0; s < m; ++s) {
            const double g = std::norm(p[static_cast<std::size_t>(k)].dot(u[static_cast<std::size_t>(s)]));
            a(k, s) = (s == k) ? g : -delta[static_cast<std::size_t>(k)] * g;
        }
        b[k] = delta[static_cast<std::size_t>(k)] * noise[static_cast<std::size_t>(k)];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd t = lu.solve(b);
    for (int s = 0; s < m; ++s) {
        if (!std::isfinite(t[s]) || t[s] <= 0.0) return false;
    }
    for (int s = 0; s < m; ++s) u[static_cast<std::size_t>(s)] *= std::sqrt(t[s]);
    return true;
}

PrecoderSolution solve_sinr_sdp(const CMatrix& z, const std::vector<CVector>& p, const std::vector<double>& delta,
                                const std::vector<double>& noise, const SolverTolerances& tol) {
    check_qos(p, delta, noise);
    const int n = static_cast<int>(z.rows());
    const int m = static_cast<int>(p.size());

    PrecoderSolution out;

    // Inputs with no radiating element cost nothing and do nothing; keep them
    // out of the SDP so the objective stays positive definite on what remains.
    const double zmax = z.diagonal().real().maxCoeff();
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
        if (z(i, i).real() > 1e-14 * zmax) active.push_back(i);
    }
    if (active.empty() || !(zmax > 0.0)) {
        out.sdp_status = SdpStatus::infeasible;
        out.precoders.w.assign(static_cast<std::size_t>(m), CVector::Zero(n));
        return out;
    }
    const int na = static_cast<int>(active.size());
    CMatrix za(na, na);
    for (int r = 0; r < na; ++r)
        for (int c = 0; c < na; ++c) za(r, c) = z(active[r], active[c]);
    std::vector<CVector> pa(static_cast<std::size_t>(m), CVector(na));
    for (int k = 0; k < m; ++k)
        for (int r = 0; r < na; ++r) pa[static_cast<std::size_t>(k)][r] = p[static_cast<std::size_t>(k)][active[r]];

    TraceSdp sdp;
    sdp.objective.assign(static_cast<std::size_t>(m), za);
    for (int k = 0; k < m; ++k) {
        const CMatrix pk = pa[static_cast<std::size_t>(k)] * pa[static_cast<std::size_t>(k)].adjoint();
        TraceConstraint c;
        c.coeffs.resize(static_cast<std::size_t>(m));
        for (int s = 0; s < m; ++s) c.coeffs[static_cast<std::size_t>(s)] = (s == k) ? pk : CMatrix(-delta[static_cast<std::size_t>(k)] * pk);
        c.rhs = delta[static_cast<std::size_t>(k)] * noise[static_cast<std::size_t>(k)];
        sdp.constraints.push_back(std::move(c));
    }

    const SdpSolution sol = solve_sdp(sdp, tol.sdp_tol, tol.sdp_max_iters);
    out.sdp_status = sol.status;
    out.sdp_objective = sol.objective;
    if (sol.status == SdpStatus::infeasible) {
        out.precoders.w.assign(static_cast<std::size_t>(m), CVector::Zero(n));
        return out;
    }
    for (double r : sol.eigen_ratio) out.max_eigen_ratio = std::max(out.max_eigen_ratio, r);

    std::vector<CVector> u;
    u.reserve(static_cast<std::size_t>(m));
    for (const auto& x : sol.blocks) u.push_back(dominant_rank_one(x));
    if (!equalize_powers(pa, u, delta, noise))
        spdlog::debug("precoder power equalisation skipped (no positive solution)");

    const std::vector<double> s = sinrs(pa, u, noise);
    out.feasible = true;
    for (int k = 0; k < m; ++k) {
        if (!(s[static_cast<std::size_t>(k)] >= delta[static_cast<std::size_t>(k)] * (1.0 - 1e-6))) out.feasible = false;
    }
    out.sinr = s;

    out.p_tx = 0.0;
    for (int s_idx = 0; s_idx < m; ++s_idx) {
        CVector w = CVector::Zero(n);
        for (int r = 0; r < na; ++r) w[active[r]] = u[static_cast<std::size_t>(s_idx)][r];
        out.p_tx += (w.adjoint() * z * w)(0).real();
        out.precoders.w.push_back(std::move(w));
    }
    return out;
}

}  // namespace

PrecoderProblem build_precoder_problem(const std::vector<CVector>& channels, const WaveguideResponse& h,
                                       const DmaWeights& q, const ScenarioConfig& cfg) {
    const DmaLayout& lay = h.layout;
    const CVector eff = effective_weights(h, q);
    PrecoderProblem prob;
    prob.z = CMatrix::Zero(lay.n_microstrips, lay.n_microstrips);
    for (int n = 0; n < lay.size(); ++n) prob.z(lay.strip(n), lay.strip(n)) += std::norm(eff[n]);
    for (const auto& gamma : channels) {
        if (gamma.size() != lay.size()) throw std::invalid_argument("channel length does not match the layout");
        CVector pk = CVector::Zero(lay.n_microstrips);
        // p_k = conj(gamma_k^H H Q) per RF chain
        for (int n = 0; n < lay.size(); ++n) pk[lay.strip(n)] += gamma[n] * std::conj(eff[n]);
        prob.p.push_back(std::move(pk));
    }
    prob.sinr_targets = cfg.sinr_targets;
    prob.noise_mw = cfg.noise_mw;
    return prob;
}

PrecoderSolution solve_precoders(const PrecoderProblem& prob, const SolverTolerances& tol) {
    if (prob.n_users() > prob.dim())
        throw std::invalid_argument("more users than RF chains");
    return solve_sinr_sdp(prob.z, prob.p, prob.sinr_targets, prob.noise_mw, tol);
}

PrecoderSolution solve_fd(const std::vector<CVector>& channels, const ScenarioConfig& cfg) {
    if (channels.empty()) throw std::invalid_argument("FD benchmark needs at least one user");
    const int n = static_cast<int>(channels.front().size());
    return solve_sinr_sdp(CMatrix::Identity(n, n), channels, cfg.sinr_targets, cfg.noise_mw, cfg.tolerances);
}

}  // namespace holobeam
