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

#pragma once

#include <vector>

#include "holobeam/dma_model.hpp"
#include "holobeam/scenario.hpp"
#include "holobeam/sdp.hpp"

namespace holobeam {

/// Digital-precoder subproblem for fixed DMA weights:
///
///   minimize   sum_m Tr(Z W_m)
///   subject to Tr(P_k W_k) - delta_k sum_{m != k} Tr(P_k W_m) >= delta_k sigma_k^2
///
/// with Z = (HQ)^H HQ and P_k = p_k p_k^H, p_k = (gamma_k^H H Q)^H.
struct PrecoderProblem {
    CMatrix z;
    std::vector<CVector> p;  // rank-one factors of P_k
    std::vector<double> sinr_targets;
    std::vector<double> noise_mw;

    int n_users() const { return static_cast<int>(p.size()); }
    int dim() const { return static_cast<int>(z.rows()); }
    CMatrix p_matrix(int k) const { return p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)].adjoint(); }
};

struct PrecoderSolution {
    PrecoderSet precoders;
    double p_tx = 0.0;           // sum_m w_m^H Z w_m of the returned vectors
    double sdp_objective = 0.0;  // relaxation optimum
    double max_eigen_ratio = 0.0;
    std::vector<double> sinr;  // achieved SINR per user
    SdpStatus sdp_status = SdpStatus::max_iters;
    bool feasible = false;
};

/// Z and P_k assembled from the block map; Z is diagonal because each element
/// feeds exactly one RF chain.
PrecoderProblem build_precoder_problem(const std::vector<CVector>& channels, const WaveguideResponse& h,
                                       const DmaWeights& q, const ScenarioConfig& cfg);

/// Solves the relaxation, extracts w_m from the dominant eigenpair of each W_m,
/// and rescales the stream powers so every SINR constraint is met with equality.
/// RF chains whose elements are all switched off (Z_ii = 0) are removed from
/// the SDP and get zero precoder entries.
PrecoderSolution solve_precoders(const PrecoderProblem& prob, const SolverTolerances& tol = {});

/// Fully digital benchmark: Z = I_N, P_k = gamma_k gamma_k^H, w_m in C^N.
PrecoderSolution solve_fd(const std::vector<CVector>& channels, const ScenarioConfig& cfg);

}  // namespace holobeam
