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

/// DMA-weight subproblem for fixed precoders, in the reduced N-dimensional
/// form. Because every element n feeds exactly one RF chain i(n), the stream-m
/// signal at element n is a_{m,n} q_n with a_{m,n} = H_n w_{m,i(n)}.  Hence
///
///   B_m     = diag(|a_{m,n}|^2)
///   c_{k,m} = gamma_{k,n} conj(a_{m,n})      (y_{k,m} = c_{k,m}^H q)
///   C_{k,m} = c_{k,m} c_{k,m}^H
struct WeightProblem {
    std::vector<RVector> b_diag;            // [stream] -> diagonal of B_m
    std::vector<std::vector<CVector>> c;    // [user][stream] -> c_{k,m}
    std::vector<double> sinr_targets;
    std::vector<double> noise_mw;

    int dim() const { return b_diag.empty() ? 0 : static_cast<int>(b_diag.front().size()); }
    int n_users() const { return static_cast<int>(c.size()); }
    int n_streams() const { return static_cast<int>(b_diag.size()); }

    CMatrix b_matrix(int m) const;
    CMatrix c_matrix(int k, int m) const;
};

struct WeightSolution {
    CVector q_ideal;          // q~*, unconstrained
    double objective = 0.0;   // relaxation optimum
    double eigen_ratio = 0.0; // lambda_2 / lambda_1 of Q~*
    SdpStatus status = SdpStatus::max_iters;
    bool feasible = false;
};

WeightProblem build_weight_problem(const std::vector<CVector>& channels, const WaveguideResponse& h,
                                   const PrecoderSet& w, const ScenarioConfig& cfg);

/// minimize sum_m Tr(B_m Q) s.t. Tr(C_kk Q) - delta_k sum_{m != k} Tr(C_km Q) >= delta_k sigma_k^2,
/// Q >= 0, then q~* = dominant_rank_one(Q*). Elements that no stream excites
/// are left out of the SDP and returned as zero.
WeightSolution solve_ideal_weights(const WeightProblem& prob, const SolverTolerances& tol = {});

}  // namespace holobeam
