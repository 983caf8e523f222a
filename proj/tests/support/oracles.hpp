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

// Brute-force reference implementations used only by the test suites.

#include <cstdint>
#include <random>
#include <vector>

#include "holobeam/dma_model.hpp"
#include "holobeam/lorentzian_mapping.hpp"
#include "holobeam/weight_stage.hpp"

namespace holobeam::oracle {

CVector random_cvector(std::mt19937_64& rng, int n, double scale = 1.0);
CMatrix random_psd(std::mt19937_64& rng, int n, int rank);

/// N x N_r block-diagonal Q with Q(n, i(n)) = q_n.
CMatrix dense_q(const DmaWeights& q, const DmaLayout& layout);
CMatrix dense_h(const WaveguideResponse& h);
std::vector<CVector> dense_transmit(const WaveguideResponse& h, const DmaWeights& q, const PrecoderSet& w);

/// Weight-stage matrices through the L = N_r^2 N_c dimensional Kronecker form
/// H Q w_m = (w_m^T kron H) vec(Q), followed by removal of the structurally
/// zero entries of vec(Q).
struct DenseWeightProblem {
    std::vector<CMatrix> b;                   // [stream]
    std::vector<std::vector<CMatrix>> c;      // [user][stream]
    std::vector<std::vector<CVector>> c_vec;  // [user][stream]
};
DenseWeightProblem dense_weight_problem(const std::vector<CVector>& channels, const WaveguideResponse& h,
                                        const PrecoderSet& w);

/// Literal one-dimensional search over phi: the Lorentzian-circle point whose
/// distance to the line through q^ and the center vanishes, nearest q^.
/// Crossings are bracketed on the grid and bisected; tangencies come from
/// refined local minima of the distance.
Complex grid_map(Complex qhat, const MappingCenter& center, int grid_points = 8192);

struct GridMin {
    double arg = 0.0;
    double value = 0.0;
};
/// E(D) = ||q* - D q^||^2 sampled on [lo, hi].
GridMin diameter_grid(const CVector& qhat, const CVector& qstar, double lo, double hi, int points);
/// |q*_n - D (j + e^{j phi}) / 2| over a phi grid with local refinement.
GridMin phase_grid(Complex qstar, double diameter, int points);

/// Direction maximising |c^H q|^2 / (q^H B q) from the generalized eigenproblem.
CVector generalized_max_direction(const CVector& c, const RVector& b_diag);

/// delta sigma^2 / ||gamma||^2.
inline double matched_filter_power(const CVector& gamma, double delta, double noise) {
    return delta * noise / gamma.squaredNorm();
}

}  // namespace holobeam::oracle
