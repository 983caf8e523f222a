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

#include <json.hpp>

#include "holobeam/scenario.hpp"
#include "holobeam/types.hpp"

namespace holobeam {

/// Microstrip/element bookkeeping of the block-diagonal weight matrix Q.
///
/// Q is never stored densely: column i holds the weights of microstrip i, so
/// (Q w)_n = q_n * w_{strip(n)}.
struct DmaLayout {
    int n_microstrips = 0;
    int n_per_microstrip = 0;

    static DmaLayout of(const ArrayGeometry& g) { return {g.n_microstrips, g.n_per_microstrip}; }
    int size() const { return n_microstrips * n_per_microstrip; }
    int strip(int n) const { return n / n_per_microstrip; }
};

/// Diagonal waveguide propagation H_n = exp(-d_n (alpha + j beta)), where d_n
/// is the distance of the element from its microstrip feed.
struct WaveguideResponse {
    DmaLayout layout;
    CVector diag;
    double alpha = 0.0;
    double beta = 0.0;
    WaveguideMode mode = WaveguideMode::identity;

    static WaveguideResponse identity(const DmaLayout& layout);
    static WaveguideResponse microstrip(const ArrayGeometry& geom, double alpha, double beta);
};

WaveguideResponse make_waveguide(const ArrayGeometry& geom, const ScenarioConfig& cfg);

struct DmaWeights {
    CVector q;
    bool constrained = false;  // true when every entry lies on the Lorentzian circle

    /// max_n | |q_n - j/2| - 1/2 |
    double lorentzian_violation() const;
};

struct PrecoderSet {
    std::vector<CVector> w;          // one N_r (or N for FD) vector per stream
    std::vector<CMatrix> gram;       // optional W_m cache, empty when unset

    int n_streams() const { return static_cast<int>(w.size()); }
};

/// (j + e^{j phi}) / 2
Complex lorentzian_point(double phi);

/// Distance of z from the unitary Lorentzian circle.
inline double lorentzian_distance(Complex z) { return std::abs(std::abs(z - 0.5 * kJ) - 0.5); }

/// Per-element effective gains H_n q_n.
CVector effective_weights(const WaveguideResponse& h, const DmaWeights& q);

/// x_m = H Q w_m for every stream.
std::vector<CVector> transmit_signal(const WaveguideResponse& h, const DmaWeights& q,
                                     const PrecoderSet& w);

/// sum_m ||H Q w_m||^2 in mW.
double transmit_power(const WaveguideResponse& h, const DmaWeights& q, const PrecoderSet& w);

/// |gamma_k^H H Q w_k|^2 / (sum_{m != k} |gamma_k^H H Q w_m|^2 + sigma_k^2).
double user_sinr(const CVector& gamma_k, const WaveguideResponse& h, const DmaWeights& q,
                 const PrecoderSet& w, double noise_mw, int k);

/// Fully digital variants: x_m = w_m directly.
double fd_transmit_power(const PrecoderSet& w);
double fd_user_sinr(const CVector& gamma_k, const PrecoderSet& w, double noise_mw, int k);

/// JSON arrays of [re, im] pairs, used for experiment dumps.
nlohmann::json to_json(const CVector& v);
CVector cvector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DmaWeights& q);
nlohmann::json to_json(const PrecoderSet& w);
DmaWeights dma_weights_from_json(const nlohmann::json& j);
PrecoderSet precoder_set_from_json(const nlohmann::json& j);

}  // namespace holobeam
