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

namespace holobeam {

struct ArlchOptions {
    double eps = 1e-4;        // relative cost change that ends the loop
    int max_iters = 50;
    double min_diameter = 1e-6;
};

struct DiameterResult {
    double diameter = 0.0;
    bool degenerate = false;  // Re(q^H q*) <= 0, clamped to the floor
};

/// argmin_D ||q* - D q^||^2 = Re(q^H q*) / (q^H q^), floored at `min_diameter`.
DiameterResult optimal_diameter(const CVector& qhat, const CVector& qstar, double min_diameter = 1e-6);

/// Per-element phase of the point on the circle (centre jD/2, diameter D)
/// nearest q*_n.  Elements sitting on the centre get pi/2.
RVector phases_for_diameter(const CVector& qstar, double diameter, int* degenerate = nullptr);

/// (j + e^{j phi_n}) / 2.
CVector unitary_lorentzian(const RVector& phases);

/// E = ||q* - D (j + e^{j Phi}) / 2||^2.
double arlch_cost(const CVector& qstar, const RVector& phases, double diameter);

struct ArlchTracePoint {
    int t = 0;
    double diameter = 0.0;
    double cost = 0.0;
};

struct ArlchResult {
    DmaWeights weights;  // on the unitary circle, D discarded
    RVector phases;
    double diameter = 0.0;  // optimal for the returned phases
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    int degenerate_elements = 0;
    bool diameter_clamped = false;
    std::vector<ArlchTracePoint> trace;
};

/// Alternates the diameter and phase steps starting from Phi = arg q*.
ArlchResult arlch_map(const CVector& qstar, const ArlchOptions& opt = {});

}  // namespace holobeam
