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

#include "holobeam/dma_model.hpp"

namespace holobeam {

/// Point (x_c, y_c) through which ideal weights are projected onto the
/// Lorentzian circle |q - j/2| = 1/2.
struct MappingCenter {
    double x = 0.0;
    double y = 0.0;

    static MappingCenter lcph() { return {0.0, 0.0}; }
    static MappingCenter lceh() { return {0.0, 0.5}; }
    static MappingCenter lcush() { return {0.0, 1.0}; }

    Complex point() const { return {x, y}; }
};

struct MappingStats {
    int degenerate = 0;  // q^_n coincided with the center
    int missed = 0;      // line did not meet the circle
};

/// e^{j arg q_n}; zero entries map to 1.
CVector unitize(const CVector& q);

/// Intersection of the circle with the line through q^ and the center that is
/// closest to q^.  When the line misses the circle the circle point nearest
/// the line is returned instead.
Complex gmlch_point(Complex qhat, const MappingCenter& center, MappingStats* stats = nullptr);

/// Element-wise gmlch_point. Every |qhat_n| must be 1 (within 1e-6).
DmaWeights gmlch_map(const CVector& qhat, const MappingCenter& center, MappingStats* stats = nullptr);

/// sin(phi) e^{j phi} on the upper half-plane, 0 below.
Complex lcph_map(double phi);

/// Radial projection onto the circle.
Complex lceh_map(Complex qhat);

/// (j + e^{j phi}) / 2.
Complex lcush_map(double phi);

}  // namespace holobeam
