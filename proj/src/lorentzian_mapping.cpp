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

#include "holobeam/lorentzian_mapping.hpp"

#include <stdexcept>

#include <spdlog/spdlog.h>

namespace holobeam {

namespace {

const Complex kHalfJ(0.0, 0.5);

// Snap onto the circle so membership holds to rounding even after the
// quadratic solve.
Complex snap(Complex z) {
    const Complex r = z - kHalfJ;
    if (std::abs(r) == 0.0) return lorentzian_point(kPi / 2);
    return lorentzian_point(std::arg(r));
}

}  // namespace

CVector unitize(const CVector& q) {
    CVector out(q.size());
    for (Eigen::Index n = 0; n < q.size(); ++n) out[n] = std::polar(1.0, std::arg(q[n]));
    return out;
}

Complex gmlch_point(Complex qhat, const MappingCenter& center, MappingStats* stats) {
    const Complex c = center.point();
    const Complex d = qhat - c;
    const double dd = std::norm(d);
    if (dd < 1e-24) {
        if (stats) ++stats->degenerate;
        return lorentzian_point(std::arg(qhat));
    }
    // |e + t d|^2 = 1/4 with e = c - j/2
    const Complex e = c - kHalfJ;
    const double b = (std::conj(e) * d).real();
    const double cc = std::norm(e) - 0.25;
    const double disc = b * b - dd * cc;
    if (disc < 0.0) {
        if (stats) ++stats->missed;
        spdlog::warn("mapping line through ({}, {}) misses the Lorentzian circle", center.x, center.y);
        const double t0 = -b / dd;
        return snap(c + t0 * d);
    }
    const double root = std::sqrt(disc);
    const double t1 = (-b + root) / dd;
    const double t2 = (-b - root) / dd;
    // q^ itself sits at t = 1
    const double t = std::abs(t1 - 1.0) <= std::abs(t2 - 1.0) ? t1 : t2;
    return snap(c + t * d);
}

DmaWeights gmlch_map(const CVector& qhat, const MappingCenter& center, MappingStats* stats) {
    DmaWeights out;
    out.q.resize(qhat.size());
    out.constrained = true;
    for (Eigen::Index n = 0; n < qhat.size(); ++n) {
        if (std::abs(std::abs(qhat[n]) - 1.0) > 1e-6)
            throw std::invalid_argument("mapping input must have unit modulus");
        out.q[n] = gmlch_point(qhat[n], center, stats);
    }
    return out;
}

Complex lcph_map(double phi) {
    const double p = wrap_phase(phi);
    if (p > kPi) return {0.0, 0.0};
    return std::sin(p) * std::polar(1.0, p);
}

Complex lceh_map(Complex qhat) {
    const Complex r = qhat - kHalfJ;
    if (std::abs(r) == 0.0) return lorentzian_point(kPi / 2);
    return kHalfJ + 0.5 * r / std::abs(r);
}

Complex lcush_map(double phi) { return lorentzian_point(phi); }

}  // namespace holobeam
