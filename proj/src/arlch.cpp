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

#include "holobeam/arlch.hpp"

#include <stdexcept>

#include <spdlog/spdlog.h>

namespace holobeam {

DiameterResult optimal_diameter(const CVector& qhat, const CVector& qstar, double min_diameter) {
    if (qhat.size() != qstar.size()) throw std::invalid_argument("diameter step: length mismatch");
    const double den = qhat.squaredNorm();
    if (!(den > 0.0)) throw std::invalid_argument("diameter step needs a nonzero unitary vector");
    const double num = qhat.dot(qstar).real();
    DiameterResult r;
    r.diameter = num / den;
    if (r.diameter < min_diameter) {
        r.degenerate = num <= 0.0;
        r.diameter = min_diameter;
    }
    return r;
}

RVector phases_for_diameter(const CVector& qstar, double diameter, int* degenerate) {
    if (!(diameter > 0.0)) throw std::invalid_argument("phase step needs a positive diameter");
    const Complex centre(0.0, diameter / 2);
    RVector phi(qstar.size());
    int bad = 0;
    for (Eigen::Index n = 0; n < qstar.size(); ++n) {
        const Complex r = qstar[n] - centre;
        if (std::abs(r) <= 1e-15 * diameter) {
            phi[n] = kPi / 2;
            ++bad;
        } else {
            phi[n] = wrap_phase(std::arg(r));
        }
    }
    if (bad > 0) spdlog::debug("ARLCH phase step: {} element(s) at the circle centre", bad);
    if (degenerate) *degenerate += bad;
    return phi;
}

CVector unitary_lorentzian(const RVector& phases) {
    CVector q(phases.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) q[n] = lorentzian_point(phases[n]);
    return q;
}

double arlch_cost(const CVector& qstar, const RVector& phases, double diameter) {
    return (qstar - diameter * unitary_lorentzian(phases)).squaredNorm();
}

ArlchResult arlch_map(const CVector& qstar, const ArlchOptions& opt) {
    if (qstar.size() == 0 || !(qstar.squaredNorm() > 0.0))
        throw std::invalid_argument("ARLCH needs a nonzero ideal weight vector");

    ArlchResult res;
    RVector phi(qstar.size());
    for (Eigen::Index n = 0; n < qstar.size(); ++n) phi[n] = wrap_phase(std::arg(qstar[n]));

    double prev = 0.0;
    for (int t = 1; t <= opt.max_iters; ++t) {
        const DiameterResult d = optimal_diameter(unitary_lorentzian(phi), qstar, opt.min_diameter);
        if (d.degenerate) {
            res.diameter_clamped = true;
            spdlog::debug("ARLCH diameter clamped at iteration {}", t);
        }
        phi = phases_for_diameter(qstar, d.diameter, &res.degenerate_elements);
        const double e = arlch_cost(qstar, phi, d.diameter);
        res.trace.push_back({t, d.diameter, e});
        res.iterations = t;
        if (e == 0.0 || (t >= 2 && std::abs(e - prev) / e < opt.eps)) {
            res.converged = true;
            break;
        }
        prev = e;
    }

    // Final diameter refit so D is optimal for the phases actually returned.
    const CVector qhat = unitary_lorentzian(phi);
    const DiameterResult d = optimal_diameter(qhat, qstar, opt.min_diameter);
    res.diameter = d.diameter;
    res.cost = arlch_cost(qstar, phi, d.diameter);
    res.phases = phi;
    res.weights.q = qhat;
    res.weights.constrained = true;
    return res;
}

}  // namespace holobeam
