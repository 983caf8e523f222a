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

#include "holobeam/dma_model.hpp"

#include <stdexcept>

namespace holobeam {

namespace {

void check_dims(const WaveguideResponse& h, const DmaWeights& q, const PrecoderSet& w) {
    const int n = h.layout.size();
    if (h.diag.size() != n || q.q.size() != n)
        throw std::invalid_argument("DMA weight / waveguide length does not match the layout");
    for (const auto& wm : w.w) {
        if (wm.size() != h.layout.n_microstrips)
            throw std::invalid_argument("precoder length does not match the RF chain count");
    }
}

// gamma_k^H H Q w_m for all m
std::vector<Complex> received_amplitudes(const CVector& gamma_k, const CVector& eff,
                                         const DmaLayout& layout, const PrecoderSet& w) {
    const int n = layout.size();
    if (gamma_k.size() != n) throw std::invalid_argument("channel length does not match the layout");
    // Per-microstrip inner products r_i = sum_{n in strip i} conj(gamma_n) H_n q_n.
    CVector r = CVector::Zero(layout.n_microstrips);
    for (int idx = 0; idx < n; ++idx) r[layout.strip(idx)] += std::conj(gamma_k[idx]) * eff[idx];
    std::vector<Complex> out;
    out.reserve(w.w.size());
    for (const auto& wm : w.w) out.push_back((r.transpose() * wm)(0));
    return out;
}

double sinr_from_amplitudes(const std::vector<Complex>& y, double noise, int k) {
    if (k < 0 || k >= static_cast<int>(y.size())) throw std::out_of_range("user index exceeds stream count");
    double interference = 0.0;
    for (int m = 0; m < static_cast<int>(y.size()); ++m) {
        if (m != k) interference += std::norm(y[m]);
    }
    return std::norm(y[k]) / (interference + noise);
}

}  // namespace

WaveguideResponse WaveguideResponse::identity(const DmaLayout& layout) {
    WaveguideResponse h;
    h.layout = layout;
    h.diag = CVector::Ones(layout.size());
    h.mode = WaveguideMode::identity;
    return h;
}

WaveguideResponse WaveguideResponse::microstrip(const ArrayGeometry& geom, double alpha, double beta) {
    WaveguideResponse h;
    h.layout = DmaLayout::of(geom);
    h.alpha = alpha;
    h.beta = beta;
    h.mode = WaveguideMode::microstrip;
    h.diag.resize(geom.size());
    const Complex gamma(alpha, beta);
    for (int n = 0; n < geom.size(); ++n) {
        // feed sits at the first element, so d = 0 there
        const double d = geom.index_on_microstrip(n) * geom.spacing_x;
        h.diag[n] = std::exp(-d * gamma);
    }
    return h;
}

WaveguideResponse make_waveguide(const ArrayGeometry& geom, const ScenarioConfig& cfg) {
    if (cfg.waveguide_mode == WaveguideMode::identity) return WaveguideResponse::identity(DmaLayout::of(geom));
    return WaveguideResponse::microstrip(geom, cfg.waveguide_alpha, cfg.waveguide_beta);
}

double DmaWeights::lorentzian_violation() const {
    double worst = 0.0;
    for (const auto& z : q) worst = std::max(worst, lorentzian_distance(z));
    return worst;
}

Complex lorentzian_point(double phi) { return 0.5 * (kJ + std::polar(1.0, phi)); }

CVector effective_weights(const WaveguideResponse& h, const DmaWeights& q) {
    if (h.diag.size() != q.q.size()) throw std::invalid_argument("DMA weight length does not match the waveguide");
    return h.diag.cwiseProduct(q.q);
}

std::vector<CVector> transmit_signal(const WaveguideResponse& h, const DmaWeights& q,
                                     const PrecoderSet& w) {
    check_dims(h, q, w);
    const CVector eff = effective_weights(h, q);
    std::vector<CVector> x;
    x.reserve(w.w.size());
    for (const auto& wm : w.w) {
        CVector xm(eff.size());
        for (int n = 0; n < eff.size(); ++n) xm[n] = eff[n] * wm[h.layout.strip(n)];
        x.push_back(std::move(xm));
    }
    return x;
}

double transmit_power(const WaveguideResponse& h, const DmaWeights& q, const PrecoderSet& w) {
    check_dims(h, q, w);
    const CVector eff = effective_weights(h, q);
    // ||H Q w||^2 = sum_i |w_i|^2 sum_{n in strip i} |H_n q_n|^2
    RVector strip_gain = RVector::Zero(h.layout.n_microstrips);
    for (int n = 0; n < eff.size(); ++n) strip_gain[h.layout.strip(n)] += std::norm(eff[n]);
    double p = 0.0;
    for (const auto& wm : w.w) p += strip_gain.dot(wm.cwiseAbs2());
    return p;
}

double user_sinr(const CVector& gamma_k, const WaveguideResponse& h, const DmaWeights& q,
                 const PrecoderSet& w, double noise_mw, int k) {
    check_dims(h, q, w);
    const CVector eff = effective_weights(h, q);
    return sinr_from_amplitudes(received_amplitudes(gamma_k, eff, h.layout, w), noise_mw, k);
}

double fd_transmit_power(const PrecoderSet& w) {
    double p = 0.0;
    for (const auto& wm : w.w) p += wm.squaredNorm();
    return p;
}

double fd_user_sinr(const CVector& gamma_k, const PrecoderSet& w, double noise_mw, int k) {
    std::vector<Complex> y;
    for (const auto& wm : w.w) {
        if (wm.size() != gamma_k.size()) throw std::invalid_argument("FD precoder length does not match the channel");
        y.push_back(gamma_k.dot(wm));  // dot() conjugates the left operand
    }
    return sinr_from_amplitudes(y, noise_mw, k);
}

nlohmann::json to_json(const CVector& v) {
    auto arr = nlohmann::json::array();
    for (const auto& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

CVector cvector_from_json(const nlohmann::json& j) {
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = {j[i][0].get<double>(), j[i][1].get<double>()};
    return v;
}

nlohmann::json to_json(const DmaWeights& q) {
    return {{"constrained", q.constrained}, {"q", to_json(q.q)}};
}

nlohmann::json to_json(const PrecoderSet& w) {
    auto arr = nlohmann::json::array();
    for (const auto& wm : w.w) arr.push_back(to_json(wm));
    return arr;
}

DmaWeights dma_weights_from_json(const nlohmann::json& j) {
    return {cvector_from_json(j.at("q")), j.value("constrained", false)};
}

PrecoderSet precoder_set_from_json(const nlohmann::json& j) {
    PrecoderSet w;
    for (const auto& v : j) w.w.push_back(cvector_from_json(v));
    return w;
}

}  // namespace holobeam
