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

#include "holobeam/ao_driver.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "holobeam/precoder_stage.hpp"
#include "holobeam/weight_stage.hpp"

namespace holobeam {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

DmaWeights initial_weights(int n, InitMode mode, std::uint64_t seed) {
    DmaWeights q;
    q.q.resize(n);
    q.constrained = true;
    if (mode == InitMode::all_j) {
        q.q.setConstant(kJ);
        return q;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int i = 0; i < n; ++i) q.q[i] = lorentzian_point(phase(rng));
    return q;
}

DmaWeights map_weights(const CVector& q_ideal, const Method& method, const ArlchOptions& aopt,
                       std::vector<ArlchTracePoint>* trace) {
    switch (method.kind) {
        case MethodKind::unrestricted:
            return {q_ideal, false};
        case MethodKind::gmlch:
            return gmlch_map(unitize(q_ideal), method.center);
        case MethodKind::arlch: {
            ArlchResult r = arlch_map(q_ideal, aopt);
            if (trace) *trace = r.trace;
            return r.weights;
        }
        case MethodKind::fd:
            break;
    }
    throw std::logic_error("FD has no DMA weights");
}

RunResult run_fd(const Scenario& sc, const Method& method) {
    RunResult res;
    res.method = method;
    res.attempts = 1;
    const PrecoderSolution sol = solve_fd(sc.channels, sc.config);
    IterationRecord rec;
    rec.p_tx = sol.p_tx;
    rec.feasible = sol.feasible;
    rec.precoder_eigen_ratio = sol.max_eigen_ratio;
    res.trace.push_back(rec);
    if (!sol.feasible) return res;
    res.status = RunStatus::converged;
    res.precoders = sol.precoders;
    res.p_tx = fd_transmit_power(res.precoders);
    res.best_iteration = 0;
    res.sinr = achieved_sinr(sc, res);
    return res;
}

}  // namespace

Method Method::gmlch(const MappingCenter& c) {
    std::ostringstream os;
    os << "GMLCH(" << c.x << "," << c.y << ")";
    return {MethodKind::gmlch, c, os.str()};
}

Method parse_method(const std::string& name, const MappingCenter* center) {
    const std::string n = lower(name);
    if (n == "fd") return Method::fd();
    if (n == "unrestricted") return Method::unrestricted();
    if (n == "lcph") return Method::lcph();
    if (n == "lceh") return Method::lceh();
    if (n == "lcush") return Method::lcush();
    if (n == "arlch") return Method::arlch();
    if (n == "gmlch") {
        if (!center) throw std::invalid_argument("gmlch needs a mapping center (--map-center x,y)");
        return Method::gmlch(*center);
    }
    throw std::invalid_argument("unknown method '" + name + "'");
}

MappingCenter parse_center(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("mapping center must be given as x,y");
    try {
        std::size_t used_x = 0, used_y = 0;
        const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
        MappingCenter c{std::stod(xs, &used_x), std::stod(ys, &used_y)};
        if (used_x != xs.size() || used_y != ys.size() || !std::isfinite(c.x) || !std::isfinite(c.y))
            throw std::invalid_argument("bad number");
        return c;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse mapping center '" + text + "'");
    }
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "converged";
        case RunStatus::max_iters: return "max_iters";
        case RunStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

RunResult optimize(const Scenario& sc, const Method& method, const OptimizerOptions& opt, std::uint64_t seed) {
    sc.config.validate();
    if (!method.uses_dma()) return run_fd(sc, method);

    const ScenarioConfig& cfg = sc.config;
    const SolverTolerances& tol = cfg.tolerances;
    RunResult res;
    res.method = method;
    res.waveguide = make_waveguide(sc.geometry, cfg);
    const WaveguideResponse& h = res.waveguide;
    const int n = sc.geometry.size();

    // Initialisation with reseeding until the first precoder solve succeeds.
    DmaWeights q;
    PrecoderSolution w;
    const int tries = opt.init == InitMode::all_j ? 1 : 1 + std::max(0, opt.max_init_retries);
    for (int a = 0; a < tries; ++a) {
        ++res.attempts;
        q = initial_weights(n, opt.init, derive_seed(seed, static_cast<std::uint64_t>(a)));
        w = solve_precoders(build_precoder_problem(sc.channels, h, q, cfg), tol);
        if (w.feasible) break;
        spdlog::debug("{}: initialisation {} infeasible, reseeding", method.name(), a);
    }
    if (!w.feasible) {
        spdlog::info("{}: infeasible after {} initialisation(s)", method.name(), res.attempts);
        res.trace.push_back({0, w.p_tx, false, 0.0, w.max_eigen_ratio, {}});
        return res;
    }

    double best = w.p_tx;
    res.best_iteration = 0;
    res.weights = q;
    res.precoders = w.precoders;
    res.trace.push_back({0, w.p_tx, true, 0.0, w.max_eigen_ratio, {}});
    res.status = RunStatus::max_iters;

    double prev = w.p_tx;
    for (int t = 1; t <= opt.max_outer_iters; ++t) {
        const WeightSolution ideal = solve_ideal_weights(build_weight_problem(sc.channels, h, w.precoders, cfg), tol);
        if (!ideal.feasible) {
            spdlog::debug("{}: weight stage infeasible at iteration {}", method.name(), t);
            break;
        }
        IterationRecord rec;
        rec.t = t;
        rec.weight_eigen_ratio = ideal.eigen_ratio;
        q = map_weights(ideal.q_ideal, method, opt.arlch, &rec.arlch);
        w = solve_precoders(build_precoder_problem(sc.channels, h, q, cfg), tol);
        rec.p_tx = w.p_tx;
        rec.feasible = w.feasible;
        rec.precoder_eigen_ratio = w.max_eigen_ratio;
        res.trace.push_back(std::move(rec));
        if (!w.feasible) {
            spdlog::debug("{}: precoder stage infeasible at iteration {}", method.name(), t);
            break;
        }
        if (w.p_tx < best) {
            best = w.p_tx;
            res.best_iteration = t;
            res.weights = q;
            res.precoders = w.precoders;
        }
        if (std::abs(w.p_tx - prev) / w.p_tx < opt.rel_tol) {
            res.status = RunStatus::converged;
            break;
        }
        prev = w.p_tx;
    }
    res.p_tx = transmit_power(h, res.weights, res.precoders);
    res.sinr = achieved_sinr(sc, res);
    return res;
}

std::vector<ConvergencePoint> convergence_trace(const RunResult& result) {
    std::vector<ConvergencePoint> out;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const IterationRecord& r = result.trace[i];
        ConvergencePoint p;
        p.t = r.t;
        p.p_tx = r.p_tx;
        if (i > 0 && r.p_tx > 0.0) p.relative_change = std::abs(r.p_tx - result.trace[i - 1].p_tx) / r.p_tx;
        if (r.feasible) best = std::min(best, r.p_tx);
        p.best_so_far = best;
        out.push_back(p);
    }
    return out;
}

std::vector<double> achieved_sinr(const Scenario& sc, const RunResult& result) {
    std::vector<double> s;
    if (result.precoders.w.empty()) return s;
    const auto& noise = sc.config.noise_mw;
    for (int k = 0; k < static_cast<int>(sc.channels.size()); ++k) {
        const CVector& g = sc.channels[static_cast<std::size_t>(k)];
        const double nk = noise[static_cast<std::size_t>(k)];
        s.push_back(result.method.uses_dma() ? user_sinr(g, result.waveguide, result.weights, result.precoders, nk, k)
                                              : fd_user_sinr(g, result.precoders, nk, k));
    }
    return s;
}

double recomputed_power(const RunResult& result) {
    if (result.precoders.w.empty()) return 0.0;
    return result.method.uses_dma() ? transmit_power(result.waveguide, result.weights, result.precoders)
                                    : fd_transmit_power(result.precoders);
}

}  // namespace holobeam
