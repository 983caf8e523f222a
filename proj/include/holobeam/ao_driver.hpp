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

#include <cstdint>
#include <string>
#include <vector>

#include "holobeam/arlch.hpp"
#include "holobeam/dma_model.hpp"
#include "holobeam/lorentzian_mapping.hpp"
#include "holobeam/scenario.hpp"

namespace holobeam {

enum class MethodKind { fd, unrestricted, gmlch, arlch };

struct Method {
    MethodKind kind = MethodKind::fd;
    MappingCenter center;  // used by gmlch only
    std::string label = "FD";

    static Method fd() { return {MethodKind::fd, {}, "FD"}; }
    static Method unrestricted() { return {MethodKind::unrestricted, {}, "Unrestricted"}; }
    static Method lcph() { return {MethodKind::gmlch, MappingCenter::lcph(), "LCPH"}; }
    static Method lceh() { return {MethodKind::gmlch, MappingCenter::lceh(), "LCEH"}; }
    static Method lcush() { return {MethodKind::gmlch, MappingCenter::lcush(), "LCUSH"}; }
    static Method arlch() { return {MethodKind::arlch, {}, "ARLCH"}; }
    static Method gmlch(const MappingCenter& c);

    const std::string& name() const { return label; }
    bool uses_dma() const { return kind != MethodKind::fd; }
    bool constrained() const { return kind == MethodKind::gmlch || kind == MethodKind::arlch; }
};

/// fd, unrestricted, lcph, lceh, lcush, arlch (any case), or gmlch with an
/// explicit center. Throws std::invalid_argument for unknown names.
Method parse_method(const std::string& name, const MappingCenter* center = nullptr);

/// "x,y" -> center.
MappingCenter parse_center(const std::string& text);

enum class RunStatus { converged, max_iters, infeasible };
std::string to_string(RunStatus s);

enum class InitMode { random_phase, all_j };

struct OptimizerOptions {
    int max_outer_iters = 15;
    double rel_tol = 1e-4;
    InitMode init = InitMode::random_phase;
    int max_init_retries = 5;
    ArlchOptions arlch;
};

struct IterationRecord {
    int t = 0;  // 0 is the precoder solve on the initial weights
    double p_tx = 0.0;
    bool feasible = false;
    double weight_eigen_ratio = 0.0;
    double precoder_eigen_ratio = 0.0;
    std::vector<ArlchTracePoint> arlch;  // filled for ARLCH only
};

struct RunResult {
    Method method;
    RunStatus status = RunStatus::infeasible;
    double p_tx = 0.0;  // mW, of the returned triple
    WaveguideResponse waveguide;
    DmaWeights weights;  // empty for FD
    PrecoderSet precoders;
    std::vector<double> sinr;  // achieved, linear
    std::vector<IterationRecord> trace;
    int attempts = 0;  // initialisations tried
    int best_iteration = -1;
};

/// Alternating optimisation of precoders and DMA weights. Returns the
/// lowest-power feasible iterate seen; FD solves its SDP once.
RunResult optimize(const Scenario& scenario, const Method& method, const OptimizerOptions& opt, std::uint64_t seed);

struct ConvergencePoint {
    int t = 0;
    double p_tx = 0.0;
    double relative_change = 0.0;  // |P_t - P_{t-1}| / P_t, 0 for the first entry
    double best_so_far = 0.0;
};

std::vector<ConvergencePoint> convergence_trace(const RunResult& result);

/// Achieved SINRs recomputed from the returned weights.
std::vector<double> achieved_sinr(const Scenario& scenario, const RunResult& result);

/// Transmit power recomputed from the returned weights.
double recomputed_power(const RunResult& result);

}  // namespace holobeam
