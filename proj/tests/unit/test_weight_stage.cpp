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

#include <catch_amalgamated.hpp>

#include "holobeam/weight_stage.hpp"
#include "oracles.hpp"

using namespace holobeam;
using Catch::Approx;

namespace {

ScenarioConfig qos(int k, double sinr_db = 30.0) {
    ScenarioConfig cfg;
    cfg.n_users = k;
    cfg.set_uniform_qos(sinr_db, -75.0);
    return cfg;
}

PrecoderSet random_precoders(std::mt19937_64& rng, int m, int nr) {
    PrecoderSet w;
    for (int i = 0; i < m; ++i) w.w.push_back(oracle::random_cvector(rng, nr));
    return w;
}

}  // namespace

TEST_CASE("structured weight problem equals the Kronecker construction", "[weight]") {
    std::mt19937_64 rng(1);
    for (int nr = 1; nr <= 4; ++nr) {
        for (int nc = 1; nc <= 4; ++nc) {
            const auto g = ArrayGeometry::planar(nr, nc, 0.005, 0.005);
            const auto h = WaveguideResponse::microstrip(g, 1.5, 600.0);
            const int k = std::min(nr, 2);
            std::vector<CVector> ch;
            for (int u = 0; u < k; ++u) ch.push_back(oracle::random_cvector(rng, nr * nc));
            const auto w = random_precoders(rng, k, nr);
            const auto s = build_weight_problem(ch, h, w, qos(k));
            const auto d = oracle::dense_weight_problem(ch, h, w);
            for (int m = 0; m < k; ++m) {
                CHECK((s.b_matrix(m) - d.b[m]).norm() <= 1e-12 * std::max(1.0, d.b[m].norm()));
                for (int u = 0; u < k; ++u)
                    CHECK((s.c_matrix(u, m) - d.c[u][m]).norm() <= 1e-12 * std::max(1.0, d.c[u][m].norm()));
            }
        }
    }
}

TEST_CASE("weight problem special cases", "[weight]") {
    const DmaLayout lay{3, 2};
    const auto h = WaveguideResponse::identity(lay);
    const std::vector<CVector> ch = {CVector::Ones(6)};
    SECTION("unit precoder selects its microstrip") {
        PrecoderSet w;
        w.w = {CVector::Unit(3, 1)};
        const auto p = build_weight_problem(ch, h, w, qos(1));
        for (int n = 0; n < 6; ++n) CHECK(p.b_diag[0][n] == (n / 2 == 1 ? 1.0 : 0.0));
    }
    SECTION("zero precoder annihilates everything") {
        PrecoderSet w;
        w.w = {CVector::Zero(3)};
        const auto p = build_weight_problem(ch, h, w, qos(1));
        CHECK(p.b_matrix(0).norm() == 0.0);
        CHECK(p.c_matrix(0, 0).norm() == 0.0);
        CHECK_FALSE(solve_ideal_weights(p).feasible);
    }
}

TEST_CASE("received amplitudes through the reduced form", "[weight]") {
    std::mt19937_64 rng(2);
    const auto g = ArrayGeometry::planar(3, 4, 0.005, 0.005);
    const auto h = WaveguideResponse::microstrip(g, 1.0, 500.0);
    std::vector<CVector> ch = {oracle::random_cvector(rng, 12), oracle::random_cvector(rng, 12)};
    const auto w = random_precoders(rng, 2, 3);
    const DmaWeights q{oracle::random_cvector(rng, 12), false};
    const auto p = build_weight_problem(ch, h, w, qos(2));
    const auto x = transmit_signal(h, q, w);
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) CHECK(std::abs(p.c[k][m].dot(q.q) - ch[k].dot(x[m])) < 1e-10);
}

TEST_CASE("single-user ideal weights", "[weight]") {
    ScenarioConfig cfg = qos(1);
    cfg.n_r = 2;
    cfg.n_c = 4;
    cfg.fixed_users = {{0.5, 25.0}};
    const Scenario sc = build_scenario(cfg);
    const auto h = make_waveguide(sc.geometry, cfg);
    std::mt19937_64 rng(3);
    const auto w = random_precoders(rng, 1, 2);
    const auto p = build_weight_problem(sc.channels, h, w, cfg);
    const auto s = solve_ideal_weights(p, cfg.tolerances);
    REQUIRE(s.feasible);
    CHECK(s.eigen_ratio <= 1e-6);

    const CVector dir = oracle::generalized_max_direction(p.c[0][0], p.b_diag[0]);
    CHECK(std::abs(dir.dot(s.q_ideal)) / (dir.norm() * s.q_ideal.norm()) == Approx(1.0).epsilon(1e-8));

    // the rank-one factor reproduces the dma-model power and meets the target
    const DmaWeights q{s.q_ideal, false};
    CHECK(transmit_power(h, q, w) == Approx(s.objective).epsilon(1e-8));
    CHECK(user_sinr(sc.channels[0], h, q, w, cfg.noise_mw[0], 0) == Approx(cfg.sinr_targets[0]).epsilon(1e-6));

    SECTION("global phase does not matter") {
        const DmaWeights r{s.q_ideal * std::polar(1.0, 2.1), false};
        CHECK(transmit_power(h, r, w) == Approx(transmit_power(h, q, w)).epsilon(1e-12));
        CHECK(user_sinr(sc.channels[0], h, r, w, cfg.noise_mw[0], 0) ==
              Approx(user_sinr(sc.channels[0], h, q, w, cfg.noise_mw[0], 0)).epsilon(1e-12));
    }
    SECTION("scaling the target scales Q") {
        for (double t : {2.0, 10.0}) {
            ScenarioConfig c2 = cfg;
            c2.sinr_targets[0] *= t;
            const auto s2 = solve_ideal_weights(build_weight_problem(sc.channels, h, w, c2), cfg.tolerances);
            CHECK(s2.objective / s.objective == Approx(t).epsilon(1e-6));
            CHECK((s2.q_ideal / std::sqrt(t) - s.q_ideal).norm() <= 1e-5 * s.q_ideal.norm());
        }
    }
}

TEST_CASE("multi-user ideal weights", "[weight]") {
    ScenarioConfig cfg = qos(2, 10.0);
    cfg.n_r = 4;
    cfg.n_c = 4;
    cfg.rng_seed = 17;
    const Scenario sc = build_scenario(cfg);
    const auto h = make_waveguide(sc.geometry, cfg);
    std::mt19937_64 rng(5);
    const auto w = random_precoders(rng, 2, 4);
    const auto s = solve_ideal_weights(build_weight_problem(sc.channels, h, w, cfg), cfg.tolerances);
    REQUIRE(s.feasible);
    const DmaWeights q{s.q_ideal, false};
    CHECK(transmit_power(h, q, w) <= s.objective * (1 + 1e-8));
    CHECK(s.eigen_ratio >= 0.0);
}

TEST_CASE("unexcited elements stay zero", "[weight]") {
    const DmaLayout lay{2, 3};
    const auto h = WaveguideResponse::identity(lay);
    PrecoderSet w;
    w.w = {CVector::Unit(2, 0)};
    std::mt19937_64 rng(6);
    const auto s = solve_ideal_weights(build_weight_problem({oracle::random_cvector(rng, 6)}, h, w, qos(1)));
    REQUIRE(s.feasible);
    for (int n = 3; n < 6; ++n) CHECK(s.q_ideal[n] == Complex(0.0));
}
