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

#include <sstream>

#include "holobeam/scenario.hpp"

using namespace holobeam;
using Catch::Approx;

TEST_CASE("wavelength and wavenumber follow the carrier", "[scenario]") {
    ScenarioConfig cfg;
    CHECK(cfg.wavelength() == Approx(299792458.0 / 28e9).epsilon(1e-15));
    CHECK(cfg.wavenumber() == Approx(2 * kPi / cfg.wavelength()).epsilon(1e-15));
    CHECK(cfg.wavelength() == Approx(0.0107069).epsilon(1e-5));
}

TEST_CASE("Fraunhofer distance", "[scenario]") {
    const double lambda = 299792458.0 / 28e9;
    SECTION("16x16 half-wavelength array at 28 GHz") {
        const auto g = ArrayGeometry::planar(16, 16, lambda / 2, lambda / 2);
        const double l = std::sqrt(2.0) * 15 * lambda / 2;
        CHECK(fraunhofer_distance(g, lambda) == Approx(2 * l * l / lambda).epsilon(1e-12));
        CHECK(fraunhofer_distance(g, lambda) == Approx(2.41).margin(1e-2));
    }
    SECTION("two elements on one microstrip") {
        const auto g = ArrayGeometry::planar(1, 2, lambda / 2, lambda / 2);
        CHECK(fraunhofer_distance(g, lambda) == Approx(lambda / 2).epsilon(1e-12));
    }
    SECTION("single element") {
        CHECK(fraunhofer_distance(ArrayGeometry::planar(1, 1, lambda / 2, lambda / 2), lambda) == 0.0);
    }
}

TEST_CASE("element radiation pattern", "[scenario]") {
    CHECK(element_gain(0.0, 2.0) == Approx(6.0));
    CHECK(element_gain(kPi / 3, 2.0) == Approx(1.5));
    CHECK(element_gain(0.6 * kPi, 2.0) == 0.0);
    CHECK(element_gain(kPi / 2, 2.0) == Approx(0.0).margin(1e-30));
    CHECK_THROWS_AS(element_gain(-0.1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(element_gain(3.5, 2.0), std::invalid_argument);
}

TEST_CASE("planar geometry layout", "[scenario]") {
    const auto g = ArrayGeometry::planar(3, 4, 0.01, 0.02);
    REQUIRE(static_cast<int>(g.element_positions.size()) == g.size());
    REQUIRE(g.size() == 12);
    for (const auto& p : g.element_positions) CHECK(p.x() == 0.0);  // y-z plane, normal = +x
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& p : g.element_positions) centroid += p;
    CHECK(centroid.norm() / 12 == Approx(0.0).margin(1e-15));
    for (int i = 0; i < 3; ++i) {
        for (int l = 0; l + 1 < 4; ++l) {
            const int n = i * 4 + l;
            CHECK(g.microstrip_of(n) == i);
            CHECK(g.index_on_microstrip(n) == l);
            CHECK((g.element_positions[n + 1] - g.element_positions[n]).norm() == Approx(0.01));
        }
    }
    for (int i = 0; i + 1 < 3; ++i)
        CHECK((g.element_positions[(i + 1) * 4] - g.element_positions[i * 4]).norm() == Approx(0.02));
}

TEST_CASE("channel vector of a single element", "[scenario]") {
    const double lambda = 299792458.0 / 28e9, k0 = 2 * kPi / lambda;
    const auto g = ArrayGeometry::planar(1, 1, lambda / 2, lambda / 2);
    const double d = 0.37;
    const CVector h = channel_vector(g, UserLocation::polar(d, 0.0), lambda, k0, 2.0);
    const Complex gamma = std::conj(h[0]);  // stored conjugated
    CHECK(std::abs(gamma) == Approx(std::sqrt(6.0) * lambda / (4 * kPi * d)).epsilon(1e-12));
    const double expect = wrap_phase(-k0 * d);
    const double diff = std::remainder(wrap_phase(std::arg(gamma)) - expect, 2 * kPi);
    CHECK(std::abs(diff) < 1e-9);

    SECTION("magnitude decays with distance on boresight") {
        double prev = std::abs(h[0]);
        for (double r : {0.5, 1.0, 2.0, 4.0}) {
            const double a = std::abs(channel_vector(g, UserLocation::polar(r, 0.0), lambda, k0, 2.0)[0]);
            CHECK(a < prev);
            prev = a;
        }
    }
}

TEST_CASE("channel vector properties", "[scenario]") {
    ScenarioConfig cfg;
    cfg.n_r = 4;
    cfg.n_c = 4;
    const auto g = make_geometry(cfg);
    const double lambda = cfg.wavelength(), k0 = cfg.wavenumber();

    SECTION("user behind the array sees nothing") {
        const CVector h = channel_vector(g, UserLocation::polar(0.5, kPi), cfg);
        CHECK(h.norm() == 0.0);
    }
    SECTION("symmetric pair of elements") {
        const auto g2 = ArrayGeometry::planar(1, 2, lambda / 2, lambda / 2);
        const CVector h = channel_vector(g2, UserLocation::polar(0.3, 0.0), cfg);
        CHECK(std::abs(h[0] - h[1]) < 1e-15);
    }
    SECTION("negating the wavenumber conjugates every entry") {
        const auto u = UserLocation::polar(0.2, 0.4);
        const CVector a = channel_vector(g, u, lambda, k0, 2.0);
        const CVector b = channel_vector(g, u, lambda, -k0, 2.0);
        CHECK((a - b.conjugate()).norm() < 1e-15 * a.norm());
    }
    SECTION("coincident user is rejected") {
        UserLocation u;
        u.cartesian = g.element_positions[5];
        CHECK_THROWS_AS(channel_vector(g, u, cfg), std::invalid_argument);
    }
}

TEST_CASE("user sampling", "[scenario]") {
    ScenarioConfig cfg;
    const auto g = make_geometry(cfg);
    const double df = fraunhofer_distance(g, cfg.wavelength());

    const auto a = sample_users(cfg, g, 5, 99);
    const auto b = sample_users(cfg, g, 5, 99);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rho == b[i].rho);
        CHECK(a[i].theta == b[i].theta);
    }
    CHECK(sample_users(cfg, g, 5, 100)[0].rho != a[0].rho);

    for (const auto& u : sample_users(cfg, g, 1000, 7)) {
        CHECK(u.rho >= 0.1 * df);
        CHECK(u.rho <= df);
        CHECK(std::abs(u.theta) <= 85.0 * kPi / 180.0 + 1e-15);
        CHECK(u.cartesian.x() == Approx(u.rho * std::cos(u.theta)));
        CHECK(u.cartesian.y() == Approx(u.rho * std::sin(u.theta)));
        CHECK(u.cartesian.z() == 0.0);
    }

    ScenarioConfig one = cfg;
    one.n_r = one.n_c = 1;
    CHECK_THROWS_AS(sample_users(one, make_geometry(one), 1, 1), std::invalid_argument);
}

TEST_CASE("fixed user positions bypass sampling", "[scenario]") {
    ScenarioConfig cfg;
    cfg.set_uniform_qos(30, -75);
    cfg.fixed_users = {{0.5, 30.0}};
    const Scenario s = build_scenario(cfg);
    REQUIRE(s.users.size() == 1);
    CHECK(s.users[0].rho == Approx(0.5 * s.fraunhofer).epsilon(1e-15));
    CHECK(s.users[0].theta == Approx(kPi / 6).epsilon(1e-15));
    REQUIRE(s.channels.size() == 1);
    CHECK(s.channels[0].size() == 64);
}

TEST_CASE("scenario JSON", "[scenario]") {
    const auto j = nlohmann::json::parse(R"({
        "frequency_hz": 30e9, "n_r": 4, "n_c": 6, "dx_over_lambda": 0.25, "dy_over_lambda": 0.5,
        "gain_exponent": 3, "noise_dbm": -80, "sinr_db": [10, 20],
        "users": [{"rho_over_df": 0.3, "theta_deg": -20}, {"rho_over_df": 0.8, "theta_deg": 45}],
        "waveguide": {"alpha": 0.5, "beta": 900}
    })");
    const ScenarioConfig cfg = scenario_config_from_json(j);
    CHECK(cfg.n_users == 2);
    CHECK(cfg.n_c == 6);
    CHECK(cfg.sinr_targets[0] == Approx(10.0));
    CHECK(cfg.sinr_targets[1] == Approx(100.0));
    CHECK(cfg.noise_mw[0] == Approx(1e-8));
    CHECK(cfg.waveguide_mode == WaveguideMode::microstrip);
    CHECK(cfg.waveguide_beta == 900.0);

    const ScenarioConfig back = scenario_config_from_json(scenario_config_to_json(cfg));
    CHECK(back.n_users == 2);
    CHECK(back.fixed_users[1].theta_deg == 45.0);
    CHECK(back.sinr_targets[1] == Approx(100.0));

    const auto sampled = scenario_config_from_json(nlohmann::json::parse(R"({"users": {"count": 3, "seed": 11}, "sinr_db": 25})"));
    CHECK(sampled.n_users == 3);
    CHECK(sampled.rng_seed == 11u);
    CHECK(sampled.sinr_targets.size() == 3);

    CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"sinr_db": [1, 2]})")), std::invalid_argument);
    CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"waveguide": "lossy"})")), std::invalid_argument);
}

TEST_CASE("configuration validation", "[scenario]") {
    ScenarioConfig cfg;
    cfg.n_r = 2;
    cfg.n_users = 3;
    cfg.set_uniform_qos(30, -75);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_users = 2;
    cfg.set_uniform_qos(30, -75);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.n_streams() == 2);
    cfg.sinr_targets[0] = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("seed derivation is deterministic", "[scenario]") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
