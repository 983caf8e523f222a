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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "holobeam/types.hpp"

namespace holobeam {

/// Planar DMA / UPA layout.
///
/// The array lies in the y-z plane centred at the origin with boresight +x.
/// Microstrips run along y (element pitch `spacing_x`) and are stacked along z
/// (pitch `spacing_y`). Element n = i * n_per_microstrip + l (zero-based i, l).
struct ArrayGeometry {
    int n_microstrips = 0;       // N_r, one RF chain each
    int n_per_microstrip = 0;    // N_c, also the horizontal element count N_e
    double spacing_x = 0.0;      // m, along a microstrip
    double spacing_y = 0.0;      // m, between microstrips
    std::vector<Eigen::Vector3d> element_positions;

    static ArrayGeometry planar(int n_r, int n_c, double dx, double dy);

    int size() const { return n_microstrips * n_per_microstrip; }
    int microstrip_of(int n) const { return n / n_per_microstrip; }
    int index_on_microstrip(int n) const { return n % n_per_microstrip; }
    static Eigen::Vector3d boresight() { return Eigen::Vector3d::UnitX(); }
};

struct UserLocation {
    double rho = 0.0;    // m
    double theta = 0.0;  // rad, azimuth in the x-y plane
    Eigen::Vector3d cartesian = Eigen::Vector3d::Zero();

    static UserLocation polar(double rho, double theta);
};

enum class WaveguideMode { identity, microstrip };

struct SolverTolerances {
    double sdp_tol = 1e-9;    // relative residual / gap target of the stage SDPs
    int sdp_max_iters = 120;
    double psd_tol = 1e-8;
    double feas_tol = 1e-7;
};

/// A requested user position expressed relative to the Fraunhofer distance.
struct FixedUser {
    double rho_over_df = 0.5;
    double theta_deg = 0.0;
};

struct ScenarioConfig {
    double frequency_hz = 28e9;
    int n_r = 8;
    int n_c = 8;
    double dx_over_lambda = 0.5;
    double dy_over_lambda = 0.5;
    double gain_exponent = 2.0;

    int n_users = 1;
    std::vector<double> noise_mw;      // sigma_k^2 per user
    std::vector<double> sinr_targets;  // delta_k, linear, per user

    WaveguideMode waveguide_mode = WaveguideMode::identity;
    double waveguide_alpha = 0.0;  // 1/m
    double waveguide_beta = 0.0;   // rad/m

    // Either explicit positions or `n_users` samples drawn from `rng_seed`.
    std::vector<FixedUser> fixed_users;
    std::uint64_t rng_seed = 1;

    SolverTolerances tolerances;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double wavenumber() const { return 2.0 * kPi / wavelength(); }
    int n_streams() const { return std::min(n_users, n_r); }

    /// Sets a uniform SINR target (dB) and noise power (dBm) for every user.
    void set_uniform_qos(double sinr_db, double noise_dbm);

    /// Throws std::invalid_argument when the configuration is unusable.
    void validate() const;
};

ScenarioConfig scenario_config_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);
nlohmann::json scenario_config_to_json(const ScenarioConfig& cfg);

ArrayGeometry make_geometry(const ScenarioConfig& cfg);

/// Near/far-field boundary 2 L^2 / lambda with L the effective aperture length.
/// A 1x1 array has zero length and returns 0.
double fraunhofer_distance(const ArrayGeometry& geom, double wavelength);

/// Element radiation pattern 2(g+1) cos^g(psi) on [0, pi/2], zero behind the array.
double element_gain(double psi, double g);

/// Near-field LoS channel towards `user`. Entry n holds conj(gamma_k(i, l)), so
/// that gamma.adjoint() * x is the received signal.
CVector channel_vector(const ArrayGeometry& geom, const UserLocation& user,
                       double wavelength, double wavenumber, double gain_exponent);
CVector channel_vector(const ArrayGeometry& geom, const UserLocation& user,
                       const ScenarioConfig& cfg);

/// Users uniform in rho on [0.1 d_F, d_F] and theta on [-85 deg, 85 deg].
std::vector<UserLocation> sample_users(const ScenarioConfig& cfg,
                                       const ArrayGeometry& geom, int count,
                                       std::uint64_t seed);

/// A fully realised instance: geometry, user positions and their channels.
struct Scenario {
    ScenarioConfig config;
    ArrayGeometry geometry;
    std::vector<UserLocation> users;
    std::vector<CVector> channels;  // gamma_k, one per user
    double fraunhofer = 0.0;
};

/// Places users (fixed list or seeded sampling) and computes their channels.
Scenario build_scenario(const ScenarioConfig& cfg);

/// Deterministic seed mixing for per-realisation streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace holobeam
