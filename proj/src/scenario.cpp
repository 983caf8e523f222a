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

#include "holobeam/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace holobeam {

namespace {

constexpr double kMaxSampledThetaDeg = 85.0;
constexpr double kMinRhoOverDf = 0.1;
constexpr double kMaxRhoOverDf = 1.0;

// 53-bit uniform on [0, 1); independent of the standard library's
// distribution implementation so streams are portable.
double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::vector<double> scalar_or_list(const nlohmann::json& v, int n, const char* key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.assign(static_cast<std::size_t>(n), v.get<double>());
    } else if (v.is_array()) {
        out = v.get<std::vector<double>>();
        if (static_cast<int>(out.size()) != n) {
            throw std::invalid_argument(std::string("scenario: '") + key +
                                        "' list length does not match the user count");
        }
    } else {
        throw std::invalid_argument(std::string("scenario: '") + key +
                                    "' must be a number or a list");
    }
    return out;
}

}  // namespace

ArrayGeometry ArrayGeometry::planar(int n_r, int n_c, double dx, double dy) {
    if (n_r < 1 || n_c < 1) throw std::invalid_argument("array dimensions must be positive");
    ArrayGeometry g;
    g.n_microstrips = n_r;
    g.n_per_microstrip = n_c;
    g.spacing_x = dx;
    g.spacing_y = dy;
    g.element_positions.reserve(static_cast<std::size_t>(n_r * n_c));
    const double y0 = 0.5 * (n_c - 1) * dx;
    const double z0 = 0.5 * (n_r - 1) * dy;
    for (int i = 0; i < n_r; ++i) {
        for (int l = 0; l < n_c; ++l) {
            g.element_positions.emplace_back(0.0, l * dx - y0, i * dy - z0);
        }
    }
    return g;
}

UserLocation UserLocation::polar(double rho, double theta) {
    UserLocation u;
    u.rho = rho;
    u.theta = theta;
    u.cartesian = Eigen::Vector3d(rho * std::cos(theta), rho * std::sin(theta), 0.0);
    return u;
}

void ScenarioConfig::set_uniform_qos(double sinr_db, double noise_dbm) {
    sinr_targets.assign(static_cast<std::size_t>(n_users), db_to_linear(sinr_db));
    noise_mw.assign(static_cast<std::size_t>(n_users), db_to_linear(noise_dbm));
}

void ScenarioConfig::validate() const {
    if (frequency_hz <= 0.0) throw std::invalid_argument("frequency must be positive");
    if (n_r < 1 || n_c < 1) throw std::invalid_argument("array dimensions must be positive");
    if (dx_over_lambda <= 0.0 || dy_over_lambda <= 0.0)
        throw std::invalid_argument("element spacings must be positive");
    if (n_users < 1) throw std::invalid_argument("at least one user is required");
    if (n_users > n_r)
        throw std::invalid_argument("K = " + std::to_string(n_users) +
                                    " users exceeds the " + std::to_string(n_r) +
                                    " RF chains (M = min(K, N_r) streams)");
    if (static_cast<int>(sinr_targets.size()) != n_users ||
        static_cast<int>(noise_mw.size()) != n_users)
        throw std::invalid_argument("per-user SINR targets and noise powers must be set");
    for (int k = 0; k < n_users; ++k) {
        if (!(sinr_targets[k] > 0.0)) throw std::invalid_argument("SINR targets must be positive");
        if (!(noise_mw[k] > 0.0)) throw std::invalid_argument("noise powers must be positive");
    }
    if (!fixed_users.empty() && static_cast<int>(fixed_users.size()) != n_users)
        throw std::invalid_argument("fixed user list length does not match the user count");
}

ScenarioConfig scenario_config_from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    cfg.frequency_hz = j.value("frequency_hz", cfg.frequency_hz);
    cfg.n_r = j.value("n_r", cfg.n_r);
    cfg.n_c = j.value("n_c", cfg.n_c);
    cfg.dx_over_lambda = j.value("dx_over_lambda", cfg.dx_over_lambda);
    cfg.dy_over_lambda = j.value("dy_over_lambda", cfg.dy_over_lambda);
    cfg.gain_exponent = j.value("gain_exponent", cfg.gain_exponent);

    if (j.contains("users")) {
        const auto& u = j.at("users");
        if (u.is_array()) {
            for (const auto& p : u) {
                cfg.fixed_users.push_back({p.at("rho_over_df").get<double>(),
                                           p.at("theta_deg").get<double>()});
            }
            cfg.n_users = static_cast<int>(cfg.fixed_users.size());
        } else if (u.is_object()) {
            cfg.n_users = u.at("count").get<int>();
            cfg.rng_seed = u.value("seed", cfg.rng_seed);
        } else {
            throw std::invalid_argument("scenario: 'users' must be a list or {count, seed}");
        }
    }

    const auto sinr_db = scalar_or_list(j.value("sinr_db", nlohmann::json(30.0)), cfg.n_users, "sinr_db");
    const auto noise_dbm =
        scalar_or_list(j.value("noise_dbm", nlohmann::json(-75.0)), cfg.n_users, "noise_dbm");
    for (int k = 0; k < cfg.n_users; ++k) {
        cfg.sinr_targets.push_back(db_to_linear(sinr_db[k]));
        cfg.noise_mw.push_back(db_to_linear(noise_dbm[k]));
    }

    if (j.contains("waveguide")) {
        const auto& w = j.at("waveguide");
        if (w.is_string()) {
            if (w.get<std::string>() != "identity")
                throw std::invalid_argument("scenario: waveguide must be \"identity\" or {alpha, beta}");
            cfg.waveguide_mode = WaveguideMode::identity;
        } else {
            cfg.waveguide_mode = WaveguideMode::microstrip;
            cfg.waveguide_alpha = w.at("alpha").get<double>();
            cfg.waveguide_beta = w.at("beta").get<double>();
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        cfg.tolerances.sdp_tol = t.value("sdp_tol", cfg.tolerances.sdp_tol);
        cfg.tolerances.sdp_max_iters = t.value("sdp_max_iters", cfg.tolerances.sdp_max_iters);
        cfg.tolerances.psd_tol = t.value("psd_tol", cfg.tolerances.psd_tol);
        cfg.tolerances.feas_tol = t.value("feas_tol", cfg.tolerances.feas_tol);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("scenario file " + path.string() + ": " + e.what());
    }
    return scenario_config_from_json(j);
}

nlohmann::json scenario_config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["frequency_hz"] = cfg.frequency_hz;
    j["n_r"] = cfg.n_r;
    j["n_c"] = cfg.n_c;
    j["dx_over_lambda"] = cfg.dx_over_lambda;
    j["dy_over_lambda"] = cfg.dy_over_lambda;
    j["gain_exponent"] = cfg.gain_exponent;
    std::vector<double> sinr_db, noise_dbm;
    for (double d : cfg.sinr_targets) sinr_db.push_back(linear_to_db(d));
    for (double s : cfg.noise_mw) noise_dbm.push_back(linear_to_db(s));
    j["sinr_db"] = sinr_db;
    j["noise_dbm"] = noise_dbm;
    if (cfg.fixed_users.empty()) {
        j["users"] = {{"count", cfg.n_users}, {"seed", cfg.rng_seed}};
    } else {
        auto arr = nlohmann::json::array();
        for (const auto& u : cfg.fixed_users)
            arr.push_back({{"rho_over_df", u.rho_over_df}, {"theta_deg", u.theta_deg}});
        j["users"] = arr;
    }
    if (cfg.waveguide_mode == WaveguideMode::identity) {
        j["waveguide"] = "identity";
    } else {
        j["waveguide"] = {{"alpha", cfg.waveguide_alpha}, {"beta", cfg.waveguide_beta}};
    }
    return j;
}

ArrayGeometry make_geometry(const ScenarioConfig& cfg) {
    const double lambda = cfg.wavelength();
    return ArrayGeometry::planar(cfg.n_r, cfg.n_c, cfg.dx_over_lambda * lambda,
                                 cfg.dy_over_lambda * lambda);
}

double fraunhofer_distance(const ArrayGeometry& geom, double wavelength) {
    const double lx = (geom.n_per_microstrip - 1) * geom.spacing_x;
    const double ly = (geom.n_microstrips - 1) * geom.spacing_y;
    const double l2 = lx * lx + ly * ly;
    return 2.0 * l2 / wavelength;
}

double element_gain(double psi, double g) {
    if (!(psi >= 0.0 && psi <= kPi)) throw std::invalid_argument("element_gain: psi outside [0, pi]");
    if (psi > 0.5 * kPi) return 0.0;
    // cos can dip a hair below zero at pi/2 in floating point.
    return 2.0 * (g + 1.0) * std::pow(std::max(std::cos(psi), 0.0), g);
}

CVector channel_vector(const ArrayGeometry& geom, const UserLocation& user,
                       double wavelength, double wavenumber, double gain_exponent) {
    const int n = geom.size();
    CVector gamma(n);
    const Eigen::Vector3d bore = ArrayGeometry::boresight();
    for (int idx = 0; idx < n; ++idx) {
        const Eigen::Vector3d diff = user.cartesian - geom.element_positions[idx];
        const double dist = diff.norm();
        if (!(dist > 0.0)) throw std::invalid_argument("channel_vector: user coincides with an element");
        const double cos_psi = std::clamp(bore.dot(diff) / dist, -1.0, 1.0);
        const double psi = std::acos(cos_psi);
        const double amp = std::sqrt(element_gain(psi, gain_exponent)) * wavelength / (4.0 * kPi * dist);
        // Stored conjugated: gamma_k = [gamma_k(1,1), ...]^H.
        gamma[idx] = std::polar(amp, wavenumber * dist);
    }
    return gamma;
}

CVector channel_vector(const ArrayGeometry& geom, const UserLocation& user,
                       const ScenarioConfig& cfg) {
    return channel_vector(geom, user, cfg.wavelength(), cfg.wavenumber(), cfg.gain_exponent);
}

std::vector<UserLocation> sample_users(const ScenarioConfig& cfg, const ArrayGeometry& geom,
                                       int count, std::uint64_t seed) {
    const double df = fraunhofer_distance(geom, cfg.wavelength());
    if (!(df > 0.0)) throw std::invalid_argument("sample_users: array has zero Fraunhofer distance");
    std::mt19937_64 gen(seed);
    const double theta_max = kMaxSampledThetaDeg * kPi / 180.0;
    std::vector<UserLocation> users;
    users.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const double rho = df * (kMinRhoOverDf + (kMaxRhoOverDf - kMinRhoOverDf) * unit_uniform(gen));
        const double theta = theta_max * (2.0 * unit_uniform(gen) - 1.0);
        users.push_back(UserLocation::polar(rho, theta));
    }
    return users;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario s;
    s.config = cfg;
    s.geometry = make_geometry(cfg);
    s.fraunhofer = fraunhofer_distance(s.geometry, cfg.wavelength());
    if (cfg.fixed_users.empty()) {
        s.users = sample_users(cfg, s.geometry, cfg.n_users, cfg.rng_seed);
    } else {
        for (const auto& u : cfg.fixed_users)
            s.users.push_back(UserLocation::polar(u.rho_over_df * s.fraunhofer, u.theta_deg * kPi / 180.0));
    }
    for (const auto& u : s.users) s.channels.push_back(channel_vector(s.geometry, u, cfg));
    return s;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finaliser over the pair
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace holobeam
