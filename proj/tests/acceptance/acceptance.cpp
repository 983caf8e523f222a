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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "holobeam/ao_driver.hpp"
#include "holobeam/arlch.hpp"
#include "holobeam/lorentzian_mapping.hpp"
#include "holobeam/precoder_stage.hpp"
#include "holobeam/weight_stage.hpp"
#include "oracles.hpp"

using namespace holobeam;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Every run of the campaigns below goes through here so that the pipeline-wide
// criteria (membership, feasibility, rank) see all of them.
struct Audit {
    int runs = 0;
    int constrained = 0;
    double worst_membership = 0.0;
    int sinr_violations = 0;
    double worst_sinr_ratio = 1e300;
    double worst_rank_ratio = 0.0;

    void add(const Scenario& sc, const RunResult& r) {
        ++runs;
        if (r.status == RunStatus::infeasible) return;
        if (r.method.constrained()) {
            ++constrained;
            worst_membership = std::max(worst_membership, r.weights.lorentzian_violation());
        }
        const auto s = achieved_sinr(sc, r);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double ratio = s[k] / sc.config.sinr_targets[k];
            worst_sinr_ratio = std::min(worst_sinr_ratio, ratio);
            if (ratio < 1.0 - 1e-6) ++sinr_violations;
        }
        if (r.best_iteration >= 0)
            worst_rank_ratio = std::max(worst_rank_ratio, r.trace[static_cast<std::size_t>(r.best_iteration)].precoder_eigen_ratio);
    }
};

Audit audit;

RunResult run(const Scenario& sc, const Method& m, std::uint64_t seed, const OptimizerOptions& opt = {}) {
    RunResult r = optimize(sc, m, opt, seed);
    audit.add(sc, r);
    return r;
}

ScenarioConfig desk(int k) {
    ScenarioConfig cfg;
    cfg.n_r = 8;
    cfg.n_c = 8;
    cfg.n_users = k;
    cfg.set_uniform_qos(30.0, -75.0);
    return cfg;
}

Scenario single_user(double theta_deg, double delta_scale = 1.0) {
    ScenarioConfig cfg = desk(1);
    cfg.fixed_users = {{0.5, theta_deg}};
    for (double& d : cfg.sinr_targets) d *= delta_scale;
    return build_scenario(cfg);
}

std::string num(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Verdict diameter_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi), scale(0.3, 2.5);
    double worst_arg = 0.0, worst_excess = -1e300;
    for (int i = 0; i < 100; ++i) {
        RVector phi(16);
        for (int n = 0; n < 16; ++n) phi[n] = ph(rng);
        const CVector qhat = unitary_lorentzian(phi);
        const CVector qstar = scale(rng) * qhat + oracle::random_cvector(rng, 16, 0.3);
        const double d = optimal_diameter(qhat, qstar).diameter;
        const auto g = oracle::diameter_grid(qhat, qstar, 0.0, 3.0, 4001);
        worst_arg = std::max(worst_arg, std::abs(d - g.arg));
        worst_excess = std::max(worst_excess, (qstar - d * qhat).squaredNorm() - g.value);
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = worst_arg <= 1e-3 && worst_excess <= 0.0 && secs < 5.0;
    v.detail = "max |D*-D_grid| " + num("%.2e", worst_arg) + ", max E(D*)-E_grid " + num("%.2e", worst_excess) +
               ", " + num("%.2f s", secs);
    return v;
}

Verdict mapping_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> ph(-kPi, kPi), cx(-0.45, 0.45), cy(0.1, 0.9);
    double closed = 0.0, grid = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double phi = ph(rng);
        const Complex q = std::polar(1.0, phi);
        closed = std::max({closed, std::abs(gmlch_point(q, MappingCenter::lcph()) - lcph_map(phi)),
                           std::abs(gmlch_point(q, MappingCenter::lceh()) - lceh_map(q)),
                           std::abs(gmlch_point(q, MappingCenter::lcush()) - lcush_map(phi))});
        const MappingCenter presets[] = {MappingCenter::lcph(), MappingCenter::lceh(), MappingCenter::lcush(),
                                         MappingCenter{cx(rng), cy(rng)}};
        const MappingCenter& c = presets[i % 4];
        grid = std::max(grid, std::abs(gmlch_point(q, c) - oracle::grid_map(q, c, 8192)));
    }
    const double secs = seconds_since(t0);
    // one grid step on the circle is pi / 8192 in arc length
    const double resolution = kPi / 8192.0;
    Verdict v;
    v.pass = closed <= 1e-9 && grid <= resolution && secs < 10.0;
    v.detail = "closed-form gap " + num("%.2e", closed) + ", grid gap " + num("%.2e", grid) + " (step " +
               num("%.2e", resolution) + "), " + num("%.2f s", secs);
    return v;
}

Verdict single_user_boundary() {
    const auto t0 = Clock::now();
    ScenarioConfig cfg = desk(1);
    const ArrayGeometry geom = make_geometry(cfg);
    const auto users = sample_users(cfg, geom, 20, 404);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        Scenario sc;
        sc.config = cfg;
        sc.geometry = geom;
        sc.users = {users[i]};
        sc.channels = {channel_vector(geom, users[i], cfg)};
        sc.fraunhofer = fraunhofer_distance(geom, cfg.wavelength());
        const double fd = run(sc, Method::fd(), i).p_tx;
        const double un = run(sc, Method::unrestricted(), i).p_tx;
        lo = std::min(lo, un / fd);
        hi = std::max(hi, un / fd);
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = lo >= 0.99 && hi <= 1.01 && secs < 300.0;
    v.detail = "Unrestricted/FD in [" + num("%.6f", lo) + ", " + num("%.6f", hi) + "], " + num("%.1f s", secs);
    return v;
}

Verdict arlch_dominance() {
    const auto t0 = Clock::now();
    int wins = 0, points = 0;
    double reduction = 0.0;
    std::string worst;
    for (int theta = 0; theta <= 80; theta += 10) {
        const Scenario sc = single_user(theta);
        const std::uint64_t seed = derive_seed(1, static_cast<std::uint64_t>(points));
        const double lc = run(sc, Method::lcush(), seed).p_tx;
        const double ar = run(sc, Method::arlch(), seed).p_tx;
        ++points;
        if (ar <= lc) {
            ++wins;
        } else {
            worst += " theta=" + std::to_string(theta) + " (" + num("%.5g", ar) + " vs " + num("%.5g", lc) + ")";
        }
        reduction += 1.0 - ar / lc;
    }
    reduction /= points;
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = wins >= 0.9 * points && reduction >= 0.10 && secs < 900.0;
    v.detail = "ARLCH <= LCUSH at " + std::to_string(wins) + "/" + std::to_string(points) + " points, mean reduction " +
               num("%.1f%%", 100.0 * reduction) + ", " + num("%.0f s", secs);
    if (!worst.empty()) v.detail += "; lost at" + worst;
    return v;
}

Verdict method_ordering() {
    const auto t0 = Clock::now();
    const std::vector<Method> methods = {Method::fd(), Method::unrestricted(), Method::lcph(),
                                         Method::lceh(), Method::lcush(), Method::arlch()};
    std::map<std::string, double> sum;
    int used = 0;
    for (int r = 0; r < 50; ++r) {
        ScenarioConfig cfg = desk(2);
        cfg.rng_seed = derive_seed(1, static_cast<std::uint64_t>(r));
        const Scenario sc = build_scenario(cfg);
        std::map<std::string, double> p;
        bool ok = true;
        for (const Method& m : methods) {
            const RunResult res = run(sc, m, derive_seed(cfg.rng_seed, 1));
            ok = ok && res.status != RunStatus::infeasible;
            p[m.name()] = res.p_tx;
        }
        // paired means: only realisations where every method is feasible
        if (!ok) continue;
        ++used;
        for (const auto& [k, val] : p) sum[k] += val;
    }
    auto mean = [&](const char* k) { return used > 0 ? sum[k] / used : 0.0; };
    const double fd = mean("FD"), ar = mean("ARLCH"), le = mean("LCEH"), lu = mean("LCUSH"), lp = mean("LCPH"),
                 un = mean("Unrestricted");
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = used > 0 && ar <= le && le <= lu && lu <= lp && fd <= std::min({ar, le, lu, lp, un}) &&
             ar <= 0.92 * lu && secs < 1800.0;
    v.detail = std::to_string(used) + " paired realisations; mean mW FD " + num("%.4g", fd) + ", Unrestricted " +
               num("%.4g", un) + ", ARLCH " + num("%.4g", ar) + ", LCEH " + num("%.4g", le) + ", LCUSH " +
               num("%.4g", lu) + ", LCPH " + num("%.4g", lp) + "; ARLCH vs LCUSH " +
               num("%.1f%%", 100.0 * (1.0 - ar / lu)) + ", " + num("%.0f s", secs);
    return v;
}

Verdict convergence() {
    const Scenario sc = single_user(80.0);
    Verdict v;
    for (const Method& m : {Method::lcph(), Method::lceh(), Method::lcush(), Method::arlch()}) {
        const RunResult r = run(sc, m, derive_seed(1, 0));
        const auto tr = convergence_trace(r);
        int reached = -1;
        for (std::size_t i = 1; i < tr.size(); ++i) {
            if (tr[i].relative_change < 1e-4) {
                reached = tr[i].t;
                break;
            }
        }
        bool monotone = true;
        for (std::size_t i = 1; i < tr.size(); ++i) monotone = monotone && tr[i].best_so_far <= tr[i - 1].best_so_far;
        const bool ok = reached >= 1 && reached <= 15 && monotone;
        v.pass = v.pass && ok;
        v.detail += m.name() + (reached > 0 ? " t=" + std::to_string(reached) : std::string(" not within 15")) +
                    (monotone ? "" : " (best-so-far rose)") + "; ";
    }
    return v;
}

Verdict linearity() {
    const std::vector<Method> methods = {Method::fd(), Method::unrestricted(), Method::lcph(),
                                         Method::lceh(), Method::lcush(), Method::arlch()};
    const Scenario base = single_user(35.0);
    double worst = 0.0;
    for (const Method& m : methods) {
        const double p1 = run(base, m, 7).p_tx;
        for (double t : {2.0, 10.0}) {
            const double pt = run(single_user(35.0, t), m, 7).p_tx;
            worst = std::max(worst, std::abs(pt / p1 / t - 1.0));
        }
    }
    Verdict v;
    v.pass = worst <= 1e-3;
    v.detail = "single user, max |P(t delta)/(t P(delta)) - 1| = " + num("%.2e", worst);
    return v;
}

Verdict structural() {
    std::mt19937_64 rng(110);
    double worst = 0.0;
    for (int nr = 1; nr <= 4; ++nr) {
        for (int nc = 1; nc <= 4; ++nc) {
            const auto g = ArrayGeometry::planar(nr, nc, 0.005, 0.005);
            const auto h = WaveguideResponse::microstrip(g, 2.0, 550.0);
            const int k = std::min(nr, 2);
            std::vector<CVector> ch;
            PrecoderSet w;
            for (int u = 0; u < k; ++u) {
                ch.push_back(oracle::random_cvector(rng, nr * nc));
                w.w.push_back(oracle::random_cvector(rng, nr));
            }
            ScenarioConfig cfg;
            cfg.n_users = k;
            cfg.set_uniform_qos(10.0, -75.0);
            const auto s = build_weight_problem(ch, h, w, cfg);
            const auto d = oracle::dense_weight_problem(ch, h, w);
            for (int m = 0; m < k; ++m) {
                worst = std::max(worst, (s.b_matrix(m) - d.b[m]).norm() / std::max(1.0, d.b[m].norm()));
                for (int u = 0; u < k; ++u)
                    worst = std::max(worst, (s.c_matrix(u, m) - d.c[u][m]).norm() / std::max(1.0, d.c[u][m].norm()));
            }
        }
    }
    double mf = 0.0;
    for (int theta = -80; theta <= 80; theta += 20) {
        const Scenario sc = single_user(theta);
        const double p = run(sc, Method::fd(), 1).p_tx;
        const double ref = oracle::matched_filter_power(sc.channels[0], sc.config.sinr_targets[0], sc.config.noise_mw[0]);
        mf = std::max(mf, std::abs(p / ref - 1.0));
    }
    Verdict v;
    v.pass = worst <= 1e-12 && audit.worst_rank_ratio <= 1e-6 && mf <= 1e-6;
    v.detail = "Kronecker gap " + num("%.2e", worst) + ", worst lambda2/lambda1 " + num("%.2e", audit.worst_rank_ratio) +
               " over " + std::to_string(audit.runs) + " runs, matched-filter gap " + num("%.2e", mf);
    return v;
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::warn);
    std::map<int, Verdict> results;
    results[1] = diameter_oracle();
    results[2] = mapping_equivalence();
    results[4] = single_user_boundary();
    results[6] = arlch_dominance();
    results[7] = method_ordering();
    results[8] = convergence();
    results[9] = linearity();
    results[10] = structural();

    Verdict membership;
    membership.pass = audit.constrained > 0 && audit.worst_membership <= 1e-9;
    membership.detail = std::to_string(audit.constrained) + " constrained runs, worst distance " +
                        num("%.2e", audit.worst_membership);
    results[3] = membership;

    Verdict sinr;
    sinr.pass = audit.sinr_violations == 0;
    sinr.detail = std::to_string(audit.runs) + " runs, " + std::to_string(audit.sinr_violations) +
                  " violations, worst SINR/target " + num("%.9f", audit.worst_sinr_ratio);
    results[5] = sinr;

    int failed = 0;
    for (const auto& [id, v] : results) {
        std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
        failed += v.pass ? 0 : 1;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
