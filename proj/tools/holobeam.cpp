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

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <sstream>

#include "holobeam/experiments.hpp"
#include "holobeam/plotting.hpp"

using namespace holobeam;

namespace {

struct CommonFlags {
    std::string config;
    std::string methods;
    std::string center;
    std::uint64_t seed = 1;
    int realizations = -1;
    std::string out = "results";
    std::string values;
    bool full_scale = false;
    bool trace = false;
    bool dump = false;
};

void add_common(CLI::App* app, CommonFlags& f, bool sweep) {
    app->add_option("--config", f.config, "Scenario JSON file")->check(CLI::ExistingFile);
    app->add_option("--method", f.methods, "Comma-separated methods: fd,unrestricted,lcph,lceh,lcush,arlch,gmlch");
    app->add_option("--map-center", f.center, "GMLCH mapping center as x,y");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--out", f.out, "Output directory")->capture_default_str();
    app->add_flag("--trace", f.trace, "Also write per-run convergence tables");
    if (sweep) {
        app->add_option("--realizations", f.realizations, "Monte-Carlo realisations");
        app->add_option("--values", f.values, "Comma-separated sweep points");
        app->add_flag("--full-scale", f.full_scale, "16x16 array and 1000 realisations");
        app->add_flag("--dump", f.dump, "Write returned weights as JSON lines");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Campaign make_campaign(SweepAxis axis, const CommonFlags& f) {
    Campaign c = default_campaign(axis);
    if (!f.config.empty()) c.base = load_scenario_config(f.config);
    if (f.full_scale) apply_full_scale(c);
    c.master_seed = f.seed;
    c.base.rng_seed = f.seed;
    if (f.realizations >= 0) c.realizations = f.realizations;
    c.out_dir = f.out;
    c.trace = f.trace;
    c.dump_solutions = f.dump;
    if (!f.values.empty()) {
        c.axis_values.clear();
        for (const auto& v : split_list(f.values)) c.axis_values.push_back(std::stod(v));
    }
    std::optional<MappingCenter> center;
    if (!f.center.empty()) center = parse_center(f.center);
    if (!f.methods.empty()) {
        c.methods.clear();
        for (const auto& name : split_list(f.methods)) c.methods.push_back(parse_method(name, center ? &*center : nullptr));
    } else if (center) {
        c.methods = {Method::gmlch(*center)};
    }
    if (center && std::none_of(c.methods.begin(), c.methods.end(), [](const Method& m) {
            return m.kind == MethodKind::gmlch && m.label.rfind("GMLCH", 0) == 0;
        }))
        c.methods.push_back(Method::gmlch(*center));
    return c;
}

int report(const CampaignResult& r) {
    if (!r.csv_path.empty()) std::cout << r.csv_path.string() << '\n';
    write_csv(std::cout, r.table);
    if (r.runs > 0 && r.feasible_runs == 0) {
        spdlog::error("every run was infeasible");
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmit-power minimisation for DMA-aided multi-user MISO downlink"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    CommonFlags solve_f, angle_f, snr_f, mc_f, users_f, spacing_f;
    auto* solve = app.add_subcommand("solve", "Optimise one scenario with each method");
    add_common(solve, solve_f, false);
    auto* angle = app.add_subcommand("sweep-angle", "Single user at 0.5 d_F, power versus azimuth");
    add_common(angle, angle_f, true);
    auto* snr = app.add_subcommand("sweep-snr", "Mean power versus SINR target");
    add_common(snr, snr_f, true);
    auto* mc = app.add_subcommand("monte-carlo", "Per-realisation power for random user drops");
    add_common(mc, mc_f, true);
    auto* users = app.add_subcommand("sweep-users", "Mean power versus number of users");
    add_common(users, users_f, true);
    auto* spacing = app.add_subcommand("sweep-spacing", "Mean power versus element spacing at fixed aperture");
    add_common(spacing, spacing_f, true);

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Render result CSV files as SVG charts");
    plot->add_option("csv", plot_inputs, "CSV files")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "Output directory (defaults to each CSV's directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // stdout carries results only; diagnostics go to stderr
    spdlog::set_default_logger(spdlog::stderr_color_mt("holobeam"));
    try {
        spdlog::set_level(spdlog::level::from_str(log_level));
        if (*solve) return report(run_solve(make_campaign(SweepAxis::none, solve_f)));
        if (*angle) return report(run_angle_sweep(make_campaign(SweepAxis::theta, angle_f)));
        if (*snr) return report(run_snr_sweep(make_campaign(SweepAxis::snr_db, snr_f)));
        if (*mc) return report(run_monte_carlo(make_campaign(SweepAxis::none, mc_f)));
        if (*users) return report(run_user_count_sweep(make_campaign(SweepAxis::n_users, users_f)));
        if (*spacing) return report(run_spacing_sweep(make_campaign(SweepAxis::spacing, spacing_f)));
        if (*plot) {
            for (const auto& csv : plot_inputs) {
                for (const auto& p : emit_plots(csv, plot_out)) std::cout << p.string() << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
