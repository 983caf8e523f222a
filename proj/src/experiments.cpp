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

#include "holobeam/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

namespace holobeam {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    out << "# holobeam-csv v1\n# family: " << table.family << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv(out, table);
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + what);
    };
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    bool version_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# holobeam-csv v1") {
                version_seen = true;
            } else if (line.rfind("# family: ", 0) == 0) {
                t.family = line.substr(10);
            }
            continue;
        }
        if (!version_seen) fail("missing '# holobeam-csv v1' header");
        if (t.columns.empty()) {
            t.columns = split(line);
            t.header_line = lineno;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.columns.size())
            fail("expected " + std::to_string(t.columns.size()) + " fields, found " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.row_lines.push_back(lineno);
    }
    if (!version_seen) fail("missing '# holobeam-csv v1' header");
    if (t.family.empty()) fail("missing '# family:' line");
    if (t.columns.empty()) fail("missing column header");
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_csv(in);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HOLOBEAM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
        spdlog::warn("ignoring HOLOBEAM_THREADS='{}'", env);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int elements_for_spacing(int base_n_c, double base_dx_over_lambda, double dx_over_lambda) {
    if (!(dx_over_lambda > 0.0)) throw std::invalid_argument("element spacing must be positive");
    const long n = std::lround(base_n_c * base_dx_over_lambda / dx_over_lambda);
    return static_cast<int>(std::max(1L, n));
}

namespace {

CsvTable make_table(std::string family, std::vector<std::string> columns) {
    CsvTable t;
    t.family = std::move(family);
    t.columns = std::move(columns);
    return t;
}

double mean_or_nan(double sum, int count) { return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN(); }

// Runs f(i) for i in [0, n) on a pool; f writes into pre-sized storage so
// ordering does not depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

ScenarioConfig with_user_count(ScenarioConfig cfg, int k) {
    const double delta = cfg.sinr_targets.empty() ? db_to_linear(30.0) : cfg.sinr_targets.front();
    const double noise = cfg.noise_mw.empty() ? db_to_linear(-75.0) : cfg.noise_mw.front();
    cfg.n_users = k;
    cfg.sinr_targets.assign(static_cast<std::size_t>(k), delta);
    cfg.noise_mw.assign(static_cast<std::size_t>(k), noise);
    return cfg;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::string users_label(const Scenario& sc) {
    std::vector<std::string> parts;
    for (const auto& u : sc.users) parts.push_back(format_number(u.rho) + ":" + format_number(u.theta * 180.0 / kPi));
    return join(parts, ';');
}

std::string sinr_label(const RunResult& r) {
    std::vector<std::string> parts;
    for (double s : r.sinr) parts.push_back(format_number(linear_to_db(s)));
    return join(parts, ';');
}

bool feasible(const RunResult& r) { return r.status != RunStatus::infeasible; }

double power_of(const RunResult& r) { return feasible(r) ? r.p_tx : std::numeric_limits<double>::quiet_NaN(); }

// One optimisation job of a campaign.
struct Job {
    std::string point;    // human-readable key used in trace tables
    std::size_t group = 0;  // aggregation bucket (sweep point)
    std::size_t method = 0;
    Scenario scenario;
    std::uint64_t seed = 0;
};

struct Outcome {
    RunResult run;
};

std::vector<Outcome> run_jobs(const Campaign& c, const std::vector<Job>& jobs, const std::vector<Method>& methods) {
    std::vector<Outcome> out(jobs.size());
    parallel_for(jobs.size(), resolve_threads(c.threads), [&](std::size_t i) {
        const Job& j = jobs[i];
        out[i].run = optimize(j.scenario, methods[j.method], c.optimizer, j.seed);
    });
    return out;
}

void add_traces(const Campaign& c, const std::vector<Job>& jobs, const std::vector<Outcome>& out,
                CampaignResult& res) {
    if (!c.trace) return;
    CsvTable conv = make_table("convergence", {"point", "method", "t", "p_tx_mw", "relative_change", "best_so_far"});
    CsvTable arl = make_table("arlch_trace", {"point", "method", "outer_t", "t", "diameter", "cost"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunResult& r = out[i].run;
        for (const auto& p : convergence_trace(r)) {
            conv.rows.push_back({jobs[i].point, r.method.name(), std::to_string(p.t), format_number(p.p_tx),
                                 format_number(p.relative_change), format_number(p.best_so_far)});
        }
        for (const auto& rec : r.trace) {
            for (const auto& a : rec.arlch) {
                arl.rows.push_back({jobs[i].point, r.method.name(), std::to_string(rec.t), std::to_string(a.t),
                                    format_number(a.diameter), format_number(a.cost)});
            }
        }
    }
    res.extra.push_back(std::move(conv));
    if (!arl.rows.empty()) res.extra.push_back(std::move(arl));
}

void write_dump(const Campaign& c, const std::vector<Job>& jobs, const std::vector<Outcome>& out,
                const std::string& family) {
    if (!c.dump_solutions || c.out_dir.empty()) return;
    std::filesystem::create_directories(c.out_dir);
    std::ofstream f(c.out_dir / (family + "_solutions.jsonl"), std::ios::binary);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunResult& r = out[i].run;
        nlohmann::json j;
        j["point"] = jobs[i].point;
        j["method"] = r.method.name();
        j["status"] = to_string(r.status);
        j["p_tx_mw"] = r.p_tx;
        j["q"] = to_json(r.weights.q);
        j["w"] = to_json(r.precoders);
        f << j.dump() << '\n';
    }
}

void finish(const Campaign& c, CampaignResult& res, const std::vector<Outcome>& out) {
    res.runs = static_cast<int>(out.size());
    for (const auto& o : out) res.feasible_runs += feasible(o.run) ? 1 : 0;
    if (c.out_dir.empty()) return;
    res.csv_path = c.out_dir / (res.table.family + ".csv");
    write_csv(res.csv_path, res.table);
    for (const auto& t : res.extra) write_csv(c.out_dir / (res.table.family + "_" + t.family + ".csv"), t);
}

std::vector<Method> methods_or_default(const Campaign& c) {
    if (!c.methods.empty()) return c.methods;
    return {Method::fd(), Method::unrestricted(), Method::lcph(), Method::lceh(), Method::lcush(), Method::arlch()};
}

// Mean-power table over realisations: rows (axis..., method, mean, n_feasible).
void aggregate(const std::vector<Job>& jobs, const std::vector<Outcome>& out, std::size_t n_groups,
               const std::vector<Method>& methods,
               const std::function<std::vector<std::string>(std::size_t)>& axis_cells, CsvTable& table) {
    std::vector<double> sum(n_groups * methods.size(), 0.0);
    std::vector<int> cnt(n_groups * methods.size(), 0);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::size_t slot = jobs[i].group * methods.size() + jobs[i].method;
        if (feasible(out[i].run)) {
            sum[slot] += out[i].run.p_tx;
            ++cnt[slot];
        }
    }
    if (jobs.empty()) return;
    for (std::size_t g = 0; g < n_groups; ++g) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            auto row = axis_cells(g);
            row.push_back(methods[m].name());
            row.push_back(format_number(mean_or_nan(sum[g * methods.size() + m], cnt[g * methods.size() + m])));
            row.push_back(std::to_string(cnt[g * methods.size() + m]));
            table.rows.push_back(std::move(row));
        }
    }
}

}  // namespace

Campaign default_campaign(SweepAxis axis) {
    Campaign c;
    c.axis = axis;
    c.base.set_uniform_qos(30.0, -75.0);
    c.methods = methods_or_default(c);
    switch (axis) {
        case SweepAxis::theta:
            for (int t = 0; t <= 85; t += 5) c.axis_values.push_back(t);
            c.realizations = 1;
            break;
        case SweepAxis::snr_db:
            for (int d = 0; d <= 40; d += 5) c.axis_values.push_back(d);
            break;
        case SweepAxis::n_users:
            c.axis_values = {1, 2, 4, 6};
            break;
        case SweepAxis::spacing:
            c.axis_values = {1.0, 0.5, 0.25, 1.0 / 6.0};
            c.base = with_user_count(c.base, 4);
            break;
        case SweepAxis::none:
            c.base = with_user_count(c.base, 2);
            break;
    }
    return c;
}

void apply_full_scale(Campaign& c) {
    spdlog::warn("full-scale settings (16x16 array, 1000 realisations) can run for many hours");
    c.base.n_r = 16;
    c.base.n_c = 16;
    c.realizations = c.axis == SweepAxis::theta ? 1 : 1000;
    if (c.axis == SweepAxis::theta) {
        c.axis_values.clear();
        for (int t = 0; t <= 85; ++t) c.axis_values.push_back(t);
    }
    if (c.axis == SweepAxis::n_users) c.axis_values = {1, 2, 4, 6, 8, 10};
}

CampaignResult run_angle_sweep(const Campaign& c) {
    const ScenarioConfig base = with_user_count(c.base, 1);
    std::vector<Method> methods = methods_or_default(c);
    std::size_t fd_index = methods.size();
    for (std::size_t m = 0; m < methods.size(); ++m) {
        if (methods[m].kind == MethodKind::fd) fd_index = m;
    }
    const bool fd_internal = fd_index == methods.size();
    if (fd_internal) methods.push_back(Method::fd());

    std::vector<Job> jobs;
    for (std::size_t p = 0; p < c.axis_values.size(); ++p) {
        ScenarioConfig cfg = base;
        cfg.fixed_users = {{c.rho_over_df, c.axis_values[p]}};
        const Scenario sc = build_scenario(cfg);
        for (std::size_t m = 0; m < methods.size(); ++m)
            jobs.push_back({"theta=" + format_number(c.axis_values[p]), p, m, sc, derive_seed(c.master_seed, p)});
    }
    const auto out = run_jobs(c, jobs, methods);

    CampaignResult res;
    res.table = make_table("angle_sweep", {"theta_deg", "method", "p_tx_mw", "ratio_to_fd", "status"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (fd_internal && jobs[i].method == fd_index) continue;
        const double fd = power_of(out[jobs[i].group * methods.size() + fd_index].run);
        const RunResult& r = out[i].run;
        res.table.rows.push_back({format_number(c.axis_values[jobs[i].group]), r.method.name(),
                                  format_number(power_of(r)), format_number(power_of(r) / fd), to_string(r.status)});
    }
    add_traces(c, jobs, out, res);
    write_dump(c, jobs, out, res.table.family);
    finish(c, res, out);
    return res;
}

CampaignResult run_snr_sweep(const Campaign& c) {
    const std::vector<Method> methods = methods_or_default(c);
    std::vector<Job> jobs;
    for (int r = 0; r < c.realizations; ++r) {
        ScenarioConfig cfg = c.base;
        cfg.fixed_users.clear();
        cfg.rng_seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
        for (std::size_t d = 0; d < c.axis_values.size(); ++d) {
            ScenarioConfig cd = cfg;
            cd.sinr_targets.assign(static_cast<std::size_t>(cd.n_users), db_to_linear(c.axis_values[d]));
            const Scenario sc = build_scenario(cd);
            for (std::size_t m = 0; m < methods.size(); ++m)
                jobs.push_back({"r=" + std::to_string(r) + ",delta_db=" + format_number(c.axis_values[d]), d, m, sc,
                                derive_seed(cfg.rng_seed, 1)});
        }
    }
    const auto out = run_jobs(c, jobs, methods);
    CampaignResult res;
    res.table = make_table("snr_sweep", {"delta_db", "method", "mean_p_tx_mw", "n_feasible"});
    aggregate(jobs, out, c.axis_values.size(), methods,
              [&](std::size_t g) { return std::vector<std::string>{format_number(c.axis_values[g])}; }, res.table);
    add_traces(c, jobs, out, res);
    finish(c, res, out);
    return res;
}

CampaignResult run_monte_carlo(const Campaign& c) {
    const std::vector<Method> methods = methods_or_default(c);
    std::vector<Job> jobs;
    for (int r = 0; r < c.realizations; ++r) {
        ScenarioConfig cfg = c.base;
        cfg.fixed_users.clear();
        cfg.rng_seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
        const Scenario sc = build_scenario(cfg);
        for (std::size_t m = 0; m < methods.size(); ++m)
            jobs.push_back({"r=" + std::to_string(r), static_cast<std::size_t>(r), m, sc, derive_seed(cfg.rng_seed, 1)});
    }
    const auto out = run_jobs(c, jobs, methods);
    CampaignResult res;
    res.table = make_table("monte_carlo", {"realization", "users", "method", "p_tx_mw", "sinr_db", "status"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunResult& r = out[i].run;
        res.table.rows.push_back({std::to_string(jobs[i].group), users_label(jobs[i].scenario), r.method.name(),
                                  format_number(power_of(r)), sinr_label(r), to_string(r.status)});
    }
    add_traces(c, jobs, out, res);
    write_dump(c, jobs, out, res.table.family);
    finish(c, res, out);
    return res;
}

CampaignResult run_user_count_sweep(const Campaign& c) {
    for (double kv : c.axis_values) {
        const int k = static_cast<int>(kv);
        if (k < 1 || k != kv) throw std::invalid_argument("user counts must be positive integers");
        if (k > c.base.n_r)
            throw std::invalid_argument("K=" + std::to_string(k) + " exceeds the " + std::to_string(c.base.n_r) +
                                        " RF chains");
    }
    const std::vector<Method> methods = methods_or_default(c);
    std::vector<Job> jobs;
    for (int r = 0; r < c.realizations; ++r) {
        for (std::size_t g = 0; g < c.axis_values.size(); ++g) {
            ScenarioConfig cfg = with_user_count(c.base, static_cast<int>(c.axis_values[g]));
            cfg.fixed_users.clear();
            cfg.rng_seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
            const Scenario sc = build_scenario(cfg);
            for (std::size_t m = 0; m < methods.size(); ++m)
                jobs.push_back({"r=" + std::to_string(r) + ",K=" + std::to_string(cfg.n_users), g, m, sc,
                                derive_seed(cfg.rng_seed, 1)});
        }
    }
    const auto out = run_jobs(c, jobs, methods);
    CampaignResult res;
    res.table = make_table("user_sweep", {"n_users", "method", "mean_p_tx_mw", "n_feasible"});
    aggregate(jobs, out, c.axis_values.size(), methods,
              [&](std::size_t g) { return std::vector<std::string>{std::to_string(static_cast<int>(c.axis_values[g]))}; },
              res.table);
    add_traces(c, jobs, out, res);
    finish(c, res, out);
    return res;
}

CampaignResult run_spacing_sweep(const Campaign& c) {
    const std::vector<Method> methods = methods_or_default(c);
    const ScenarioConfig& base = c.base;
    const ArrayGeometry base_geom = make_geometry(base);
    std::vector<int> n_elements;
    for (double dx : c.axis_values) n_elements.push_back(elements_for_spacing(base.n_c, base.dx_over_lambda, dx));

    std::vector<Job> jobs;
    for (int r = 0; r < c.realizations; ++r) {
        const std::uint64_t seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
        // Same positions at every spacing, drawn against the reference aperture.
        const auto users = sample_users(base, base_geom, base.n_users, seed);
        for (std::size_t g = 0; g < c.axis_values.size(); ++g) {
            Scenario sc;
            sc.config = base;
            sc.config.fixed_users.clear();
            sc.config.n_c = n_elements[g];
            sc.config.dx_over_lambda = c.axis_values[g];
            sc.geometry = make_geometry(sc.config);
            sc.fraunhofer = fraunhofer_distance(sc.geometry, sc.config.wavelength());
            sc.users = users;
            for (const auto& u : users) sc.channels.push_back(channel_vector(sc.geometry, u, sc.config));
            for (std::size_t m = 0; m < methods.size(); ++m)
                jobs.push_back({"r=" + std::to_string(r) + ",dx=" + format_number(c.axis_values[g]), g, m, sc,
                                derive_seed(seed, 1)});
        }
    }
    const auto out = run_jobs(c, jobs, methods);
    CampaignResult res;
    res.table = make_table("spacing_sweep", {"dx_over_lambda", "n_elements", "method", "mean_p_tx_mw", "n_feasible"});
    aggregate(jobs, out, c.axis_values.size(), methods,
              [&](std::size_t g) {
                  return std::vector<std::string>{format_number(c.axis_values[g]), std::to_string(n_elements[g])};
              },
              res.table);
    add_traces(c, jobs, out, res);
    finish(c, res, out);
    return res;
}

CampaignResult run_solve(const Campaign& c) {
    const std::vector<Method> methods = methods_or_default(c);
    const Scenario sc = build_scenario(c.base);
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < methods.size(); ++m) jobs.push_back({"solve", 0, m, sc, c.master_seed});
    const auto out = run_jobs(c, jobs, methods);

    CampaignResult res;
    res.table = make_table("solve", {"method", "p_tx_mw", "sinr_db", "iterations", "status"});
    nlohmann::json dump;
    dump["scenario"] = scenario_config_to_json(c.base);
    dump["users"] = nlohmann::json::array();
    for (const auto& u : sc.users) dump["users"].push_back({{"rho_m", u.rho}, {"theta_deg", u.theta * 180.0 / kPi}});
    dump["results"] = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunResult& r = out[i].run;
        res.table.rows.push_back({r.method.name(), format_number(power_of(r)), sinr_label(r),
                                  std::to_string(r.trace.empty() ? 0 : r.trace.back().t), to_string(r.status)});
        dump["results"].push_back({{"method", r.method.name()},
                                   {"status", to_string(r.status)},
                                   {"p_tx_mw", r.p_tx},
                                   {"q", to_json(r.weights)},
                                   {"w", to_json(r.precoders)}});
    }
    add_traces(c, jobs, out, res);
    finish(c, res, out);
    if (!c.out_dir.empty()) {
        std::ofstream f(c.out_dir / "solve.json", std::ios::binary);
        f << dump.dump(2) << '\n';
    }
    return res;
}

}  // namespace holobeam
